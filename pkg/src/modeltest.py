#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import unittest

import numpy as np

from common import ConfigurationError
from model import (Graph, Commodity, DetInstance, Family, RandomizationSelection, ScenarioMatrix,
                   nodeBalance, totalVolume, validate, flatten, unflatten)


def smallInstance(withB:bool=False) ->DetInstance:
    """3 nodes, 3 arcs, 2 commodities"""
    graph = Graph(3, [(0, 1), (1, 2), (0, 2)])
    commodities = [Commodity(0, 2, 10.0), Commodity(1, 2, 5.0)]
    comCapacity = np.full((3, 2), 7.0) if withB else None
    return DetInstance(graph, commodities, [1.0, 2.0, 3.0], [10.0, 20.0, 30.0],
                       np.arange(6, dtype=float).reshape(3, 2), comCapacity, useComCapacity=withB)


class Balance(unittest.TestCase):

    """node balances and volume"""

    def testBalance(self) ->None:
        """+d at the origin, -d at the destination"""
        instance = smallInstance()
        self.assertEqual(list(nodeBalance(instance, 0)), [10.0, 0.0, -10.0])
        self.assertEqual(list(nodeBalance(instance, 1, demandOverride=4.0)), [0.0, 4.0, -4.0])
        self.assertRaises(IndexError, nodeBalance, instance, 2)

    def testVolume(self) ->None:
        """sum of demands"""
        self.assertEqual(totalVolume(smallInstance()), 15.0)


class Validation(unittest.TestCase):

    """every invariant violation is reported"""

    def testValid(self) ->None:
        """the small instance is fine"""
        self.assertEqual(validate(smallInstance()), [])
        self.assertEqual(validate(smallInstance(withB=True)), [])

    def testNegativeCapacity(self) ->None:
        """names the arc"""
        problems = validate(smallInstance().replace(capacity=[10.0, -1.0, 30.0]))
        self.assertEqual(len(problems), 1)
        self.assertIn('capacity -1.0 on arc 1', problems[0])

    def testGraphProblems(self) ->None:
        """self-loops and parallel arcs"""
        self.assertIn('self-loop at arc 0', Graph(2, [(0, 0)]).violations())
        self.assertIn('arc 1 is parallel to arc 0', Graph(2, [(0, 1), (0, 1)], noParallel=True).violations())
        self.assertEqual(Graph(2, [(0, 1), (0, 1)]).violations(), [])

    def testIntegerFlags(self) ->None:
        """fractional capacities with capInteger"""
        instance = smallInstance().replace(capacity=[10.5, 20.0, 30.0], capInteger=True)
        self.assertEqual(len(validate(instance)), 1)

    def testReadOnly(self) ->None:
        """instances are immutable"""
        instance = smallInstance()
        with self.assertRaises(ValueError):
            instance.capacity[0] = 5.0


class Selection(unittest.TestCase):

    """flattening of the randomized parameters"""

    def testSizes(self) ->None:
        """demands plus arc capacities"""
        mask = Family.DEMAND | Family.ARC_CAPACITY
        for arcs, coms, expected in ((60, 25, 85), (83, 50, 133), (220, 100, 320), (315, 200, 515)):
            self.assertEqual(RandomizationSelection(mask, arcs, coms).variableCount, expected)
        self.assertEqual(RandomizationSelection(Family(31), 3, 2).variableCount, 2 + 3 + 6 + 3 + 6)

    def testOrder(self) ->None:
        """demands first, then capacities"""
        instance = smallInstance()
        selection = RandomizationSelection.forInstance(3, instance)
        self.assertEqual(list(flatten(instance, selection)), [10.0, 5.0, 10.0, 20.0, 30.0])
        self.assertEqual(selection.describe(0), 'demand of commodity 1')
        self.assertEqual(selection.describe(2), 'capacity of arc 1')
        self.assertRaises(IndexError, selection.describe, 5)

    def testUnflatten(self) ->None:
        """only the selected fields change"""
        instance = smallInstance()
        selection = RandomizationSelection.forInstance(3, instance)
        column = np.array([11.0, 6.0, 12.0, 22.0, 33.0])
        changed = unflatten(instance, selection, column)
        self.assertEqual(list(changed.demands), [11.0, 6.0])
        self.assertEqual(list(changed.capacity), [12.0, 22.0, 33.0])
        self.assertTrue(np.array_equal(changed.varCost, instance.varCost))
        self.assertTrue(np.array_equal(changed.fixedCost, instance.fixedCost))
        self.assertTrue(np.array_equal(flatten(changed, selection), column))

    def testAllFamilies(self) ->None:
        """unflatten is the inverse of flatten"""
        instance = smallInstance(withB=True)
        selection = RandomizationSelection.forInstance(31, instance)
        column = np.arange(1.0, selection.variableCount + 1.0)
        self.assertTrue(np.array_equal(flatten(unflatten(instance, selection, column), selection), column))

    def testVariableIndex(self) ->None:
        """one (family, indices) pair per variable, matching describe"""
        selection = RandomizationSelection(Family(31), 3, 2)
        index = selection.variableIndex
        self.assertEqual(len(index), selection.variableCount)
        self.assertEqual(index[:3], [(Family.DEMAND, (0, )), (Family.DEMAND, (1, )), (Family.ARC_CAPACITY, (0, ))])
        self.assertEqual(index[5], (Family.COM_CAPACITY, (0, 0)))
        self.assertEqual(index[6], (Family.COM_CAPACITY, (0, 1)))
        self.assertEqual(index[-1], (Family.VAR_COST, (2, 1)))
        for variable, (family, _) in enumerate(index):
            self.assertEqual(int(selection.familyOf()[variable]), int(family))
        self.assertEqual(selection.describe(6), 'commodity capacity of arc 1 commodity 2')

    def testIntegerFlagsCleared(self) ->None:
        """randomized capacities are real valued"""
        instance = smallInstance(withB=True).replace(capInteger=True, bndInteger=True)
        selection = RandomizationSelection.forInstance(Family.ARC_CAPACITY | Family.COM_CAPACITY, instance)
        changed = unflatten(instance, selection, flatten(instance, selection) + 0.5)
        self.assertFalse(changed.capInteger)
        self.assertFalse(changed.bndInteger)
        self.assertEqual(validate(changed), [])
        demandsOnly = RandomizationSelection.forInstance(Family.DEMAND, instance)
        self.assertTrue(unflatten(instance, demandsOnly, [9.5, 4.5]).capInteger)

    def testMissingComCapacity(self) ->None:
        """b selected but not present"""
        instance = smallInstance()
        selection = RandomizationSelection.forInstance(Family.COM_CAPACITY, instance)
        self.assertRaises(ConfigurationError, flatten, instance, selection)


class Scenarios(unittest.TestCase):

    """scenario matrices"""

    def testRetain(self) ->None:
        """kept probabilities are rescaled"""
        matrix = ScenarioMatrix([[1.0, 2.0, 3.0, 4.0]], [0.1, 0.2, 0.3, 0.4])
        kept = matrix.retain([True, False, True, False])
        self.assertEqual(list(kept.values[0]), [1.0, 3.0])
        self.assertTrue(np.allclose(kept.probabilities, [0.25, 0.75]))

    def testBadProbabilities(self) ->None:
        """they must sum to 1"""
        self.assertRaises(ValueError, ScenarioMatrix, [[1.0, 2.0]], [0.5, 0.6])
        self.assertRaises(ValueError, ScenarioMatrix, [[1.0, 2.0]], [1.0, 0.0])

    def testEquiprobableDefault(self) ->None:
        """no probabilities given"""
        self.assertTrue(np.allclose(ScenarioMatrix(np.ones((2, 4))).probabilities, 0.25))


if __name__ == '__main__':
    unittest.main()
