#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import unittest

import numpy as np

import feasibility
from common import Internal
from feasibility import (buildFeasibilityLp, checkFeasible, filterScenarios, scenarioInstance,
                         ShapeError, EmptyResult)
from generator import GenConfig, generate
from hkw import HkwOptions, generateScenarios
from model import Graph, Commodity, DetInstance, Family, RandomizationSelection, ScenarioMatrix, flatten
from moments import Distribution, assembleTargets, assembleCorrelation
from rand import PcgRandom
from simplex import WarmStartSolver, OPTIMAL


def oneArc(demand:float, capacity:float=10.0, comCapacity:float=0.0) ->DetInstance:
    """node 1 to node 2"""
    useB = comCapacity > 0
    return DetInstance(Graph(2, [(0, 1)]), [Commodity(0, 1, demand)], [1.0], [capacity], [[1.0]],
                       [[comCapacity]] if useB else None, useComCapacity=useB)


def triangle(demand:float) ->DetInstance:
    """two routes from node 1 to node 3, each with capacity 5"""
    return DetInstance(Graph(3, [(0, 1), (1, 2), (0, 2)]), [Commodity(0, 2, demand)],
                       [1.0, 1.0, 1.0], [5.0, 5.0, 5.0], [[1.0], [1.0], [1.0]])


def gridScenarios(scenarioCount:int, seed:int) ->tuple:
    """(base, selection, scenarios): a 3x3 grid with 6 commodities, demands
    and arc capacities drawn around their base values"""
    base = generate(GenConfig(topology='grid', commodityCount=6, extraRandomArcs=0,
                              capMin=40.0, capMax=90.0), PcgRandom(seed, seed))
    selection = RandomizationSelection.forInstance(Family.DEMAND | Family.ARC_CAPACITY, base)
    rnd = PcgRandom(seed, seed + 1)
    factors = rnd.uniformReals(0.5, 1.5, (selection.variableCount, scenarioCount))
    return base, selection, ScenarioMatrix(flatten(base, selection)[:, np.newaxis] * factors)


class PhaseOne(unittest.TestCase):

    """the feasibility LP of a single instance"""

    def testShape(self) ->None:
        """flows, then slack pairs. Flow rows, then bundle rows"""
        lp = buildFeasibilityLp(triangle(8.0))
        self.assertEqual(lp.rowCount, 3 * 1 + 3)
        self.assertEqual(lp.variableCount, 3 * 1 + 2 * 3 * 1)
        self.assertEqual(lp.flowCount, 3)
        self.assertEqual(list(lp.rhs), [8.0, 0.0, -8.0, 5.0, 5.0, 5.0])

    def testFeasible(self) ->None:
        """demand fits"""
        feasible, objective = checkFeasible(buildFeasibilityLp(oneArc(5.0)))
        self.assertTrue(feasible)
        self.assertAlmostEqual(objective, 0.0, places=12)
        self.assertTrue(checkFeasible(buildFeasibilityLp(triangle(8.0)))[0])
        self.assertTrue(checkFeasible(buildFeasibilityLp(triangle(10.0)))[0])

    def testInfeasible(self) ->None:
        """the slack at both ends covers the excess"""
        feasible, objective = checkFeasible(buildFeasibilityLp(oneArc(15.0)))
        self.assertFalse(feasible)
        self.assertAlmostEqual(objective, 10.0, places=9)
        feasible, objective = checkFeasible(buildFeasibilityLp(triangle(11.0)))
        self.assertFalse(feasible)
        self.assertAlmostEqual(objective, 2.0, places=9)

    def testCommodityCapacity(self) ->None:
        """b bounds the flow of the commodity"""
        feasible, objective = checkFeasible(buildFeasibilityLp(oneArc(8.0, comCapacity=4.0)))
        self.assertFalse(feasible)
        self.assertAlmostEqual(objective, 8.0, places=9)

    def testWarmStartedVerdicts(self) ->None:
        """a chain of LPs gives the verdicts of independent solves"""
        base, selection, scenarios = gridScenarios(40, 3)
        solver = WarmStartSolver()
        for scenario in range(scenarios.scenarioCount):
            lp = buildFeasibilityLp(scenarioInstance(base, selection, scenarios.column(scenario)))
            warm = checkFeasible(lp, solver)
            cold = checkFeasible(lp)
            self.assertEqual(warm[0], cold[0])
            self.assertAlmostEqual(warm[1], cold[1], delta=1e-7 * max(1.0, lp.volume))
        self.assertEqual(solver.coldStarts, 1)

    def testFeasibleMeansFlow(self) ->None:
        """the flows of a feasible scenario satisfy all rows without slack"""
        base, selection, scenarios = gridScenarios(30, 5)
        solver = WarmStartSolver()
        feasibleCount = 0
        for scenario in range(scenarios.scenarioCount):
            lp = buildFeasibilityLp(scenarioInstance(base, selection, scenarios.column(scenario)))
            result = solver.solve(lp)
            self.assertEqual(result.status, OPTIMAL)
            assert result.values is not None
            if result.objective > lp.tolerance():
                continue
            feasibleCount += 1
            flows = result.values.copy()
            flows[lp.flowCount:] = 0.0
            self.assertLessEqual(lp.violation(flows), lp.tolerance())
        self.assertGreater(feasibleCount, 0)


class Screening(unittest.TestCase):

    """filterScenarios"""

    def setUp(self) ->None:
        self.base = oneArc(5.0)
        self.selection = RandomizationSelection.forInstance(Family.DEMAND, self.base)
        self.scenarios = ScenarioMatrix([[5.0, 15.0, 8.0, -1.0]])

    def testFilter(self) ->None:
        """infeasible and invalid scenarios go"""
        retained, report = filterScenarios(self.base, self.selection, self.scenarios)
        self.assertEqual(list(retained.values[0]), [5.0, 8.0])
        self.assertTrue(np.allclose(retained.probabilities, [0.5, 0.5]))
        self.assertEqual((report.testedCount, report.rejectedCount, report.retainedCount), (4, 2, 2))
        self.assertEqual(report.invalidCount, 1)
        self.assertEqual(report.perScenario[3].objective, float('inf'))
        self.assertEqual(report.summary(), '4 scenarios tested, 2 rejected (1 with negative values)')

    def testWorkers(self) ->None:
        """threads do not change the outcome"""
        for base, selection, scenarios in ((self.base, self.selection, self.scenarios), gridScenarios(50, 7)):
            sequential = filterScenarios(base, selection, scenarios)
            for workers in (2, 3, 8):
                concurrent = filterScenarios(base, selection, scenarios, workers=workers)
                self.assertEqual(sequential[0], concurrent[0])
                self.assertEqual([x.scenario for x in concurrent[1].perScenario],
                                 list(range(scenarios.scenarioCount)))
                for first, second in zip(sequential[1].perScenario, concurrent[1].perScenario):
                    self.assertEqual(first.feasible, second.feasible)
                    self.assertAlmostEqual(first.objective, second.objective, delta=1e-6)

    def testWorkerFailure(self) ->None:
        """an exception in a worker thread reaches the caller"""
        def failing(instance:DetInstance) ->list:
            if instance.demands[0] == 8.0:
                raise ArithmeticError('scenario 3')
            return []
        original = feasibility.validate
        feasibility.validate = failing
        try:
            with self.assertRaises(ArithmeticError):
                filterScenarios(self.base, self.selection, self.scenarios, workers=2)
        finally:
            feasibility.validate = original

    def testIdempotent(self) ->None:
        """filtering the retained scenarios again keeps all of them"""
        base, selection, scenarios = gridScenarios(40, 11)
        retained, report = filterScenarios(base, selection, scenarios)
        again, secondReport = filterScenarios(base, selection, retained)
        self.assertIs(again, retained)
        self.assertEqual(secondReport.rejectedCount, 0)
        self.assertEqual(secondReport.testedCount, report.retainedCount)

    def testLargeCapacities(self) ->None:
        """every arc carries the total demand on a strongly connected graph"""
        base = generate(GenConfig(topology='grid', commodityCount=8, extraRandomArcs=0), PcgRandom(13, 14))
        selection = RandomizationSelection.forInstance(Family.DEMAND, base)
        demands = PcgRandom(15, 16).uniformReals(1.0, 60.0, (base.comCount, 60))
        wide = base.replace(capacity=np.full(base.arcCount, float(demands.sum(axis=0).max())))
        retained, report = filterScenarios(wide, selection, ScenarioMatrix(demands))
        self.assertEqual(report.rejectedCount, 0)
        self.assertEqual(retained.scenarioCount, 60)

    def testIntegerCapacitiesRandomized(self) ->None:
        """an instance with integer capacities, scenarios from moment matching"""
        base = generate(GenConfig(topology='grid', commodityCount=5, extraRandomArcs=0, capInteger=True,
                                  capMin=500.0, capMax=600.0), PcgRandom(17, 18))
        self.assertTrue(base.capInteger)
        selection = RandomizationSelection.forInstance(Family.DEMAND | Family.ARC_CAPACITY, base)
        targets = assembleTargets(base, selection, Distribution.UNIFORM, 0.25, 0.25)
        corr = assembleCorrelation(selection, {})
        scenarios = generateScenarios(targets, corr, HkwOptions(100, verbosity=0), None, PcgRandom(19, 20))
        retained, report = filterScenarios(base, selection, scenarios)
        self.assertEqual(report.invalidCount, 0)
        self.assertEqual(report.rejectedCount, 0)
        self.assertEqual(retained.scenarioCount, 100)
        self.assertFalse(scenarioInstance(base, selection, scenarios.column(0)).capInteger)

    def testAllKept(self) ->None:
        """nothing to rescale"""
        scenarios = ScenarioMatrix([[1.0, 2.0, 3.0]], [0.2, 0.3, 0.5])
        retained, report = filterScenarios(self.base, self.selection, scenarios)
        self.assertIs(retained, scenarios)
        self.assertEqual(report.rejectedCount, 0)

    def testAllRejected(self) ->None:
        """there must be something left"""
        self.assertRaises(EmptyResult, filterScenarios, self.base, self.selection,
                          ScenarioMatrix([[11.0, 12.0]]))

    def testShapes(self) ->None:
        """rows must fit the selection"""
        self.assertRaises(ShapeError, filterScenarios, self.base, self.selection, ScenarioMatrix(np.ones((2, 3))))
        self.assertRaises(ShapeError, scenarioInstance, self.base, self.selection, [1.0, 2.0])
        self.assertEqual(scenarioInstance(self.base, self.selection, [7.0]).demands[0], 7.0)

    def testTimeIsLogged(self) ->None:
        """at INFO"""
        with self.assertLogs(Internal.logger, level='INFO') as logs:
            filterScenarios(self.base, self.selection, self.scenarios)
        self.assertTrue(any('feasibility check took' in x for x in logs.output))


if __name__ == '__main__':
    unittest.main()
