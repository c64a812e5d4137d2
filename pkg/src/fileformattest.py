#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import unittest
from typing import Dict

import numpy as np
from scipy import optimize

from fileformat import (ParseError, formatReal, writeStd, readStd, writeGraph, readGraph,
                        writeMoments, readMoments, writeCorr, readCorr, writeProbs, readProbs,
                        writeHkwMatrix, readHkwMatrix, writeStochastic, readStochastic,
                        writeLp, writeMps, arcNames)
from generator import GenConfig, generate
from model import Graph, Commodity, DetInstance, Family, RandomizationSelection, ScenarioMatrix
from modeltest import smallInstance
from moments import MomentTargets, CorrelationMatrix
from rand import PcgRandom


def mpsRelaxation(text:str) ->float:
    """read a fixed MPS text and solve its LP relaxation with scipy"""
    senses:Dict[str, str] = {}
    columns:Dict[str, Dict[str, float]] = {}
    rhs:Dict[str, float] = {}
    upper:Dict[str, float] = {}
    section = ''
    for line in text.splitlines():
        if not line.startswith(' '):
            section = line.split()[0]
            continue
        fields = line.split()
        if section == 'ROWS':
            senses[fields[1]] = fields[0]
        elif section == 'COLUMNS':
            if fields[1] == "'MARKER'":
                continue
            entries = columns.setdefault(fields[0], {})
            for idx in range(1, len(fields), 2):
                entries[fields[idx]] = float(fields[idx + 1])
        elif section == 'RHS':
            rhs[fields[1]] = float(fields[2])
        elif section == 'BOUNDS':
            upper[fields[2]] = float(fields[3])
    names = list(columns)
    cost = [columns[x].get('obj', 0.0) for x in names]
    eqRows = [x for x, y in senses.items() if y == 'E']
    leRows = [x for x, y in senses.items() if y == 'L']
    result = optimize.linprog(
        cost,
        A_ub=[[columns[x].get(row, 0.0) for x in names] for row in leRows],
        b_ub=[rhs.get(x, 0.0) for x in leRows],
        A_eq=[[columns[x].get(row, 0.0) for x in names] for row in eqRows],
        b_eq=[rhs.get(x, 0.0) for x in eqRows],
        bounds=[(0.0, upper.get(x)) for x in names], method='highs')
    assert result.status == 0, result.message
    return float(result.fun)


class Std(unittest.TestCase):

    """the deterministic instance format"""

    def testLayout(self) ->None:
        """header, arcs, commodities, cost rows"""
        lines = writeStd(smallInstance()).splitlines()
        self.assertEqual(lines[0], '3 3 2 0')
        self.assertEqual(lines[1], '1 2 1.0 10.0')
        self.assertEqual(lines[4], '1 3 10.0')
        self.assertEqual(lines[6], '0.0 1.0')
        self.assertEqual(len(lines), 1 + 3 + 2 + 3)

    def testGridHeader(self) ->None:
        """3x3 grid with 2 commodities"""
        instance = generate(GenConfig(topology='grid', commodityCount=2, extraRandomArcs=0), PcgRandom())
        self.assertEqual(writeStd(instance).splitlines()[0], '9 24 2 0')

    def testRoundTrip(self) ->None:
        """random instances, with and without b"""
        rnd = PcgRandom(31, 32)
        for idx in range(100):
            config = GenConfig(nodeCount=rnd.uniformInt(3, 8), commodityCount=rnd.uniformInt(1, 6),
                               extraRandomArcs=rnd.uniformInt(1, 6), useComCapacity=bool(idx % 2),
                               allowParallel=True)
            instance = generate(config, PcgRandom(idx, idx))
            self.assertEqual(readStd(writeStd(instance)), instance)

    def testNoCommodities(self) ->None:
        """|K| = 0 writes empty cost lines"""
        instance = DetInstance(Graph(2, [(0, 1)]), [], [1.0], [10.0], np.zeros((1, 0)))
        text = writeStd(instance)
        self.assertEqual(text, '2 1 0 0\n1 2 1.0 10.0\n\n')
        self.assertEqual(readStd(text), instance)
        withB = instance.replace(comCapacity=np.zeros((1, 0)), useComCapacity=True)
        self.assertEqual(readStd(writeStd(withB)), withB)

    def testCrLf(self) ->None:
        """Windows line endings are accepted"""
        text = writeStd(smallInstance(withB=True)).replace('\n', '\r\n')
        self.assertEqual(readStd(text), smallInstance(withB=True))

    def testErrors(self) ->None:
        """line numbers point to the problem"""
        lines = writeStd(smallInstance()).splitlines()
        bad = list(lines)
        bad[2] = '2 3 2.0 -20.0'
        with self.assertRaises(ParseError) as context:
            readStd('\n'.join(bad), 'bad.std')
        self.assertEqual(context.exception.lineNr, 3)
        self.assertEqual(context.exception.fileName, 'bad.std')
        bad = list(lines)
        bad[1] = '1 4 1.0 10.0'
        self.assertRaises(ParseError, readStd, '\n'.join(bad))
        self.assertRaises(ParseError, readStd, '\n'.join(lines[:-1]))
        self.assertRaises(ParseError, readStd, '\n'.join(lines + ['1.0']))


class Matrices(unittest.TestCase):

    """the small formats"""

    def testGraph(self) ->None:
        """parallel arcs survive"""
        graph = Graph(3, [(0, 1), (0, 1), (2, 0)])
        self.assertEqual(writeGraph(graph), '3 3\n1 2\n1 2\n3 1\n')
        self.assertEqual(readGraph(writeGraph(graph)), graph)
        self.assertRaises(ParseError, readGraph, '2 1\n1 1\n')

    def testMoments(self) ->None:
        """n 4"""
        targets = MomentTargets([[10.0, 1.5, 0.0, 1.8], [0.1, 1e-7, -0.5, 2.4]])
        text = writeMoments(targets)
        self.assertTrue(text.startswith('2 4\n'))
        self.assertEqual(readMoments(text), targets)
        self.assertRaises(ParseError, readMoments, '1 3\n1.0 2.0 3.0\n')

    def testCorr(self) ->None:
        """square and symmetric"""
        corr = CorrelationMatrix([[1.0, 0.1 + 0.2], [0.1 + 0.2, 1.0]])
        self.assertEqual(readCorr(writeCorr(corr)), corr)
        self.assertRaises(ParseError, readCorr, '2 2\n1.0 0.5\n0.4 1.0\n')

    def testProbabilities(self) ->None:
        """one per line, sum 1"""
        probs = np.array([0.1, 0.2, 0.7])
        self.assertEqual(writeProbs(probs), '3\n0.1\n0.2\n0.7\n')
        self.assertTrue(np.array_equal(readProbs(writeProbs(probs)), probs))
        self.assertRaises(ParseError, readProbs, '2\n0.5\n0.6\n')

    def testHkwMatrix(self) ->None:
        """n s"""
        scenarios = ScenarioMatrix(PcgRandom().standardNormals((3, 7)))
        text = writeHkwMatrix(scenarios)
        self.assertTrue(text.startswith('3 7\n'))
        self.assertEqual(readHkwMatrix(text), scenarios)

    def testExactReals(self) ->None:
        """shortest text that reads back the same double"""
        for value in (0.1, 1.0 / 3.0, 1e-300, 123456789.123, np.float64(2.5)):
            self.assertEqual(float(formatReal(value)), float(value))
        self.assertEqual(formatReal(np.float64(2.5)), '2.5')


class Stochastic(unittest.TestCase):

    """one complete instance per scenario"""

    def testRoundTrip(self) ->None:
        """numbers, probabilities and instances"""
        base = smallInstance()
        selection = RandomizationSelection.forInstance(Family.DEMAND, base)
        scenarios = ScenarioMatrix([[9.0, 11.0], [4.0, 6.0]], [0.25, 0.75])
        result = readStochastic(writeStochastic(base, selection, scenarios, [3, 8]))
        self.assertEqual([x[0] for x in result], [3, 8])
        self.assertEqual([x[1] for x in result], [0.25, 0.75])
        self.assertEqual(list(result[1][2].demands), [11.0, 6.0])
        self.assertTrue(np.array_equal(result[1][2].capacity, base.capacity))

    def testHeader(self) ->None:
        """default numbering starts at 1"""
        base = smallInstance()
        selection = RandomizationSelection.forInstance(Family.DEMAND, base)
        text = writeStochastic(base, selection, ScenarioMatrix([[9.0], [4.0]]))
        self.assertTrue(text.startswith('SCENARIO 1 1.0\n3 3 2 0\n'))
        self.assertRaises(ValueError, writeStochastic, base, selection, ScenarioMatrix([[9.0], [4.0]]), [1, 2])


class Models(unittest.TestCase):

    """LP and MPS output of a two node instance"""

    def twoNodes(self) ->DetInstance:
        """parallel arcs between two nodes"""
        return DetInstance(Graph(2, [(0, 1), (0, 1)]), [Commodity(0, 1, 4.0)], [10.0, 3.0], [5.0, 2.0],
                           [[1.0], [2.0]])

    def testNames(self) ->None:
        """parallel arcs get a suffix"""
        self.assertEqual(arcNames(self.twoNodes().graph), ['1_2', '1_2p2'])

    def testLp(self) ->None:
        """sections and rows"""
        text = writeLp(self.twoNodes())
        lines = text.splitlines()
        for section in ('Minimize', 'Subject To', 'Bounds', 'Binaries', 'End'):
            self.assertIn(section, lines)
        self.assertIn(' obj: 10.0 y_1_2 + 1.0 x_1_2_1 + 3.0 y_1_2p2 + 2.0 x_1_2p2_1', lines)
        self.assertIn(' flow_1_1: 1.0 x_1_2_1 + 1.0 x_1_2p2_1 = 4.0', lines)
        self.assertIn(' bundle_1_2: 1.0 x_1_2_1 - 5.0 y_1_2 <= 0.0', lines)
        self.assertIn(' y_1_2p2', lines)

    def testMps(self) ->None:
        """fixed sections, binaries between markers"""
        text = writeMps(self.twoNodes())
        lines = text.splitlines()
        self.assertEqual(lines[0].split(), ['NAME', 'mcfndp'])
        self.assertEqual(lines[-1], 'ENDATA')
        sections = [x for x in lines if x and not x.startswith(' ')]
        self.assertEqual(sections, ['NAME          mcfndp', 'ROWS', 'COLUMNS', 'RHS', 'BOUNDS', 'ENDATA'])
        fields = [x.split() for x in lines]
        self.assertIn(['N', 'obj'], fields)
        self.assertIn(['E', 'flow_1_1'], fields)
        self.assertIn(['L', 'bundle_1_2p2'], fields)
        self.assertIn(['y_1_2', 'bundle_1_2', '-5.0'], fields)
        self.assertIn(['RHS', 'flow_1_1', '4.0'], fields)
        self.assertIn(['RHS', 'flow_2_1', '-4.0'], fields)
        self.assertIn(['UP', 'BND', 'y_1_2p2', '1'], fields)
        start = fields.index(['MARKER', "'MARKER'", "'INTORG'"])
        end = fields.index(['MARKER', "'MARKER'", "'INTEND'"])
        self.assertTrue(all(x[0].startswith('y_') for x in fields[start + 1:end]))

    def testMpsRelaxation(self) ->None:
        """the cheaper arc carries everything. Per unit: 1 + 10/5 against 2 + 3/2"""
        self.assertAlmostEqual(mpsRelaxation(writeMps(self.twoNodes())), 12.0, places=9)

    def testStrongRows(self) ->None:
        """one row per arc and commodity with b"""
        instance = self.twoNodes().replace(comCapacity=[[3.0], [1.0]], useComCapacity=True)
        self.assertIn(' strong_1_2p2_1: 1.0 x_1_2p2_1 - 1.0 y_1_2p2 <= 0.0', writeLp(instance).splitlines())


if __name__ == '__main__':
    unittest.main()
