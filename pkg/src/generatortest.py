#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import unittest

import numpy as np
import networkx as nx

from common import ConfigurationError
from generator import (GenConfig, Topology, OdMode, EmptyGraph, Saturation,
                       gridArcs, circularArcs, generate, warnIfNotStronglyConnected)
from model import Graph, validate, totalVolume
from rand import PcgRandom


class Topologies(unittest.TestCase):

    """the core structures"""

    def testGrid(self) ->None:
        """4-neighbour lattice in both directions"""
        arcs = gridArcs(3, 3)
        self.assertEqual(len(arcs), 24)
        self.assertEqual(len(set(arcs)), 24)
        self.assertTrue(all((head, tail) in arcs for tail, head in arcs))
        self.assertIn((0, 1), arcs)
        self.assertIn((0, 3), arcs)
        self.assertNotIn((0, 4), arcs)

    def testCircle(self) ->None:
        """i <-> i+1"""
        arcs = circularArcs(5)
        self.assertEqual(len(arcs), 10)
        self.assertIn((4, 0), arcs)
        self.assertIn((0, 4), arcs)

    def testGridInstance(self) ->None:
        """no extra arcs"""
        instance = generate(GenConfig(topology='grid', gridX=3, gridY=3, commodityCount=2,
                                      extraRandomArcs=0), PcgRandom())
        self.assertEqual((instance.nodeCount, instance.arcCount, instance.comCount), (9, 24, 2))
        self.assertEqual(instance.graph.firstExtra, 24)

    def testFileTopology(self) ->None:
        """the input graph comes first"""
        graphIn = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        instance = generate(GenConfig(topology='file', nodeCount=4, commodityCount=3, extraRandomArcs=2),
                            PcgRandom(), graphIn)
        self.assertEqual(instance.graph.arcs[:4], graphIn.arcs)
        self.assertEqual(instance.arcCount, 6)
        self.assertRaises(ConfigurationError, generate, GenConfig(topology='file'), PcgRandom())

    def testEmptyRandomGraph(self) ->None:
        """random topology needs arcs"""
        self.assertRaises(EmptyGraph, generate, GenConfig(extraRandomArcs=0), PcgRandom())

    def testSaturation(self) ->None:
        """3 nodes hold at most 6 distinct arcs"""
        self.assertRaises(Saturation, generate, GenConfig(nodeCount=3, extraRandomArcs=7), PcgRandom())
        instance = generate(GenConfig(nodeCount=3, extraRandomArcs=7, allowParallel=True), PcgRandom())
        self.assertEqual(instance.arcCount, 7)

    def testConnectivity(self) ->None:
        """the diagnostic agrees with networkx"""
        self.assertTrue(warnIfNotStronglyConnected(Graph(3, circularArcs(3))))
        self.assertFalse(warnIfNotStronglyConnected(Graph(3, [(0, 1), (1, 2)])))


class Pipeline(unittest.TestCase):

    """the complete generator"""

    def testDefault(self) ->None:
        """valid, no parallel arcs, ranges respected"""
        config = GenConfig()
        instance = generate(config, PcgRandom())
        self.assertEqual(validate(instance), [])
        self.assertEqual(instance.arcCount, 60)
        self.assertEqual(len(set(instance.graph.arcs)), 60)
        self.assertTrue(np.all((instance.fixedCost >= 50.0) & (instance.fixedCost < 150.0)))
        self.assertTrue(np.all((instance.varCost >= 5.0) & (instance.varCost < 15.0)))
        self.assertTrue(np.all((instance.demands >= 5.0) & (instance.demands < 50.0)))
        self.assertIsNone(instance.comCapacity)

    def testDeterministic(self) ->None:
        """same seed and stream, same instance"""
        self.assertEqual(generate(GenConfig(), PcgRandom(1, 2)), generate(GenConfig(), PcgRandom(1, 2)))
        self.assertNotEqual(generate(GenConfig(), PcgRandom(1, 2)), generate(GenConfig(), PcgRandom(1, 3)))

    def testSweep(self) ->None:
        """every generated instance is valid"""
        rnd = PcgRandom(99, 99)
        for _ in range(20):
            config = GenConfig(
                topology=('random', 'grid', 'circular')[rnd.uniformInt(0, 2)],
                nodeCount=rnd.uniformInt(4, 12), gridX=rnd.uniformInt(2, 4), gridY=rnd.uniformInt(2, 4),
                commodityCount=rnd.uniformInt(1, 10), extraRandomArcs=rnd.uniformInt(1, 3),
                useComCapacity=bool(rnd.uniformInt(0, 1)), capInteger=bool(rnd.uniformInt(0, 1)),
                bndInteger=bool(rnd.uniformInt(0, 1)),
                ratioZeroFix=rnd.uniformReal(0.0, 1.0), ratioFullCap=rnd.uniformReal(0.0, 1.0),
                ratioZeroBnd=rnd.uniformReal(0.0, 1.0), ratioMaxBnd=rnd.uniformReal(0.0, 1.0),
                capMultiplier=rnd.uniformReal(0.1, 1.0), fixMultiplier=rnd.uniformReal(1.0, 3.0))
            instance = generate(config, PcgRandom(rnd.uniformInt(0, 1000), 5))
            self.assertEqual(validate(instance), [], str(config))

    def testSharedEndpoints(self) ->None:
        """one pair for all commodities"""
        instance = generate(GenConfig(odMode=OdMode.SHARED), PcgRandom())
        self.assertEqual(len({(x.origin, x.destination) for x in instance.commodities}), 1)

    def testMultipleSourcesAndSinks(self) ->None:
        """every commodity becomes sources * sinks equal parts"""
        instance = generate(GenConfig(odMode='random', commodityCount=3, srcMin=2, srcMax=2,
                                      snkMin=2, snkMax=2), PcgRandom())
        self.assertEqual(instance.comCount, 12)
        for group in range(3):
            parts = instance.commodities[4 * group:4 * group + 4]
            self.assertEqual(len({x.demand for x in parts}), 1)
            self.assertEqual(len({x.origin for x in parts}), 2)
            self.assertEqual(len({x.destination for x in parts}), 2)
            self.assertFalse({x.origin for x in parts} & {x.destination for x in parts})


class Tuning(unittest.TestCase):

    """random arc tuning and the global multipliers"""

    def testZeroFixedCosts(self) ->None:
        """all arcs"""
        instance = generate(GenConfig(ratioZeroFix=1.0), PcgRandom())
        self.assertTrue(np.all(instance.fixedCost == 0.0))

    def testFullCapacities(self) ->None:
        """capacity becomes the total volume"""
        instance = generate(GenConfig(ratioFullCap=1.0), PcgRandom())
        self.assertTrue(np.all(instance.capacity == totalVolume(instance)))

    def testExtrasOnly(self) ->None:
        """the ring keeps its fixed costs"""
        instance = generate(GenConfig(topology=Topology.CIRCULAR, nodeCount=5, extraRandomArcs=4,
                                      ratioZeroFix=1.0, tuneExtrasOnly=True), PcgRandom())
        self.assertTrue(np.all(instance.fixedCost[:10] >= 50.0))
        self.assertTrue(np.all(instance.fixedCost[10:] == 0.0))

    def testCommodityCapacities(self) ->None:
        """b equals u on max arcs"""
        instance = generate(GenConfig(useComCapacity=True, ratioMaxBnd=1.0), PcgRandom())
        assert instance.comCapacity is not None
        self.assertEqual(instance.comCapacity.shape, (instance.arcCount, instance.comCount))
        self.assertTrue(np.all(instance.comCapacity == instance.capacity[:, np.newaxis]))

    def testIntegerCapacities(self) ->None:
        """rounded after scaling"""
        instance = generate(GenConfig(capInteger=True, capMultiplier=0.37), PcgRandom())
        self.assertTrue(np.all(instance.capacity == np.round(instance.capacity)))

    def testMultipliers(self) ->None:
        """no draws, so everything else stays the same"""
        plain = generate(GenConfig(), PcgRandom())
        tuned = generate(GenConfig(fixMultiplier=2.0, capMultiplier=0.5), PcgRandom())
        self.assertTrue(np.array_equal(tuned.fixedCost, 2.0 * plain.fixedCost))
        self.assertTrue(np.array_equal(tuned.capacity, 0.5 * plain.capacity))
        self.assertTrue(np.array_equal(tuned.varCost, plain.varCost))

    def testBadMultipliers(self) ->None:
        """adjCap in (0, 1], adjFix >= 1"""
        self.assertRaises(ConfigurationError, generate, GenConfig(capMultiplier=0.0), PcgRandom())
        self.assertRaises(ConfigurationError, generate, GenConfig(fixMultiplier=0.5), PcgRandom())
        self.assertRaises(TypeError, GenConfig, noSuchSetting=1)


class NetworkxAgreement(unittest.TestCase):

    """the grid matches networkx node numbering"""

    def testGridNumbering(self) ->None:
        """node (i, j) is i * gridY + j"""
        lattice = nx.grid_2d_graph(2, 3)
        arcs = set(gridArcs(2, 3))
        for (u, v) in lattice.edges():
            self.assertIn((u[0] * 3 + u[1], v[0] * 3 + v[1]), arcs)


if __name__ == '__main__':
    unittest.main()
