#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import unittest

import numpy as np

from rand import PcgRandom, U64


class Reproducible(unittest.TestCase):

    """seed and stream determine everything"""

    def testSameSeedSameSequence(self) ->None:
        """two sources with equal seed and stream agree"""
        first, second = PcgRandom(4567, 1234), PcgRandom(4567, 1234)
        self.assertEqual([first.uniformReal(0.0, 1.0) for _ in range(100)],
                         [second.uniformReal(0.0, 1.0) for _ in range(100)])

    def testStreamsDiffer(self) ->None:
        """only the stream differs"""
        first, second = PcgRandom(4567, 1), PcgRandom(4567, 2)
        self.assertNotEqual([first.uniformReal(0.0, 1.0) for _ in range(20)],
                            [second.uniformReal(0.0, 1.0) for _ in range(20)])

    def testVectorMatchesScalarDraws(self) ->None:
        """uniformReals fills in C order from the same sequence"""
        first, second = PcgRandom(7, 8), PcgRandom(7, 8)
        block = first.uniformReals(2.0, 3.0, (3, 4))
        single = [second.uniformReal(2.0, 3.0) for _ in range(12)]
        self.assertTrue(np.allclose(block.ravel(), single, rtol=0.0, atol=1e-15))
        self.assertEqual(first.count, 12)
        self.assertEqual(second.count, 12)


class Ranges(unittest.TestCase):

    """argument checks and value ranges"""

    def testRealRange(self) ->None:
        """lo <= x < hi"""
        rnd = PcgRandom()
        values = [rnd.uniformReal(5.0, 6.0) for _ in range(1000)]
        self.assertTrue(all(5.0 <= x < 6.0 for x in values))
        self.assertEqual(rnd.uniformReal(3.5, 3.5), 3.5)

    def testIntRangeIncludesEnds(self) ->None:
        """both ends are drawn"""
        rnd = PcgRandom()
        values = {rnd.uniformInt(0, 2) for _ in range(1000)}
        self.assertEqual(values, {0, 1, 2})

    def testBadArguments(self) ->None:
        """lo > hi and seeds outside 64 bit"""
        rnd = PcgRandom()
        self.assertRaises(ValueError, rnd.uniformReal, 2.0, 1.0)
        self.assertRaises(ValueError, rnd.uniformInt, 2, 1)
        self.assertRaises(ValueError, PcgRandom, -1, 0)
        self.assertRaises(ValueError, PcgRandom, 0, U64 + 1)

    def testSampleIsDistinct(self) ->None:
        """without replacement"""
        rnd = PcgRandom()
        sample = rnd.sampleWithoutReplacement(10, 10)
        self.assertEqual(sorted(int(x) for x in sample), list(range(10)))
        self.assertRaises(ValueError, rnd.sampleWithoutReplacement, 3, 4)

    def testZeroSeedAndStream(self) ->None:
        """0 is a valid seed and a valid stream"""
        rnd = PcgRandom(0, 0)
        self.assertTrue(0.0 <= rnd.uniformReal(0.0, 1.0) < 1.0)
        self.assertEqual(rnd.count, 1)


class Statistics(unittest.TestCase):

    """the draws look uniform"""

    def testUniformMean(self) ->None:
        """10^6 draws in [0, 1)"""
        values = PcgRandom().uniformReals(0.0, 1.0, (10 ** 6, ))
        self.assertAlmostEqual(float(values.mean()), 0.5, delta=0.002)

    def testDieFaces(self) ->None:
        """6 * 10^5 rolls"""
        rnd = PcgRandom(99, 100)
        rolls = np.array([rnd.uniformInt(1, 6) for _ in range(600000)])
        frequencies = np.bincount(rolls, minlength=7)[1:] / len(rolls)
        for face, frequency in enumerate(frequencies, start=1):
            self.assertAlmostEqual(float(frequency), 1.0 / 6.0, delta=0.005, msg=f'face {face}')

    def testStreamsAreIndependent(self) ->None:
        """same seed, other stream: nearly every position differs"""
        first = PcgRandom(4567, 1).uniformReals(0.0, 1.0, (10000, ))
        second = PcgRandom(4567, 2).uniformReals(0.0, 1.0, (10000, ))
        self.assertGreaterEqual(int(np.sum(first != second)), 9900)


if __name__ == '__main__':
    unittest.main()
