#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import unittest

import numpy as np

from hkw import (standardize, rawMoments, cubicCoefficients, cubicTransform, correlationOf,
                 imposeCorrelation, matchErrors, generateScenarios, negativeValues,
                 HkwOptions, RankError, ConvergenceFailure)
from model import Family, RandomizationSelection, ScenarioMatrix, equiprobable
from moments import MomentTargets, CorrelationMatrix, DegenerateDistribution, uniformTargets
from rand import PcgRandom


def directMoments(row:np.ndarray, probs:np.ndarray) ->np.ndarray:
    """mean, std, skewness, kurtosis the plain way"""
    mean = float(np.sum(probs * row))
    variance = float(np.sum(probs * (row - mean) ** 2))
    std = np.sqrt(variance)
    return np.array([mean, std, np.sum(probs * (row - mean) ** 3) / std ** 3,
                     np.sum(probs * (row - mean) ** 4) / variance ** 2])


def randomCorrelation(size:int, rnd:PcgRandom) ->CorrelationMatrix:
    """a random valid correlation matrix"""
    factor = rnd.standardNormals((size, size + 5))
    cov = factor @ factor.T
    scale = 1.0 / np.sqrt(np.diag(cov))
    return CorrelationMatrix(cov * np.outer(scale, scale), tolerance=1e-12)


class RowMoments(unittest.TestCase):

    """standardization and raw moments"""

    def testTwoPoints(self) ->None:
        """odd moments vanish"""
        moments = rawMoments([-1.0, 1.0], [0.5, 0.5])
        self.assertEqual(len(moments), 12)
        self.assertTrue(np.allclose(moments[0::2], 0.0))
        self.assertTrue(np.allclose(moments[1::2], 1.0))
        self.assertTrue(np.allclose(rawMoments([2.0], [1.0]), [2.0 ** q for q in range(1, 13)]))

    def testBruteForce(self) ->None:
        """double loop"""
        rnd = PcgRandom(11, 12)
        row = rnd.standardNormals(30)
        probs = equiprobable(30)
        expected = [sum(probs[t] * row[t] ** q for t in range(30)) for q in range(1, 13)]
        self.assertTrue(np.allclose(rawMoments(row, probs), expected, rtol=1e-12, atol=1e-14))

    def testStandardize(self) ->None:
        """weighted mean 0 and variance 1"""
        probs = np.array([0.1, 0.2, 0.3, 0.4])
        row = standardize([3.0, 1.0, 4.0, 1.5], probs)
        self.assertAlmostEqual(float(probs @ row), 0.0, places=14)
        self.assertAlmostEqual(float(probs @ row ** 2), 1.0, places=14)
        self.assertRaises(DegenerateDistribution, standardize, [2.0, 2.0], [0.5, 0.5])


class Cubic(unittest.TestCase):

    """the moment step"""

    def testIdentity(self) ->None:
        """a row already at its targets"""
        coefs = cubicCoefficients([-1.0, 1.0], [0.5, 0.5], (0.0, 1.0, 0.0, 1.0))
        self.assertTrue(np.allclose(coefs, [0.0, 1.0, 0.0, 0.0]))
        rnd = PcgRandom(1, 1)
        probs = equiprobable(40)
        row = standardize(rnd.standardNormals(40), probs)
        own = directMoments(row, probs)
        coefs = cubicCoefficients(row, probs, (0.0, 1.0, own[2], own[3]))
        self.assertTrue(np.allclose(coefs, [0.0, 1.0, 0.0, 0.0], atol=1e-10))

    def testSevenPoints(self) ->None:
        """flatter than the discrete uniform"""
        probs = equiprobable(7)
        row = standardize(np.arange(-3.0, 4.0), probs)
        result = cubicTransform(row, probs, (0.0, 1.0, 0.0, 1.8))
        self.assertTrue(np.allclose(directMoments(result, probs), [0.0, 1.0, 0.0, 1.8], rtol=0.0, atol=1e-9))

    def testRandomRows(self) ->None:
        """moments recomputed from the transformed row"""
        rnd = PcgRandom(21, 22)
        probs = equiprobable(100)
        for _ in range(50):
            row = standardize(rnd.standardNormals(100), probs)
            targets = (0.0, 1.0, rnd.uniformReal(-0.3, 0.3), rnd.uniformReal(2.8, 3.6))
            result = cubicTransform(row, probs, targets)
            self.assertEqual(result.shape, row.shape)
            self.assertTrue(np.allclose(directMoments(result, probs), targets, rtol=0.0, atol=1e-9))

    def testUniformKurtosis(self) ->None:
        """flat rows towards kurtosis 1.8, as for uniform targets"""
        rnd = PcgRandom(23, 24)
        probs = equiprobable(200)
        for _ in range(30):
            row = standardize(rnd.uniformReals(-1.0, 1.0, (200, )), probs)
            targets = (0.0, 1.0, rnd.uniformReal(-0.05, 0.05), 1.8)
            result = cubicTransform(row, probs, targets)
            self.assertTrue(np.allclose(directMoments(result, probs), targets, rtol=0.0, atol=1e-9))

    def testApproximateFlattening(self) ->None:
        """a normal row cannot get kurtosis 1.8 exactly, the fit gets closer"""
        probs = equiprobable(500)
        row = standardize(PcgRandom(25, 26).standardNormals(500), probs)
        before = directMoments(row, probs)[3]
        coefs = cubicCoefficients(row, probs, (0.0, 1.0, 0.0, 1.8), approximate=True)
        self.assertTrue(np.all(np.isfinite(coefs)))
        after = directMoments(cubicTransform(row, probs, (0.0, 1.0, 0.0, 1.8), approximate=True), probs)[3]
        self.assertLess(abs(after - 1.8), abs(before - 1.8))


class Cholesky(unittest.TestCase):

    """the correlation step"""

    def testSmall(self) ->None:
        """n=2, s=3"""
        rnd = PcgRandom(2, 3)
        probs = equiprobable(3)
        target = CorrelationMatrix([[1.0, 0.5], [0.5, 1.0]])
        result = imposeCorrelation(rnd.standardNormals((2, 3)), probs, target)
        self.assertAlmostEqual(float(correlationOf(result, probs)[0, 1]), 0.5, places=10)
        self.assertTrue(np.allclose(result @ probs, 0.0, atol=1e-12))

    def testRandomCases(self) ->None:
        """n up to 10, s up to 200"""
        rnd = PcgRandom(4, 5)
        for _ in range(20):
            size = rnd.uniformInt(2, 10)
            scenarios = rnd.uniformInt(size + 1, 200)
            probs = rnd.uniformReals(0.5, 1.5, (scenarios, ))
            probs /= probs.sum()
            target = randomCorrelation(size, rnd)
            result = imposeCorrelation(rnd.standardNormals((size, scenarios)), probs, target)
            self.assertTrue(np.allclose(correlationOf(result, probs), target.values, rtol=0.0, atol=1e-10))

    def testIdentityTarget(self) ->None:
        """decorrelates"""
        rnd = PcgRandom(6, 7)
        probs = equiprobable(50)
        start = rnd.standardNormals((3, 50))
        start[1] += start[0]
        result = imposeCorrelation(start, probs, CorrelationMatrix(np.eye(3)))
        self.assertTrue(np.allclose(correlationOf(result, probs), np.eye(3), atol=1e-10))

    def testFixedPoint(self) ->None:
        """a matrix at its target stays"""
        rnd = PcgRandom(8, 9)
        probs = equiprobable(60)
        target = randomCorrelation(4, rnd)
        once = imposeCorrelation(rnd.standardNormals((4, 60)), probs, target)
        self.assertTrue(np.allclose(imposeCorrelation(once, probs, target), once, atol=1e-10))


class Errors(unittest.TestCase):

    """matchErrors"""

    def testExact(self) ->None:
        """targets taken from the matrix itself"""
        rnd = PcgRandom(10, 10)
        probs = equiprobable(80)
        matrix = rnd.standardNormals((3, 80)) * 2.0 + 5.0
        own = np.array([directMoments(x, probs) for x in matrix])
        corr = CorrelationMatrix(correlationOf(matrix, probs), tolerance=1e-12)
        errors = matchErrors(matrix, probs, MomentTargets(own), corr)
        self.assertLess(errors[0], 1e-12)
        self.assertLess(errors[1], 1e-12)
        own[1, 2] += 0.1
        self.assertAlmostEqual(matchErrors(matrix, probs, MomentTargets(own), corr)[0], 0.1, places=12)

    def testBruteForce(self) ->None:
        """maximum over all deviations"""
        rnd = PcgRandom(12, 13)
        probs = equiprobable(40)
        matrix = rnd.standardNormals((3, 40))
        targets = MomentTargets([[0.1, 1.2, 0.0, 3.0], [-0.2, 0.9, 0.1, 2.5], [0.0, 1.0, -0.1, 3.2]])
        corr = CorrelationMatrix([[1.0, 0.3, 0.0], [0.3, 1.0, -0.2], [0.0, -0.2, 1.0]])
        own = np.array([directMoments(x, probs) for x in matrix])
        deviations = [abs(own[i, 0] - targets.mean[i]) / targets.stdDev[i] for i in range(3)]
        deviations += [abs(own[i, 1] / targets.stdDev[i] - 1.0) for i in range(3)]
        deviations += [abs(own[i, 2] - targets.skewness[i]) for i in range(3)]
        deviations += [abs(own[i, 3] - targets.kurtosis[i]) for i in range(3)]
        achieved = correlationOf(matrix, probs)
        corrDeviation = max(abs(achieved[i, j] - corr.values[i, j]) for i in range(3) for j in range(i + 1, 3))
        errors = matchErrors(matrix, probs, targets, corr)
        self.assertAlmostEqual(errors[0], max(deviations), places=12)
        self.assertAlmostEqual(errors[1], corrDeviation, places=12)


class Generation(unittest.TestCase):

    """the complete algorithm"""

    def testTwoScenarios(self) ->None:
        """the only equiprobable two point distribution"""
        result = generateScenarios(MomentTargets([[0.0, 1.0, 0.0, 1.0]]), CorrelationMatrix([[1.0]]),
                                   HkwOptions(2), None, PcgRandom())
        self.assertTrue(np.allclose(sorted(result.values[0]), [-1.0, 1.0]))

    def testUniformPair(self) ->None:
        """uniform targets, no correlation"""
        targets = MomentTargets([uniformTargets(100.0, 0.25, 0.25)] * 2)
        corr = CorrelationMatrix(np.eye(2))
        result = generateScenarios(targets, corr, HkwOptions(1000), None, PcgRandom())
        self.assertEqual(result.values.shape, (2, 1000))
        errors = matchErrors(result.values, result.probabilities, targets, corr)
        self.assertLessEqual(errors[0], 1e-3)
        self.assertLessEqual(errors[1], 1e-3)

    def testDeterministic(self) ->None:
        """same seed, same scenarios"""
        targets = MomentTargets([uniformTargets(10.0, 0.25, 0.25), uniformTargets(20.0, 0.1, 0.3)])
        corr = CorrelationMatrix([[1.0, 0.4], [0.4, 1.0]])
        first = generateScenarios(targets, corr, HkwOptions(100), None, PcgRandom(1, 1))
        second = generateScenarios(targets, corr, HkwOptions(100), None, PcgRandom(1, 1))
        self.assertEqual(first, second)

    def testStartMatrix(self) ->None:
        """the scenario count comes from the start matrix"""
        targets = MomentTargets([uniformTargets(10.0, 0.25, 0.25)] * 2)
        start = ScenarioMatrix(PcgRandom(3, 3).standardNormals((2, 60)))
        result = generateScenarios(targets, CorrelationMatrix(np.eye(2)), HkwOptions(1000, startMatrix=start),
                                   None, PcgRandom())
        self.assertEqual(result.scenarioCount, 60)

    def testRank(self) ->None:
        """s must exceed n"""
        targets = MomentTargets([[0.0, 1.0, 0.0, 3.0]] * 3)
        self.assertRaises(RankError, generateScenarios, targets, CorrelationMatrix(np.eye(3)),
                          HkwOptions(3), None, PcgRandom())

    def testNoConvergence(self) ->None:
        """one iteration cannot be that exact"""
        targets = MomentTargets([uniformTargets(10.0, 0.25, 0.25)] * 2)
        opts = HkwOptions(50, momentTol=1e-15, corrTol=1e-15, maxIterations=1, maxTrials=1)
        with self.assertRaises(ConvergenceFailure) as context:
            generateScenarios(targets, CorrelationMatrix(np.eye(2)), opts, None, PcgRandom())
        self.assertGreater(context.exception.momentError, 1e-15)

    def testNegativeValues(self) ->None:
        """counted per family"""
        selection = RandomizationSelection(Family.DEMAND | Family.ARC_CAPACITY, 1, 2)
        scenarios = ScenarioMatrix([[1.0, -1.0], [-2.0, -3.0], [4.0, 5.0]])
        self.assertEqual(negativeValues(scenarios, selection), {Family.DEMAND: 3, Family.ARC_CAPACITY: 0})


if __name__ == '__main__':
    unittest.main()
