#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import itertools
import unittest
from typing import Callable, Tuple, Optional, List

import numpy as np
from scipy import integrate

from common import ConfigurationError
from model import Family, RandomizationSelection
from modeltest import smallInstance
from moments import (uniformTargets, triangularTargets, assembleTargets, assembleCorrelation,
                     Distribution, MomentTargets, CorrelationMatrix,
                     ZeroBaseValue, DegenerateDistribution, CorrelationError)


def integrated(density:Callable[[float], float], low:float, high:float,
    points:Optional[List[float]]=None) ->Tuple[float, float, float, float]:
    """mean, std, skewness and kurtosis by numeric integration"""
    def moment(func:Callable[[float], float]) ->float:
        return integrate.quad(lambda x: func(x) * density(x), low, high, points=points,
                              epsabs=0.0, epsrel=1e-13, limit=200)[0]
    mean = moment(lambda x: x)
    variance = moment(lambda x: (x - mean) ** 2)
    std = np.sqrt(variance)
    skew = moment(lambda x: (x - mean) ** 3) / std ** 3
    kurt = moment(lambda x: (x - mean) ** 4) / variance ** 2
    return mean, std, skew, kurt


class Distributions(unittest.TestCase):

    """closed forms against numeric integration"""

    grid = list(itertools.product((1.0, 37.5, 1000.0), (0.0, 0.25, 0.5), (0.1, 0.25, 1.0)))

    def assertMoments(self, got:Tuple[float, ...], expected:Tuple[float, ...], case:str) ->None:
        """relative 1e-9, skewness absolute"""
        for idx, (value, reference) in enumerate(zip(got, expected)):
            if idx == 2:
                self.assertLess(abs(value - reference), 1e-9, case)
            else:
                self.assertLess(abs(value - reference), 1e-9 * abs(reference), case)

    def testUniform(self) ->None:
        """flat density on [D - aD, D + bD]"""
        for base, alpha, beta in self.grid:
            low, high = base - alpha * base, base + beta * base
            expected = integrated(lambda x, l=low, h=high: 1.0 / (h - l), low, high)
            got = uniformTargets(base, alpha, beta)
            self.assertMoments(got, expected, f'U D={base} alpha={alpha} beta={beta}')
            self.assertEqual(got[2], 0.0)
            self.assertAlmostEqual(got[3], 1.8, places=12)

    def testTriangular(self) ->None:
        """mode at D"""
        for base, alpha, beta in self.grid:
            low, high, mode = base - alpha * base, base + beta * base, base

            def density(x:float, l:float=low, h:float=high, m:float=mode) ->float:
                if x < m:
                    return 2.0 * (x - l) / ((h - l) * (m - l))
                return 2.0 * (h - x) / ((h - l) * (h - m))
            expected = integrated(density, low, high, [mode] if low < mode else None)
            got = triangularTargets(base, alpha, beta)
            self.assertMoments(got, expected, f'T D={base} alpha={alpha} beta={beta}')

    def testSymmetricTriangle(self) ->None:
        """no skew"""
        mean, _, skew, kurt = triangularTargets(10.0, 0.3, 0.3)
        self.assertAlmostEqual(mean, 10.0, places=12)
        self.assertAlmostEqual(skew, 0.0, places=12)
        self.assertAlmostEqual(kurt, 2.4, places=12)

    def testBadArguments(self) ->None:
        """zero base, zero spread, alpha out of range"""
        self.assertRaises(ZeroBaseValue, uniformTargets, 0.0, 0.25, 0.25)
        self.assertRaises(DegenerateDistribution, uniformTargets, 10.0, 0.0, 0.0)
        self.assertRaises(ConfigurationError, triangularTargets, 10.0, 1.0, 0.25)
        self.assertRaises(ConfigurationError, triangularTargets, 10.0, 0.25, -0.1)


class Targets(unittest.TestCase):

    """targets for a whole instance"""

    def testAssemble(self) ->None:
        """one row per selected parameter"""
        instance = smallInstance()
        selection = RandomizationSelection.forInstance(3, instance)
        targets = assembleTargets(instance, selection, Distribution.UNIFORM, 0.25, 0.25)
        self.assertEqual(targets.variableCount, 5)
        self.assertTrue(np.allclose(targets.mean, [10.0, 5.0, 10.0, 20.0, 30.0]))
        self.assertTrue(np.allclose(targets.stdDev[0], 5.0 / np.sqrt(12.0)))

    def testZeroBase(self) ->None:
        """names the parameter"""
        instance = smallInstance().replace(capacity=[10.0, 0.0, 30.0])
        selection = RandomizationSelection.forInstance(3, instance)
        with self.assertRaises(ZeroBaseValue) as context:
            assembleTargets(instance, selection, Distribution.TRIANGULAR, 0.25, 0.25)
        self.assertIn('capacity of arc 2', str(context.exception))

    def testEmptySelection(self) ->None:
        """nothing to randomize"""
        instance = smallInstance()
        self.assertRaises(ConfigurationError, assembleTargets, instance,
                          RandomizationSelection.forInstance(0, instance), Distribution.UNIFORM, 0.25, 0.25)

    def testUnrealizable(self) ->None:
        """kurtosis below 1 + skewness^2"""
        self.assertRaises(DegenerateDistribution, MomentTargets, [[0.0, 1.0, 1.0, 1.5]])
        self.assertRaises(DegenerateDistribution, MomentTargets, [[0.0, 0.0, 0.0, 3.0]])
        self.assertRaises(ValueError, MomentTargets, [[0.0, 1.0, 0.0]])


class Correlations(unittest.TestCase):

    """block correlation matrices"""

    def testBlocks(self) ->None:
        """DD, AA and DA blocks"""
        instance = smallInstance()
        selection = RandomizationSelection.forInstance(3, instance)
        corr = assembleCorrelation(selection, {
            (Family.DEMAND, Family.DEMAND): 0.5, (Family.ARC_CAPACITY, Family.ARC_CAPACITY): 0.7,
            (Family.ARC_CAPACITY, Family.DEMAND): -0.2})
        values = corr.values
        self.assertTrue(np.array_equal(np.diag(values), np.ones(5)))
        self.assertEqual(values[0, 1], 0.5)
        self.assertEqual(values[2, 4], 0.7)
        self.assertEqual(values[0, 3], -0.2)
        self.assertEqual(values[3, 0], -0.2)
        self.assertTrue(np.allclose(corr.lower @ corr.lower.T, values))

    def testNotPositiveDefinite(self) ->None:
        """three variables cannot all be correlated -0.9"""
        instance = smallInstance()
        selection = RandomizationSelection.forInstance(Family.ARC_CAPACITY, instance)
        with self.assertRaises(CorrelationError) as context:
            assembleCorrelation(selection, {(Family.ARC_CAPACITY, Family.ARC_CAPACITY): -0.9})
        self.assertIn('XAA=-0.9', str(context.exception))

    def testOutOfRange(self) ->None:
        """open interval"""
        selection = RandomizationSelection.forInstance(3, smallInstance())
        self.assertRaises(ConfigurationError, assembleCorrelation, selection,
                          {(Family.DEMAND, Family.DEMAND): 1.0})

    def testMatrixChecks(self) ->None:
        """symmetry and unit diagonal"""
        self.assertRaises(CorrelationError, CorrelationMatrix, [[1.0, 0.5], [0.4, 1.0]])
        self.assertRaises(CorrelationError, CorrelationMatrix, [[2.0, 0.0], [0.0, 1.0]])
        self.assertRaises(CorrelationError, CorrelationMatrix, [[1.0, 1.0], [1.0, 1.0]])
        self.assertEqual(CorrelationMatrix(np.eye(3)).variableCount, 3)


if __name__ == '__main__':
    unittest.main()
