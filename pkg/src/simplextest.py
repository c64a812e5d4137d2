#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import itertools
import unittest
from typing import Optional

import numpy as np
from scipy import optimize

from rand import PcgRandom
from simplex import LpProblem, WarmStartSolver, solveLp, OPTIMAL, INFEASIBLE, UNBOUNDED


def vertexOptimum(cost:np.ndarray, matrix:np.ndarray, rhs:np.ndarray,
    upper:np.ndarray) ->Optional[float]:
    """brute force: min cost x over all vertices of
    matrix x <= rhs, 0 <= x <= upper. None if there is none"""
    size = len(cost)
    rows = [matrix[x] for x in range(len(rhs))] + [-np.eye(size)[x] for x in range(size)]
    limits = list(rhs) + [0.0] * size
    for idx in range(size):
        if np.isfinite(upper[idx]):
            rows.append(np.eye(size)[idx])
            limits.append(upper[idx])
    allRows, allLimits = np.array(rows), np.array(limits)
    best = None
    for active in itertools.combinations(range(len(allRows)), size):
        square = allRows[list(active)]
        if abs(np.linalg.det(square)) < 1e-12:
            continue
        point = np.linalg.solve(square, allLimits[list(active)])
        if np.all(allRows @ point <= allLimits + 1e-9):
            value = float(cost @ point)
            if best is None or value < best:
                best = value
    return best


class HandBuilt(unittest.TestCase):

    """small problems with known answers"""

    def testInequalities(self) ->None:
        """slacks form the start basis"""
        problem = LpProblem([-1.0, -1.0], [[1.0, 1.0], [1.0, 3.0]], ['L', 'L'], [4.0, 6.0],
                            [0.0, 0.0], [3.0, np.inf])
        result = solveLp(problem)
        self.assertEqual(result.status, OPTIMAL)
        self.assertAlmostEqual(result.objective, -4.0, places=9)
        assert result.values is not None
        self.assertLess(problem.violation(result.values), 1e-9)

    def testEqualities(self) ->None:
        """needs the first phase"""
        problem = LpProblem([1.0, 2.0], [[1.0, 1.0], [1.0, -1.0]], ['E', 'E'], [3.0, 1.0],
                            [0.0, 0.0], [np.inf, np.inf])
        result = solveLp(problem)
        self.assertEqual(result.status, OPTIMAL)
        self.assertAlmostEqual(result.objective, 4.0, places=9)
        assert result.values is not None
        self.assertTrue(np.allclose(result.values, [2.0, 1.0]))

    def testInfeasible(self) ->None:
        """bounds make the row unreachable"""
        problem = LpProblem([0.0, 0.0], [[1.0, 1.0]], ['E'], [5.0], [0.0, 0.0], [1.0, 1.0])
        self.assertEqual(solveLp(problem).status, INFEASIBLE)

    def testUnbounded(self) ->None:
        """x - y <= 1 lets x grow"""
        problem = LpProblem([-1.0, 0.0], [[1.0, -1.0]], ['L'], [1.0], [0.0, 0.0], [np.inf, np.inf])
        self.assertEqual(solveLp(problem).status, UNBOUNDED)

    def testNonzeroLowerBounds(self) ->None:
        """the start point is the lower bound"""
        problem = LpProblem([1.0, 1.0], [[1.0, 1.0]], ['E'], [5.0], [1.0, 2.0], [10.0, 10.0])
        result = solveLp(problem)
        self.assertEqual(result.status, OPTIMAL)
        self.assertAlmostEqual(result.objective, 5.0, places=9)

    def testBadInput(self) ->None:
        """shapes, senses and bounds are checked"""
        self.assertRaises(ValueError, LpProblem, [1.0], [[1.0]], ['G'], [1.0], [0.0], [1.0])
        self.assertRaises(ValueError, LpProblem, [1.0], [[1.0]], ['L'], [1.0], [-np.inf], [1.0])
        self.assertRaises(ValueError, LpProblem, [1.0], [[1.0]], ['L'], [1.0], [2.0], [1.0])
        self.assertRaises(ValueError, LpProblem, [1.0, 2.0], [[1.0]], ['L'], [1.0], [0.0], [1.0])


class Oracles(unittest.TestCase):

    """random problems against vertex enumeration and scipy"""

    def testVertexEnumeration(self) ->None:
        """at most 4 variables, bounded by positive rows"""
        rnd = PcgRandom(3, 4)
        for _ in range(30):
            size = rnd.uniformInt(2, 4)
            rowCount = rnd.uniformInt(1, 3)
            matrix = rnd.uniformReals(0.5, 3.0, (rowCount, size))
            rhs = rnd.uniformReals(1.0, 10.0, (rowCount, ))
            cost = rnd.uniformReals(-5.0, 1.0, (size, ))
            upper = np.where(rnd.uniformReals(0.0, 1.0, (size, )) < 0.5, 2.0, np.inf)
            result = solveLp(LpProblem(cost, matrix, ['L'] * rowCount, rhs, np.zeros(size), upper))
            expected = vertexOptimum(cost, matrix, rhs, upper)
            assert expected is not None
            self.assertEqual(result.status, OPTIMAL)
            self.assertAlmostEqual(result.objective, expected, places=7)

    def testLinprog(self) ->None:
        """mixed rows against HiGHS"""
        rnd = PcgRandom(5, 6)
        for _ in range(20):
            size, eqRows, leRows = 8, 2, 4
            point = rnd.uniformReals(0.0, 1.0, (size, ))
            eqMatrix = rnd.uniformReals(-1.0, 1.0, (eqRows, size))
            leMatrix = rnd.uniformReals(-1.0, 1.0, (leRows, size))
            eqRhs = eqMatrix @ point
            leRhs = leMatrix @ point + rnd.uniformReals(0.0, 1.0, (leRows, ))
            cost = rnd.uniformReals(-1.0, 1.0, (size, ))
            upper = np.full(size, 1.0)
            problem = LpProblem(cost, np.vstack((eqMatrix, leMatrix)), ['E'] * eqRows + ['L'] * leRows,
                                np.concatenate((eqRhs, leRhs)), np.zeros(size), upper)
            result = solveLp(problem)
            reference = optimize.linprog(cost, A_ub=leMatrix, b_ub=leRhs, A_eq=eqMatrix, b_eq=eqRhs,
                                         bounds=[(0.0, 1.0)] * size, method='highs')
            self.assertEqual(result.status, OPTIMAL)
            self.assertAlmostEqual(result.objective, reference.fun, places=7)
            assert result.values is not None
            self.assertLess(problem.violation(result.values), 1e-8)


class WarmStarts(unittest.TestCase):

    """sequences of LPs differing in right hand sides and bounds"""

    def testAgainstLinprog(self) ->None:
        """every LP of the sequence, feasible or not"""
        rnd = PcgRandom(7, 8)
        size, eqRows, leRows = 10, 3, 4
        eqMatrix = rnd.uniformReals(-1.0, 1.0, (eqRows, size))
        leMatrix = rnd.uniformReals(-1.0, 1.0, (leRows, size))
        cost = rnd.uniformReals(-1.0, 1.0, (size, ))
        solver = WarmStartSolver()
        statuses = set()
        for _ in range(40):
            point = rnd.uniformReals(0.0, 1.0, (size, ))
            eqRhs = eqMatrix @ point
            leRhs = leMatrix @ point + rnd.uniformReals(-0.2, 1.0, (leRows, ))
            upper = rnd.uniformReals(0.3, 1.5, (size, ))
            problem = LpProblem(cost, np.vstack((eqMatrix, leMatrix)), ['E'] * eqRows + ['L'] * leRows,
                                np.concatenate((eqRhs, leRhs)), np.zeros(size), upper)
            result = solver.solve(problem)
            reference = optimize.linprog(cost, A_ub=leMatrix, b_ub=leRhs, A_eq=eqMatrix, b_eq=eqRhs,
                                         bounds=list(zip(np.zeros(size), upper)), method='highs')
            statuses.add(result.status)
            if reference.status == 2:
                self.assertEqual(result.status, INFEASIBLE)
                continue
            self.assertEqual(result.status, OPTIMAL)
            self.assertAlmostEqual(result.objective, reference.fun, places=7)
            assert result.values is not None
            self.assertLess(problem.violation(result.values), 1e-8)
        self.assertGreater(solver.warmStarts, 0)
        self.assertIn(OPTIMAL, statuses)

    def testPhaseOneChain(self) ->None:
        """minimum total slack of a transportation problem with changing supplies"""
        rnd = PcgRandom(9, 10)
        sources, sinks = 3, 4
        flows = sources * sinks
        rows = []
        for src in range(sources):
            rows.append([1.0 if x // sinks == src else 0.0 for x in range(flows)])
        for snk in range(sinks):
            rows.append([1.0 if x % sinks == snk else 0.0 for x in range(flows)])
        slacks = np.vstack((np.eye(sources + sinks), -np.eye(sources + sinks)))
        matrix = np.hstack((np.array(rows), slacks.T))
        cost = np.concatenate((np.zeros(flows), np.ones(2 * (sources + sinks))))
        solver = WarmStartSolver()
        for _ in range(30):
            supply = rnd.uniformReals(5.0, 15.0, (sources, ))
            demand = rnd.uniformReals(5.0, 15.0, (sinks, ))
            upper = np.concatenate((rnd.uniformReals(1.0, 6.0, (flows, )), np.full(2 * (sources + sinks), np.inf)))
            problem = LpProblem(cost, matrix, ['E'] * (sources + sinks), np.concatenate((supply, demand)),
                                np.zeros(len(cost)), upper)
            warm = solver.solve(problem)
            cold = solveLp(problem)
            self.assertEqual(warm.status, OPTIMAL)
            self.assertAlmostEqual(warm.objective, cold.objective, places=8)
        self.assertEqual(solver.coldStarts, 1)
        self.assertEqual(solver.warmStarts, 29)

    def testOtherStructure(self) ->None:
        """another objective means a cold start"""
        solver = WarmStartSolver()
        first = LpProblem([-1.0, -1.0], [[1.0, 1.0]], ['L'], [4.0], [0.0, 0.0], [3.0, 3.0])
        second = LpProblem([-1.0, -2.0], [[1.0, 1.0]], ['L'], [4.0], [0.0, 0.0], [3.0, 3.0])
        self.assertAlmostEqual(solver.solve(first).objective, -4.0, places=9)
        self.assertAlmostEqual(solver.solve(second).objective, -7.0, places=9)
        self.assertEqual((solver.coldStarts, solver.warmStarts), (2, 0))
        self.assertTrue(first.sameStructure(LpProblem([-1.0, -1.0], [[1.0, 1.0]], ['L'], [9.0],
                                                      [0.0, 0.0], [1.0, 1.0])))
        self.assertFalse(first.sameStructure(second))


if __name__ == '__main__':
    unittest.main()
