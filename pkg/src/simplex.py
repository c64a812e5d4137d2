# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

A bounded variable revised simplex for

    minimize c x  subject to  A x (= or <=) b,  lower <= x <= upper

Every lower bound must be finite. Rows with sense L get a slack column.
The start basis takes, per row, a column with a single nonzero entry in
that row whose value stays within its bounds. Rows without such a column
get an artificial column, which are driven out by a first phase.

The basis inverse is kept as a dense matrix, updated by one elementary
row transformation per pivot and rebuilt from an LU factorization every
REFACTOR_PIVOTS pivots. Pricing is Dantzig's rule, after DEGENERATE_LIMIT
consecutive degenerate pivots Bland's rule takes over until a pivot makes
progress again.

A solved RevisedSimplex can solve again after right hand sides and
bounds changed: the optimal basis stays dual feasible, and a dual
simplex restores primal feasibility. WarmStartSolver does this for a
sequence of LPs sharing matrix, senses and objective.
"""

from typing import Optional, Tuple, List, TYPE_CHECKING

import numpy as np
from scipy import sparse, linalg

from common import Debug, ReprMixin
from log import logDebug

if TYPE_CHECKING:
    import numpy.typing as npt

REFACTOR_PIVOTS = 50
DEGENERATE_LIMIT = 1000
MAX_PIVOTS = 10 ** 6
COST_TOLERANCE = 1e-9
PIVOT_TOLERANCE = 1e-9
PHASE1_TOLERANCE = 1e-9
PRIMAL_TOLERANCE = 1e-9

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'


class SolverStall(RuntimeError):

    """the pivot limit was reached"""


class LpProblem(ReprMixin):

    """a linear program. senses holds 'E' or 'L' per row"""

    def __init__(self, objective:'npt.ArrayLike', matrix:'npt.ArrayLike', senses:'npt.ArrayLike',
                 rhs:'npt.ArrayLike', lower:'npt.ArrayLike', upper:'npt.ArrayLike') ->None:
        # pylint: disable=too-many-arguments
        self.objective = np.asarray(objective, dtype=np.float64)
        self.matrix = sparse.csr_matrix(matrix, dtype=np.float64)
        self.senses = np.asarray(senses, dtype='<U1')
        self.rhs = np.asarray(rhs, dtype=np.float64)
        self.lower = np.asarray(lower, dtype=np.float64)
        self.upper = np.asarray(upper, dtype=np.float64)
        rows, columns = self.matrix.shape
        if self.objective.shape != (columns, ) or self.lower.shape != (columns, ) \
                or self.upper.shape != (columns, ):
            raise ValueError(f'objective and bounds must have {columns} entries')
        if self.senses.shape != (rows, ) or self.rhs.shape != (rows, ):
            raise ValueError(f'senses and right hand sides must have {rows} entries')
        if not np.all(np.isin(self.senses, ('E', 'L'))):
            raise ValueError('row senses must be E or L')
        if not np.all(np.isfinite(self.lower)):
            raise ValueError('all lower bounds must be finite')
        if np.any(self.lower > self.upper):
            raise ValueError('a lower bound exceeds its upper bound')

    @property
    def variableCount(self) ->int:
        """number of columns"""
        return self.matrix.shape[1]

    @property
    def rowCount(self) ->int:
        """number of constraints"""
        return self.matrix.shape[0]

    def sameStructure(self, other:'LpProblem') ->bool:
        """other has my matrix, senses and objective. Right hand sides and
        bounds may differ"""
        if other is self:
            return True
        mine, theirs = self.matrix, other.matrix
        return (mine.shape == theirs.shape and mine.nnz == theirs.nnz
                and np.array_equal(self.senses, other.senses)
                and np.array_equal(self.objective, other.objective)
                and np.array_equal(mine.indptr, theirs.indptr)
                and np.array_equal(mine.indices, theirs.indices)
                and np.array_equal(mine.data, theirs.data))

    def violation(self, values:'npt.ArrayLike') ->float:
        """the largest violation of a row or a bound by values"""
        point = np.asarray(values, dtype=np.float64)
        activity = self.matrix @ point
        rows = np.where(self.senses == 'E', np.abs(activity - self.rhs),
                        np.maximum(activity - self.rhs, 0.0))
        bounds = np.maximum(np.maximum(self.lower - point, point - self.upper), 0.0)
        return float(max(rows.max(initial=0.0), bounds.max(initial=0.0)))

    def __str__(self) ->str:
        return f'LpProblem({self.rowCount} rows, {self.variableCount} columns, {self.matrix.nnz} nonzeros)'



class LpResult(ReprMixin):

    """status, objective value and values of the original variables"""

    def __init__(self, status:str, objective:float, values:Optional['npt.NDArray[np.float64]'],
                 pivots:int) ->None:
        self.status = status
        self.objective = objective
        self.values = values
        self.pivots = pivots

    def __str__(self) ->str:
        return f'LpResult({self.status}, objective={self.objective!r}, {self.pivots} pivots)'


class RevisedSimplex:

    """solves one LpProblem, and again after its right hand sides and
    bounds changed. Use solveLp or WarmStartSolver"""

    # pylint: disable=too-many-instance-attributes

    def __init__(self, problem:LpProblem) ->None:
        self.problem = problem
        rows = problem.rowCount
        self.structural = problem.variableCount
        slackRows = np.nonzero(problem.senses == 'L')[0]
        slacks = sparse.csc_matrix(
            (np.ones(len(slackRows)), (slackRows, np.arange(len(slackRows)))), shape=(rows, len(slackRows)))
        matrix = sparse.hstack([problem.matrix.tocsc(), slacks], format='csc')
        lower = np.concatenate((problem.lower, np.zeros(len(slackRows))))
        upper = np.concatenate((problem.upper, np.full(len(slackRows), np.inf)))
        cost = np.concatenate((problem.objective, np.zeros(len(slackRows))))
        self.rhs = problem.rhs
        self.values = lower.copy()
        self.basis, artificials = self._crashBasis(matrix, lower, upper)
        if artificials:
            rowIdx = [x[0] for x in artificials]
            signs = [x[1] for x in artificials]
            extra = sparse.csc_matrix(
                (signs, (rowIdx, np.arange(len(artificials)))), shape=(rows, len(artificials)))
            matrix = sparse.hstack([matrix, extra], format='csc')
            lower = np.concatenate((lower, np.zeros(len(artificials))))
            upper = np.concatenate((upper, np.full(len(artificials), np.inf)))
            cost = np.concatenate((cost, np.zeros(len(artificials))))
            self.values = np.concatenate((self.values, np.zeros(len(artificials))))
        self.artificialStart = len(cost) - len(artificials)
        self.matrix = matrix
        self.transposed = matrix.T.tocsr()
        self.lower = lower
        self.upper = upper
        self.cost = cost
        self.isBasic = np.zeros(len(cost), dtype=bool)
        self.isBasic[self.basis] = True
        self.atUpper = np.zeros(len(cost), dtype=bool)
        self.pivots = 0
        self.sinceRefactor = 0
        self.solved = False
        self.inverse = np.eye(rows)
        self.refactor()

    def _crashBasis(self, matrix:sparse.csc_matrix, lower:'npt.NDArray[np.float64]',
        upper:'npt.NDArray[np.float64]') ->Tuple['npt.NDArray[np.int64]', List[Tuple[int, float]]]:
        """(basis, artificial (row, sign) pairs). Artificial columns get the
        indices after all other columns"""
        rows = matrix.shape[0]
        residual = self.rhs - matrix @ lower
        counts = np.diff(matrix.indptr)
        basis = np.full(rows, -1, dtype=np.int64)
        for column in np.nonzero(counts == 1)[0]:
            entry = matrix.indptr[column]
            row = matrix.indices[entry]
            if basis[row] >= 0:
                continue
            step = residual[row] / matrix.data[entry]
            if 0.0 <= step <= upper[column] - lower[column]:
                basis[row] = column
        artificials = []
        nextColumn = matrix.shape[1]
        for row in np.nonzero(basis < 0)[0]:
            artificials.append((int(row), 1.0 if residual[row] >= 0 else -1.0))
            basis[row] = nextColumn
            nextColumn += 1
        return basis, artificials

    def _column(self, column:int) ->'npt.NDArray[np.float64]':
        """one column of the matrix, dense"""
        start, end = self.matrix.indptr[column], self.matrix.indptr[column + 1]
        result = np.zeros(self.matrix.shape[0])
        result[self.matrix.indices[start:end]] = self.matrix.data[start:end]
        return result

    def _basicValues(self) ->None:
        """basic values from the nonbasic ones"""
        nonbasic = np.where(self.isBasic, 0.0, self.values)
        self.values[self.basis] = self.inverse @ (self.rhs - self.matrix @ nonbasic)

    def refactor(self) ->None:
        """rebuild the basis inverse and the basic values"""
        basic = self.matrix[:, self.basis].toarray()
        factors = linalg.lu_factor(basic, check_finite=False)
        self.inverse = linalg.lu_solve(factors, np.eye(len(self.basis)), check_finite=False)
        self._basicValues()
        self.sinceRefactor = 0

    def _reducedCosts(self, cost:'npt.NDArray[np.float64]') ->'npt.NDArray[np.float64]':
        """c - A^T y for the duals y of the current basis"""
        duals = cost[self.basis] @ self.inverse
        return cost - self.transposed @ duals

    def _entering(self, cost:'npt.NDArray[np.float64]', bland:bool) ->int:
        """the entering column or -1 if optimal"""
        reduced = self._reducedCosts(cost)
        movable = ~self.isBasic & (self.upper > self.lower)
        eligible = movable & ((~self.atUpper & (reduced < -COST_TOLERANCE))
                              | (self.atUpper & (reduced > COST_TOLERANCE)))
        candidates = np.nonzero(eligible)[0]
        if not len(candidates):
            return -1
        if bland:
            return int(candidates[0])
        return int(candidates[np.argmax(np.abs(reduced[candidates]))])

    def _ratioTest(self, delta:'npt.NDArray[np.float64]', bland:bool) ->Tuple[float, int]:
        """(step length, leaving basis position or -1 for a bound flip)"""
        current = self.values[self.basis]
        ratios = np.full(len(delta), np.inf)
        falling = delta < -PIVOT_TOLERANCE
        ratios[falling] = (current[falling] - self.lower[self.basis][falling]) / -delta[falling]
        rising = (delta > PIVOT_TOLERANCE) & np.isfinite(self.upper[self.basis])
        ratios[rising] = (self.upper[self.basis][rising] - current[rising]) / delta[rising]
        ratios = np.maximum(ratios, 0.0)
        best = float(ratios.min(initial=np.inf))
        if not np.isfinite(best):
            return best, -1
        ties = np.nonzero(ratios <= best + 1e-12)[0]
        if bland:
            leave = ties[np.argmin(self.basis[ties])]
        else:
            leave = ties[np.argmax(np.abs(delta[ties]))]
        return best, int(leave)

    def _pivot(self, entering:int, leave:int, alpha:'npt.NDArray[np.float64]') ->None:
        """exchange basis position leave against entering"""
        pivotRow = self.inverse[leave] / alpha[leave]
        self.inverse -= np.outer(alpha, pivotRow)
        self.inverse[leave] = pivotRow
        self.isBasic[self.basis[leave]] = False
        self.isBasic[entering] = True
        self.basis[leave] = entering
        self.atUpper[entering] = False
        self.pivots += 1
        self.sinceRefactor += 1
        if self.sinceRefactor >= REFACTOR_PIVOTS:
            self.refactor()

    def _checkPivotLimit(self) ->None:
        """raise SolverStall"""
        if self.pivots >= MAX_PIVOTS:
            raise SolverStall(f'no optimum after {self.pivots} pivots')

    def run(self, cost:'npt.NDArray[np.float64]') ->str:
        """primal simplex: optimize cost from the current primal feasible
        basis. OPTIMAL or UNBOUNDED"""
        degenerate = 0
        while True:
            self._checkPivotLimit()
            bland = degenerate >= DEGENERATE_LIMIT
            entering = self._entering(cost, bland)
            if entering < 0:
                return OPTIMAL
            direction = -1.0 if self.atUpper[entering] else 1.0
            alpha = self.inverse @ self._column(entering)
            delta = -direction * alpha
            step, leave = self._ratioTest(delta, bland)
            span = self.upper[entering] - self.lower[entering]
            if span <= step:
                step, leave = span, -1
            if not np.isfinite(step):
                return UNBOUNDED
            degenerate = degenerate + 1 if step <= 1e-12 else 0
            self.values[self.basis] += step * delta
            self.values[entering] += direction * step
            if leave < 0:
                self.pivots += 1
                self.atUpper[entering] = not self.atUpper[entering]
                self.values[entering] = self.upper[entering] if self.atUpper[entering] else self.lower[entering]
                continue
            leaving = self.basis[leave]
            toUpper = bool(delta[leave] > 0)
            self.atUpper[leaving] = toUpper
            self.values[leaving] = self.upper[leaving] if toUpper else self.lower[leaving]
            self._pivot(entering, leave, alpha)

    def _primalTolerance(self) ->float:
        """largest bound violation of a basic variable still accepted"""
        return PRIMAL_TOLERANCE * max(1.0, float(np.abs(self.rhs).max(initial=0.0)))

    def runDual(self) ->str:
        """dual simplex: make the current dual feasible basis primal
        feasible. OPTIMAL or INFEASIBLE"""
        tolerance = self._primalTolerance()
        degenerate = 0
        while True:
            self._checkPivotLimit()
            bland = degenerate >= DEGENERATE_LIMIT
            current = self.values[self.basis]
            below = self.lower[self.basis] - current
            above = current - self.upper[self.basis]
            violation = np.maximum(below, above)
            violated = np.nonzero(violation > tolerance)[0]
            if not len(violated):
                return OPTIMAL
            if bland:
                leave = int(violated[np.argmin(self.basis[violated])])
            else:
                leave = int(violated[np.argmax(violation[violated])])
            rising = bool(below[leave] > 0)
            # a nonbasic column moving by t moves the leaving variable by -alphaRow * t
            alphaRow = self.transposed @ self.inverse[leave]
            sign = 1.0 if rising else -1.0
            movable = ~self.isBasic & (self.upper > self.lower)
            eligible = movable & np.where(self.atUpper, sign * alphaRow > PIVOT_TOLERANCE,
                                          sign * alphaRow < -PIVOT_TOLERANCE)
            candidates = np.nonzero(eligible)[0]
            if not len(candidates):
                return INFEASIBLE
            reduced = self._reducedCosts(self.cost)[candidates]
            slack = np.maximum(np.where(self.atUpper[candidates], -reduced, reduced), 0.0)
            ratios = slack / np.abs(alphaRow[candidates])
            best = float(ratios.min())
            ties = candidates[ratios <= best + 1e-12]
            if bland:
                entering = int(ties[0])
            else:
                entering = int(ties[np.argmax(np.abs(alphaRow[ties]))])
            degenerate = degenerate + 1 if best <= 1e-12 else 0
            alpha = self.inverse @ self._column(entering)
            leaving = self.basis[leave]
            target = self.lower[leaving] if rising else self.upper[leaving]
            step = (current[leave] - target) / alpha[leave]
            self.values[self.basis] -= step * alpha
            self.values[entering] += step
            self.atUpper[leaving] = not rising
            self.values[leaving] = target
            self._pivot(entering, leave, alpha)

    def _result(self, status:str, firstPivot:int) ->LpResult:
        """the LpResult of the current basis"""
        values:Optional['npt.NDArray[np.float64]'] = None
        objective = float(np.inf)
        if status != INFEASIBLE:
            values = self.values[:self.structural].copy()
            objective = float(self.cost[:self.structural] @ values) if status == OPTIMAL else -np.inf
        if Debug.simplex:
            logDebug(f'simplex: {status} after {self.pivots - firstPivot} pivots, objective {objective!r}')
        return LpResult(status, objective, values, self.pivots - firstPivot)

    def solve(self) ->LpResult:
        """both phases from the crash basis"""
        if self.artificialStart < len(self.cost):
            phase1 = np.zeros(len(self.cost))
            phase1[self.artificialStart:] = 1.0
            self.run(phase1)
            self.refactor()
            infeasibility = float(self.values[self.artificialStart:].sum())
            if infeasibility > PHASE1_TOLERANCE * max(1.0, float(np.abs(self.rhs).max(initial=0.0))):
                return LpResult(INFEASIBLE, np.inf, None, self.pivots)
            self.upper[self.artificialStart:] = 0.0
        status = self.run(self.cost)
        self.refactor()
        self.solved = status == OPTIMAL
        return self._result(status, 0)

    def dualFeasible(self) ->bool:
        """the current basis prices out for the objective"""
        reduced = self._reducedCosts(self.cost)
        movable = ~self.isBasic & (self.upper > self.lower)
        wrong = movable & np.where(self.atUpper, reduced > COST_TOLERANCE, reduced < -COST_TOLERANCE)
        return not wrong.any()

    def resolve(self, problem:LpProblem) ->Optional[LpResult]:
        """solve problem from the optimal basis of the last solve. problem
        may only differ in right hand sides and bounds. None if there is
        no such basis or it does not price out for problem"""
        if not self.solved:
            return None
        if not problem.sameStructure(self.problem):
            raise ValueError('resolve needs the same matrix, senses and objective')
        self.solved = False
        self.problem = problem
        self.rhs = problem.rhs
        self.lower[:self.structural] = problem.lower
        self.upper[:self.structural] = problem.upper
        self.atUpper &= np.isfinite(self.upper)
        nonbasic = ~self.isBasic
        self.values[nonbasic] = np.where(self.atUpper, self.upper, self.lower)[nonbasic]
        self._basicValues()
        if not self.dualFeasible():
            return None
        firstPivot = self.pivots
        status = self.runDual()
        if status == OPTIMAL:
            self._basicValues()
            status = self.run(self.cost)
        self.solved = status == OPTIMAL
        return self._result(status, firstPivot)


def solveLp(problem:LpProblem) ->LpResult:
    """minimize problem"""
    return RevisedSimplex(problem).solve()


class WarmStartSolver:

    """solves LPs one after the other. When an LP has the matrix, senses
    and objective of the last one solved, the solve starts from its
    optimal basis. A single thread may use a WarmStartSolver"""

    def __init__(self) ->None:
        self.simplex:Optional[RevisedSimplex] = None
        self.warmStarts = 0
        self.coldStarts = 0

    def solve(self, problem:LpProblem) ->LpResult:
        """minimize problem"""
        if self.simplex is not None and problem.sameStructure(self.simplex.problem):
            result = self.simplex.resolve(problem)
            if result is not None:
                self.warmStarts += 1
                return result
        self.coldStarts += 1
        self.simplex = RevisedSimplex(problem)
        return self.simplex.solve()
