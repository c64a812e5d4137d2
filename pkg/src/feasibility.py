# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

Second stage feasibility of scenarios: with all arcs open, can every
commodity be routed? This is decided by a phase 1 LP where every flow
conservation row gets a pair of slacks, feasibility means the slacks can
all be zero.

LP columns: flows x[a, k] at a * |K| + k, then per (node i, commodity k)
the slacks s+ and s- at flows + 2 * (i * |K| + k) and one more.
LP rows: flow conservation at i * |K| + k, then one bundle row per arc.
"""

from functools import lru_cache
from itertools import chain
from typing import List, NamedTuple, Optional, Sequence, Tuple, Any, TYPE_CHECKING

import numpy as np
from scipy import sparse
from twisted.internet.defer import Deferred, DeferredList
from twisted.python.threadpool import ThreadPool

from common import Debug, ReprMixin
from log import logDebug, logInfo
from model import (DetInstance, Graph, RandomizationSelection, ScenarioMatrix, unflatten, validate,
                   totalVolume, nodeBalance)
from simplex import LpProblem, WarmStartSolver, solveLp, OPTIMAL, SolverStall
from util import Duration

if TYPE_CHECKING:
    import numpy.typing as npt
    from twisted.python.failure import Failure

FEASIBILITY_TOLERANCE = 1e-6


class ShapeError(ValueError):

    """a scenario column does not fit the selection"""


class EmptyResult(RuntimeError):

    """every scenario was rejected"""


class FeasibilityLp(LpProblem):

    """the phase 1 LP of one scenario. volume is the total demand"""

    def __init__(self, volume:float, flowCount:int, *args:Any) ->None:
        super().__init__(*args)
        self.volume = volume
        self.flowCount = flowCount

    def tolerance(self) ->float:
        """largest objective value still counted as feasible"""
        return FEASIBILITY_TOLERANCE * max(1.0, self.volume)


class ScenarioCheck(NamedTuple):

    """the verdict about one scenario"""
    scenario: int
    feasible: bool
    objective: float


class FeasibilityReport(ReprMixin):

    """outcome of filterScenarios. invalidCount scenarios were rejected
    without an LP because they violate sign invariants"""

    def __init__(self, perScenario:List[ScenarioCheck], invalidCount:int=0) ->None:
        self.perScenario = perScenario
        self.invalidCount = invalidCount

    @property
    def testedCount(self) ->int:
        """all scenarios"""
        return len(self.perScenario)

    @property
    def rejectedCount(self) ->int:
        """infeasible or invalid"""
        return sum(not x.feasible for x in self.perScenario)

    @property
    def retainedCount(self) ->int:
        """feasible"""
        return self.testedCount - self.rejectedCount

    def summary(self) ->str:
        """the line for standard output"""
        result = f'{self.testedCount} scenarios tested, {self.rejectedCount} rejected'
        if self.invalidCount:
            result += f' ({self.invalidCount} with negative values)'
        return result

    def __str__(self) ->str:
        return f'FeasibilityReport({self.summary()})'


def scenarioInstance(base:DetInstance, selection:RandomizationSelection,
    column:'npt.ArrayLike') ->DetInstance:
    """base with the selected parameters taken from column"""
    values = np.asarray(column, dtype=np.float64)
    if values.shape != (selection.variableCount, ):
        raise ShapeError(f'scenario has {values.size} values, the selection needs {selection.variableCount}')
    return unflatten(base, selection, values)




@lru_cache(maxsize=8)
def _constraintMatrix(graph:Graph, comCount:int) ->sparse.csr_matrix:
    """flow conservation rows with their slack pairs, then bundle rows.
    All scenarios of a base instance share it"""
    arcCount, nodeCount = graph.arcCount, graph.nodeCount
    flowCount = arcCount * comCount
    flowRows = nodeCount * comCount
    coms = np.arange(comCount)
    flowCols = (np.arange(arcCount)[:, np.newaxis] * comCount + coms).ravel()
    tails = graph.tails[:, np.newaxis] * comCount + coms
    heads = graph.heads[:, np.newaxis] * comCount + coms
    slackRows = np.arange(flowRows)
    rows = np.concatenate((tails.ravel(), heads.ravel(), slackRows, slackRows,
                           flowRows + np.repeat(np.arange(arcCount), comCount)))
    cols = np.concatenate((flowCols, flowCols, flowCount + 2 * slackRows, flowCount + 2 * slackRows + 1,
                           flowCols))
    data = np.concatenate((np.ones(flowCount), -np.ones(flowCount), np.ones(flowRows), -np.ones(flowRows),
                           np.ones(flowCount)))
    result = sparse.csr_matrix((data, (rows, cols)), shape=(flowRows + arcCount, flowCount + 2 * flowRows))
    result.sort_indices()
    return result


def buildFeasibilityLp(instance:DetInstance) ->FeasibilityLp:
    """the phase 1 LP with all arcs open"""
    arcCount, comCount, nodeCount = instance.arcCount, instance.comCount, instance.nodeCount
    flowCount = arcCount * comCount
    flowRows = nodeCount * comCount
    matrix = _constraintMatrix(instance.graph, comCount)
    columns = matrix.shape[1]
    rhs = np.zeros(flowRows + arcCount)
    for com in range(comCount):
        rhs[com:flowRows:comCount] = nodeBalance(instance, com)
    rhs[flowRows:] = instance.capacity
    upper = np.full(columns, np.inf)
    if instance.useComCapacity and instance.comCapacity is not None:
        upper[:flowCount] = instance.comCapacity.ravel()
    objective = np.zeros(columns)
    objective[flowCount:] = 1.0
    senses = np.array(['E'] * flowRows + ['L'] * arcCount)
    return FeasibilityLp(totalVolume(instance), flowCount,
                         objective, matrix, senses, rhs, np.zeros(columns), upper)


def checkFeasible(lp:FeasibilityLp, solver:Optional[WarmStartSolver]=None) ->Tuple[bool, float]:
    """(feasible, phase 1 objective). With solver, the LP may start from
    the basis of the last LP solver solved"""
    result = solveLp(lp) if solver is None else solver.solve(lp)
    if result.status != OPTIMAL:
        raise SolverStall(f'the phase 1 LP ended {result.status}')
    objective = max(result.objective, 0.0)
    return objective <= lp.tolerance(), objective


class ScenarioScreen:

    """checks scenarios of one base instance one after the other. The
    phase 1 LPs only differ in right hand sides and bounds, each one
    starts from the optimal basis of the one before"""

    def __init__(self, base:DetInstance, selection:RandomizationSelection, scenarios:ScenarioMatrix) ->None:
        self.base = base
        self.selection = selection
        self.scenarios = scenarios
        self.solver = WarmStartSolver()

    def check(self, scenario:int) ->Tuple[ScenarioCheck, bool]:
        """(verdict, invalid) for one column"""
        instance = scenarioInstance(self.base, self.selection, self.scenarios.column(scenario))
        problems = validate(instance)
        if problems:
            if Debug.feasibility:
                logDebug(f'scenario {scenario + 1} is invalid: {problems[0]}')
            return ScenarioCheck(scenario, False, float('inf')), True
        feasible, objective = checkFeasible(buildFeasibilityLp(instance), self.solver)
        if Debug.feasibility:
            logDebug(f'scenario {scenario + 1}: objective {objective!r}, feasible={feasible}')
        return ScenarioCheck(scenario, feasible, objective), False

    def checkAll(self, scenarios:Sequence[int]) ->List[Tuple[ScenarioCheck, bool]]:
        """check in the given order"""
        result = [self.check(x) for x in scenarios]
        if Debug.feasibility:
            logDebug(f'{len(result)} scenarios: {self.solver.coldStarts} cold and '
                     f'{self.solver.warmStarts} warm started LPs')
        return result


def _fire(request:Deferred, success:bool, result:Any) ->None:
    """called by the thread pool in the worker thread"""
    if success:
        request.callback(result)
    else:
        request.errback(result)


def _checkConcurrently(base:DetInstance, selection:RandomizationSelection,
    scenarios:ScenarioMatrix, workers:int) ->List[Tuple[ScenarioCheck, bool]]:
    """one ScenarioScreen per worker thread, each for a contiguous chunk of scenarios"""
    chunks = [[int(y) for y in x] for x in np.array_split(np.arange(scenarios.scenarioCount), workers) if len(x)]
    requests:List[Deferred] = [Deferred() for _ in chunks]
    pool = ThreadPool(minthreads=1, maxthreads=workers, name='feasibility')
    pool.start()
    try:
        for chunk, request in zip(chunks, requests):
            pool.callInThreadWithCallback(
                lambda success, result, request=request: _fire(request, success, result),
                ScenarioScreen(base, selection, scenarios).checkAll, chunk)
    finally:
        # returns when the workers have finished all queued chunks
        pool.stop()
    results:List[Tuple[ScenarioCheck, bool]] = []
    failures:List['Failure'] = []
    block = DeferredList(requests, fireOnOneErrback=True, consumeErrors=True)
    block.addCallback(lambda answers: results.extend(chain.from_iterable(x[1] for x in answers)))
    block.addErrback(failures.append)
    if failures:
        failures[0].value.subFailure.raiseException()
    return results


def filterScenarios(base:DetInstance, selection:RandomizationSelection, scenarios:ScenarioMatrix,
    workers:int=1) ->Tuple[ScenarioMatrix, FeasibilityReport]:
    """the feasible scenarios with rescaled probabilities, and the report"""
    if scenarios.variableCount != selection.variableCount:
        raise ShapeError(f'scenarios have {scenarios.variableCount} rows, '
                         f'the selection needs {selection.variableCount}')
    with Duration('feasibility check'):
        if workers > 1:
            checks = _checkConcurrently(base, selection, scenarios, workers)
        else:
            checks = ScenarioScreen(base, selection, scenarios).checkAll(range(scenarios.scenarioCount))
    report = FeasibilityReport([x[0] for x in checks], sum(x[1] for x in checks))
    logInfo(report.summary())
    keep = np.array([x.feasible for x in report.perScenario])
    if not keep.any():
        raise EmptyResult(f'all {report.testedCount} scenarios were rejected')
    if keep.all():
        return scenarios, report
    return scenarios.retain(keep), report
