# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

Moment matching scenario generation: start from random standardized
scenarios, then alternate a Cholesky factor transformation towards the
target correlations with a cubic transformation of every row towards the
target skewness and kurtosis, until both errors are small enough. If a
trial does not get there, the next trial starts from new random values.

All rows are kept standardized (mean 0, variance 1, probability
weighted) until the very end, where row i becomes mean_i + std_i * row_i.
"""

from typing import Optional, Tuple, List, Dict, Sequence, TYPE_CHECKING

import numpy as np
from numpy.polynomial import polynomial
from scipy import linalg, optimize

from common import Debug, ReprMixin
from log import logDebug, logInfo
from model import ScenarioMatrix, RandomizationSelection, Family, equiprobable, checkProbabilities
from moments import MomentTargets, CorrelationMatrix, DegenerateDistribution
from rand import PcgRandom, CountRandomCalls
from util import Duration

if TYPE_CHECKING:
    import numpy.typing as npt

MAX_ORDER = 12
NEWTON_STEPS = 50
NEWTON_HALVINGS = 20
NEWTON_TOLERANCE = 1e-12
NEWTON_ACCEPT = 1e-10
NEWTON_STARTS = (
    (0.0, 1.0, 0.0, 0.0),
    (0.0, 0.9, 0.05, 0.02),
    (0.0, 1.1, -0.05, -0.02),
    (-0.1, 0.8, 0.1, 0.05),
    (0.1, 1.2, -0.1, -0.05),
    (0.0, 0.5, 0.0, 0.15))


class RankError(ValueError):

    """too few scenarios for a positive definite correlation matrix"""


class TransformFailure(ArithmeticError):

    """no cubic polynomial found for a row"""


class IterationFailure(ArithmeticError):

    """the current correlation matrix of the scenarios is singular"""


class ConvergenceFailure(RuntimeError):

    """no trial reached the tolerances"""

    def __init__(self, momentError:float, corrError:float, trials:int) ->None:
        super().__init__(
            f'no match after {trials} trials, best errors: moments {momentError:.3g}, '
            f'correlations {corrError:.3g}')
        self.momentError = momentError
        self.corrError = corrError


class HkwOptions(ReprMixin):

    """settings of generateScenarios"""

    def __init__(self, scenarioCount:int, momentTol:float=1e-3, corrTol:float=1e-3,
                 maxIterations:int=100, maxTrials:int=10, verbosity:int=1,
                 startMatrix:Optional[ScenarioMatrix]=None) ->None:
        # pylint: disable=too-many-arguments
        self.scenarioCount = scenarioCount
        self.momentTol = momentTol
        self.corrTol = corrTol
        self.maxIterations = maxIterations
        self.maxTrials = maxTrials
        self.verbosity = verbosity
        self.startMatrix = startMatrix

    def __str__(self) ->str:
        return (f'HkwOptions(s={self.scenarioCount}, tol={self.momentTol}/{self.corrTol}, '
                f'{self.maxTrials} trials of {self.maxIterations} iterations)')


def standardize(row:'npt.ArrayLike', probs:'npt.ArrayLike') ->'npt.NDArray[np.float64]':
    """probability weighted mean 0 and variance 1"""
    values = np.asarray(row, dtype=np.float64)
    weights = np.asarray(probs, dtype=np.float64)
    centered = values - weights @ values
    variance = weights @ (centered * centered)
    if not variance > 0:
        raise DegenerateDistribution('cannot standardize a row with zero variance')
    return centered / np.sqrt(variance)


def _standardizeRows(matrix:'npt.NDArray[np.float64]', probs:'npt.NDArray[np.float64]') ->'npt.NDArray[np.float64]':
    """standardize every row"""
    centered = matrix - (matrix @ probs)[:, np.newaxis]
    variance = (centered * centered) @ probs
    if not np.all(variance > 0):
        raise DegenerateDistribution(f'{np.sum(~(variance > 0))} rows have zero variance')
    return centered / np.sqrt(variance)[:, np.newaxis]


def rawMoments(row:'npt.ArrayLike', probs:'npt.ArrayLike', maxOrder:int=MAX_ORDER) ->'npt.NDArray[np.float64]':
    """m_1 .. m_maxOrder with m_q = sum of p_t * row_t ** q"""
    if not 1 <= maxOrder <= MAX_ORDER:
        raise ValueError(f'maxOrder {maxOrder} is not in 1..{MAX_ORDER}')
    values = np.asarray(row, dtype=np.float64)
    weights = np.asarray(probs, dtype=np.float64)
    result = np.empty(maxOrder)
    power = np.ones_like(values)
    for order in range(maxOrder):
        power = power * values
        result[order] = weights @ power
    return result


def _polyExpectation(coefs:'npt.NDArray[np.float64]', power:int, moments:'npt.NDArray[np.float64]',
    shift:int=0) ->float:
    """E[poly(X) ** power * X ** shift] where moments[q] = E[X ** q]"""
    expanded = polynomial.polypow(coefs, power)
    return float(expanded @ moments[shift:shift + len(expanded)])


def _residual(coefs:'npt.NDArray[np.float64]', moments:'npt.NDArray[np.float64]',
    targets:'npt.NDArray[np.float64]') ->'npt.NDArray[np.float64]':
    """E[Y ** q] - target q for q = 1..4"""
    return np.array([_polyExpectation(coefs, q, moments) for q in range(1, 5)]) - targets


def _jacobian(coefs:'npt.NDArray[np.float64]', moments:'npt.NDArray[np.float64]') ->'npt.NDArray[np.float64]':
    """d E[Y ** q] / d coef_j = q E[Y ** (q-1) X ** j]"""
    result = np.empty((4, 4))
    for q in range(1, 5):
        for j in range(4):
            result[q - 1, j] = q * _polyExpectation(coefs, q - 1, moments, j)
    return result


def _newton(moments:'npt.NDArray[np.float64]', targets:'npt.NDArray[np.float64]',
    start:Sequence[float]) ->Optional['npt.NDArray[np.float64]']:
    """damped Newton. None if it neither converges nor stalls close enough"""
    coefs = np.array(start, dtype=np.float64)
    residual = _residual(coefs, moments, targets)
    norm = float(np.max(np.abs(residual)))
    for step in range(NEWTON_STEPS):
        if norm <= NEWTON_TOLERANCE:
            break
        try:
            delta = np.linalg.solve(_jacobian(coefs, moments), -residual)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        factor = 1.0
        for _ in range(NEWTON_HALVINGS):
            candidate = coefs + factor * delta
            candResidual = _residual(candidate, moments, targets)
            candNorm = float(np.max(np.abs(candResidual)))
            if candNorm < norm:
                break
            factor /= 2.0
        else:
            break
        coefs, residual, norm = candidate, candResidual, candNorm
        if Debug.newton:
            logDebug(f'newton step {step}: factor {factor} residual {norm:.3g}')
    if norm <= NEWTON_ACCEPT:
        return coefs
    return None


def cubicCoefficients(row:'npt.ArrayLike', probs:'npt.ArrayLike',
    stdTargets:Sequence[float], approximate:bool=False) ->'npt.NDArray[np.float64]':
    """(a, b, c, d) such that a + bX + cX^2 + dX^3 has the raw moments stdTargets.

    Newton runs from every start in NEWTON_STARTS. With approximate, only
    the first start is tried and a row whose moments it cannot reach gets
    the least squares fit instead, the next iteration of the trial starts
    from the fitted row"""
    targets = np.asarray(stdTargets, dtype=np.float64)
    if targets[3] < 1.0 + targets[2] ** 2:
        raise TransformFailure(f'kurtosis {targets[3]} below 1 + skewness^2 is not realizable')
    moments = np.concatenate(([1.0], rawMoments(row, probs)))
    for start in NEWTON_STARTS[:1] if approximate else NEWTON_STARTS:
        coefs = _newton(moments, targets, start)
        if coefs is not None:
            return coefs
    if approximate:
        fit = optimize.least_squares(_residual, NEWTON_STARTS[0], args=(moments, targets))
        if np.all(np.isfinite(fit.x)):
            if Debug.newton:
                logDebug(f'least squares fit, residual {float(np.max(np.abs(fit.fun))):.3g}')
            return np.asarray(fit.x, dtype=np.float64)
    raise TransformFailure(f'no cubic transformation found for targets {tuple(targets)}')


def cubicTransform(row:'npt.ArrayLike', probs:'npt.ArrayLike',
    stdTargets:Sequence[float], approximate:bool=False) ->'npt.NDArray[np.float64]':
    """the row transformed to match (0, 1, skewness, kurtosis)"""
    values = np.asarray(row, dtype=np.float64)
    return polynomial.polyval(values, cubicCoefficients(values, probs, stdTargets, approximate))


def correlationOf(matrix:'npt.ArrayLike', probs:'npt.ArrayLike') ->'npt.NDArray[np.float64]':
    """probability weighted correlation matrix of the rows"""
    rows = _standardizeRows(np.asarray(matrix, dtype=np.float64), np.asarray(probs, dtype=np.float64))
    result = (rows * np.asarray(probs)) @ rows.T
    np.fill_diagonal(result, 1.0)
    return result


def imposeCorrelation(matrix:'npt.ArrayLike', probs:'npt.ArrayLike',
    target:CorrelationMatrix) ->'npt.NDArray[np.float64]':
    """L_target L_current^-1 X, rows standardized again"""
    weights = np.asarray(probs, dtype=np.float64)
    rows = _standardizeRows(np.asarray(matrix, dtype=np.float64), weights)
    current = (rows * weights) @ rows.T
    current = (current + current.T) / 2.0
    try:
        lower = linalg.cholesky(current, lower=True)
    except linalg.LinAlgError as exc:
        raise IterationFailure('the scenario correlation matrix is singular') from exc
    result = target.lower @ linalg.solve_triangular(lower, rows, lower=True)
    return _standardizeRows(result, weights)


def matchErrors(matrix:'npt.ArrayLike', probs:'npt.ArrayLike', targets:MomentTargets,
    target:CorrelationMatrix) ->Tuple[float, float]:
    """(moment error, correlation error): the largest absolute deviations,
    moments measured in units of the target standard deviation"""
    values = np.asarray(matrix, dtype=np.float64)
    weights = np.asarray(probs, dtype=np.float64)
    mean = values @ weights
    centered = values - mean[:, np.newaxis]
    variance = (centered ** 2) @ weights
    std = np.sqrt(variance)
    if not np.all(std > 0):
        return float('inf'), float('inf')
    skew = (centered ** 3) @ weights / std ** 3
    kurt = (centered ** 4) @ weights / variance ** 2
    deviations = np.concatenate((
        (mean - targets.mean) / targets.stdDev,
        std / targets.stdDev - 1.0,
        skew - targets.skewness,
        kurt - targets.kurtosis))
    momentError = float(np.max(np.abs(deviations)))
    if values.shape[0] < 2:
        return momentError, 0.0
    rows = centered / std[:, np.newaxis]
    achieved = (rows * weights) @ rows.T
    upper = np.triu_indices(values.shape[0], k=1)
    return momentError, float(np.max(np.abs(achieved[upper] - target.values[upper])))


def _startValues(variables:int, scenarios:int, opts:HkwOptions, trial:int,
    rng:PcgRandom) ->'npt.NDArray[np.float64]':
    """the given start matrix for the first trial, random values otherwise"""
    if trial == 0 and opts.startMatrix is not None:
        return np.array(opts.startMatrix.values, dtype=np.float64)
    with CountRandomCalls(rng, f'start values of trial {trial}'):
        return rng.standardNormals((variables, scenarios))


def _runTrial(start:'npt.NDArray[np.float64]', probs:'npt.NDArray[np.float64]',
    stdTargets:MomentTargets, corr:CorrelationMatrix, opts:HkwOptions,
    trial:int) ->Tuple[Optional['npt.NDArray[np.float64]'], Tuple[float, float], int]:
    """(matched rows or None, last errors, iterations)"""
    errors = (float('inf'), float('inf'))
    rows = _standardizeRows(start, probs)
    for iteration in range(1, opts.maxIterations + 1):
        rows = imposeCorrelation(rows, probs, corr)
        for idx in range(rows.shape[0]):
            rows[idx] = cubicTransform(rows[idx], probs, stdTargets.values[idx], approximate=True)
        errors = matchErrors(rows, probs, stdTargets, corr)
        if opts.verbosity >= 3 or Debug.hkw:
            logDebug(f'trial {trial} iteration {iteration}: '
                     f'moment error {errors[0]:.3g}, correlation error {errors[1]:.3g}')
        if errors[0] <= opts.momentTol and errors[1] <= opts.corrTol:
            return rows, errors, iteration
    return None, errors, opts.maxIterations


def generateScenarios(targets:MomentTargets, corr:CorrelationMatrix, opts:HkwOptions,
    probs:Optional['npt.ArrayLike'], rng:PcgRandom) ->ScenarioMatrix:
    """scenarios matching targets and corr within the tolerances of opts"""
    variables = targets.variableCount
    if corr.variableCount != variables:
        raise ValueError(f'{variables} moment targets but a {corr.variableCount}x{corr.variableCount} '
                         'correlation matrix')
    if opts.startMatrix is not None:
        if opts.startMatrix.variableCount != variables:
            raise ValueError(f'start matrix has {opts.startMatrix.variableCount} rows, expected {variables}')
    scenarios = opts.scenarioCount if opts.startMatrix is None else opts.startMatrix.scenarioCount
    if scenarios < variables + 1:
        raise RankError(f'{scenarios} scenarios cannot match the correlations of {variables} '
                        f'variables, at least {variables + 1} are needed')
    weights = equiprobable(scenarios) if probs is None else np.asarray(probs, dtype=np.float64)
    checkProbabilities(weights, scenarios, 1e-9)
    stdTargets = MomentTargets(np.column_stack((
        np.zeros(variables), np.ones(variables), targets.skewness, targets.kurtosis)))
    best = (float('inf'), float('inf'))
    with Duration('scenario generation'):
        for trial in range(opts.maxTrials):
            start = _startValues(variables, scenarios, opts, trial, rng)
            try:
                rows, errors, iterations = _runTrial(start, weights, stdTargets, corr, opts, trial)
            except (TransformFailure, IterationFailure, DegenerateDistribution) as exc:
                if opts.verbosity >= 2 or Debug.hkw:
                    logDebug(f'trial {trial} failed: {exc}')
                continue
            if max(errors) < max(best):
                best = errors
            if opts.verbosity >= 2 or Debug.hkw:
                logDebug(f'trial {trial}: {iterations} iterations, moment error {errors[0]:.3g}, '
                         f'correlation error {errors[1]:.3g}')
            if rows is not None:
                values = targets.mean[:, np.newaxis] + targets.stdDev[:, np.newaxis] * rows
                return ScenarioMatrix(values, weights)
    raise ConvergenceFailure(best[0], best[1], opts.maxTrials)


def negativeValues(scenarios:ScenarioMatrix, selection:RandomizationSelection) ->Dict[Family, int]:
    """number of negative values per randomized family"""
    result = {}
    for family, part in selection.slices.items():
        result[family] = int(np.sum(scenarios.values[part] < 0))
    return result


def logNegativeValues(scenarios:ScenarioMatrix, selection:RandomizationSelection) ->List[str]:
    """an info line per family holding negative values"""
    result = []
    for family, count in negativeValues(scenarios, selection).items():
        if count:
            result.append(f'{count} negative values of family {family.code}')
    for line in result:
        logInfo(line)
    return result
