# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

Target moments and target correlations for the scenario generator.

Moments are (mean, standard deviation, skewness, kurtosis) with
skewness E[(X-mu)^3]/sigma^3 and kurtosis E[(X-mu)^4]/sigma^4, so a
normal distribution has kurtosis 3.
"""

from enum import Enum
from typing import Tuple, Dict, Mapping, List, Union, TYPE_CHECKING

import numpy as np
from scipy import linalg

from common import ConfigurationError, ReprMixin
from model import DetInstance, RandomizationSelection, Family, FAMILIES, flatten

if TYPE_CHECKING:
    import numpy.typing as npt

Moments = Tuple[float, float, float, float]
Real = Union[float, 'npt.NDArray[np.float64]']

UNIFORM_KURTOSIS = 9.0 / 5.0
TRIANGULAR_KURTOSIS = 12.0 / 5.0


class DegenerateDistribution(ValueError):

    """the distribution has zero variance"""


class ZeroBaseValue(ValueError):

    """a parameter with base value 0 cannot be randomized"""


class CorrelationError(ValueError):

    """the correlation matrix is not a valid positive definite correlation matrix"""


class Distribution(Enum):

    """the distribution around the base value, codes as in -T"""
    UNIFORM = 'U'
    TRIANGULAR = 'T'


def _checkRange(alpha:float, beta:float) ->None:
    """alpha in [0, 1), beta >= 0, not both 0"""
    if not 0.0 <= alpha < 1.0:
        raise ConfigurationError(f'alpha {alpha} is not in [0, 1)')
    if not beta >= 0.0:
        raise ConfigurationError(f'beta {beta} is negative')
    if alpha + beta <= 0.0:
        raise DegenerateDistribution('alpha + beta = 0 gives zero variance')


def _uniform(base:Real, alpha:float, beta:float) ->Tuple[Real, Real, Real, Real]:
    """vectorised moments of U(D - alpha D, D + beta D)"""
    low, high = base - alpha * base, base + beta * base
    mean = (low + high) / 2.0
    std = (high - low) / np.sqrt(12.0)
    return mean, std, np.zeros_like(mean), np.full_like(mean, UNIFORM_KURTOSIS)


def _triangular(base:Real, alpha:float, beta:float) ->Tuple[Real, Real, Real, Real]:
    """vectorised moments of the triangular distribution with mode D"""
    low, high, mode = base - alpha * base, base + beta * base, base
    mean = (low + high + mode) / 3.0
    spread = low * low + high * high + mode * mode - low * high - low * mode - high * mode
    std = np.sqrt(spread / 18.0)
    skew = (np.sqrt(2.0) * (low + high - 2.0 * mode) * (2.0 * low - high - mode)
            * (low - 2.0 * high + mode) / (5.0 * spread ** 1.5))
    return mean, std, skew, np.full_like(mean, TRIANGULAR_KURTOSIS)


def uniformTargets(base:float, alpha:float, beta:float) ->Moments:
    """moments of the uniform distribution on [D - alpha D, D + beta D]"""
    _checkRange(alpha, beta)
    if not base > 0:
        raise ZeroBaseValue(f'base value {base} must be positive')
    return tuple(float(x) for x in _uniform(np.float64(base), alpha, beta))  # type:ignore[return-value]


def triangularTargets(base:float, alpha:float, beta:float) ->Moments:
    """moments of the triangular distribution on [D - alpha D, D + beta D] with mode D"""
    _checkRange(alpha, beta)
    if not base > 0:
        raise ZeroBaseValue(f'base value {base} must be positive')
    return tuple(float(x) for x in _triangular(np.float64(base), alpha, beta))  # type:ignore[return-value]


class MomentTargets(ReprMixin):

    """one row (mean, std, skewness, kurtosis) per randomized variable"""

    def __init__(self, values:'npt.ArrayLike') ->None:
        self.values = np.array(values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[1] != 4 or self.values.shape[0] < 1:
            raise ValueError(f'moment targets need n rows of 4 values, got shape {self.values.shape}')
        self.values.flags.writeable = False
        problems = self.violations()
        if problems:
            raise DegenerateDistribution('; '.join(problems))

    @property
    def mean(self) ->'npt.NDArray[np.float64]':
        """per variable"""
        return self.values[:, 0]

    @property
    def stdDev(self) ->'npt.NDArray[np.float64]':
        """per variable"""
        return self.values[:, 1]

    @property
    def skewness(self) ->'npt.NDArray[np.float64]':
        """per variable"""
        return self.values[:, 2]

    @property
    def kurtosis(self) ->'npt.NDArray[np.float64]':
        """per variable"""
        return self.values[:, 3]

    @property
    def variableCount(self) ->int:
        """n"""
        return self.values.shape[0]

    def violations(self) ->List[str]:
        """rows with zero variance or unrealizable kurtosis"""
        result = []
        for row in np.nonzero(~(self.stdDev > 0))[0]:
            result.append(f'row {row + 1}: standard deviation {self.stdDev[row]} is not positive')
        bound = 1.0 + self.skewness ** 2
        for row in np.nonzero(self.kurtosis < bound * (1.0 - 1e-12))[0]:
            result.append(f'row {row + 1}: kurtosis {self.kurtosis[row]} is below 1 + skewness^2')
        return result

    def __eq__(self, other:object) ->bool:
        if not isinstance(other, MomentTargets):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None  # type:ignore[assignment]

    def __str__(self) ->str:
        return f'MomentTargets({self.variableCount} variables)'


class CorrelationMatrix(ReprMixin):

    """a symmetric positive definite matrix with unit diagonal. lower is
    its lower Cholesky factor"""

    def __init__(self, values:'npt.ArrayLike', tolerance:float=0.0) ->None:
        matrix = np.array(values, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise CorrelationError(f'a correlation matrix must be square, got shape {matrix.shape}')
        if np.max(np.abs(matrix - matrix.T)) > tolerance:
            raise CorrelationError('the correlation matrix is not symmetric')
        if np.max(np.abs(np.diag(matrix) - 1.0)) > tolerance:
            raise CorrelationError('the correlation matrix does not have a unit diagonal')
        if np.max(np.abs(matrix)) > 1.0 + tolerance:
            raise CorrelationError('correlations must be in [-1, 1]')
        matrix = (matrix + matrix.T) / 2.0
        np.fill_diagonal(matrix, 1.0)
        self.values = matrix
        self.values.flags.writeable = False
        try:
            self.lower = linalg.cholesky(matrix, lower=True)
        except linalg.LinAlgError as exc:
            raise CorrelationError('the correlation matrix is not positive definite') from exc

    @property
    def variableCount(self) ->int:
        """n"""
        return self.values.shape[0]

    def __eq__(self, other:object) ->bool:
        if not isinstance(other, CorrelationMatrix):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None  # type:ignore[assignment]

    def __str__(self) ->str:
        return f'CorrelationMatrix({self.variableCount}x{self.variableCount})'


def assembleTargets(base:DetInstance, selection:RandomizationSelection,
    dist:Distribution, alpha:float, beta:float) ->MomentTargets:
    """target moments around every selected base value"""
    if selection.variableCount == 0:
        raise ConfigurationError('no parameters are selected for randomization')
    _checkRange(alpha, beta)
    values = flatten(base, selection)
    zeros = np.nonzero(~(values > 0))[0]
    if len(zeros):
        shown = ', '.join(selection.describe(x) for x in zeros[:10])
        more = f' and {len(zeros) - 10} more' if len(zeros) > 10 else ''
        raise ZeroBaseValue(f'{len(zeros)} parameters with base value 0 cannot be randomized: {shown}{more}')
    moments = (_uniform if dist == Distribution.UNIFORM else _triangular)(values, alpha, beta)
    return MomentTargets(np.column_stack(moments))


def blockKey(first:Family, second:Family) ->Tuple[Family, Family]:
    """blocks are symmetric: (A, D) is the same block as (D, A)"""
    if FAMILIES.index(first) <= FAMILIES.index(second):
        return first, second
    return second, first


def assembleCorrelation(selection:RandomizationSelection,
    blockValues:Mapping[Tuple[Family, Family], float]) ->CorrelationMatrix:
    """R[i][j] is the value of the block holding the families of i and j"""
    table = np.zeros((len(FAMILIES), len(FAMILIES)))
    given:Dict[Tuple[Family, Family], float] = {}
    for (first, second), value in blockValues.items():
        if not -1.0 < value < 1.0:
            raise ConfigurationError(
                f'correlation {value} of block X{first.code}{second.code} is not in (-1, 1)')
        key = blockKey(first, second)
        given[key] = value
        idx1, idx2 = FAMILIES.index(first), FAMILIES.index(second)
        table[idx1, idx2] = table[idx2, idx1] = value
    familyIndex = np.array([FAMILIES.index(Family(int(x))) for x in selection.familyOf()], dtype=np.int64)
    matrix = table[np.ix_(familyIndex, familyIndex)]
    np.fill_diagonal(matrix, 1.0)
    try:
        return CorrelationMatrix(matrix)
    except CorrelationError as exc:
        active = {x: y for x, y in given.items() if x[0] in selection.families and x[1] in selection.families}
        shown = ', '.join(f'X{x[0].code}{x[1].code}={y}' for x, y in active.items()) or 'none'
        raise CorrelationError(f'{exc} for block values {shown}') from exc
