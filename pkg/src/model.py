# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

The data model of the deterministic and of the two stage stochastic
multi-commodity capacitated fixed charge network design problem.

Node indices are 0-based here and 1-based in all files; fileformat
converts at the boundary. All per arc data is keyed by arc index, so
parallel arcs are just distinct arcs with the same (tail, head).

Instances are immutable: arrays are read-only and every modification
returns a new instance, see DetInstance.replace.
"""

from enum import IntFlag
from typing import Tuple, List, Dict, Iterable, Optional, NamedTuple, Any, TYPE_CHECKING

import numpy as np

from common import ReprMixin, ConfigurationError

if TYPE_CHECKING:
    import numpy.typing as npt


def _frozen(values:Any, shape:Optional[Tuple[int, ...]]=None) ->'npt.NDArray[np.float64]':
    """a read-only float copy"""
    result = np.array(values, dtype=np.float64)
    if shape is not None and result.size == 0:
        result = result.reshape(shape)
    result.flags.writeable = False
    return result


class Family(IntFlag):

    """the parameter families which may vary between scenarios. The
    values are the bits of the stogen -S mask"""
    DEMAND = 1
    ARC_CAPACITY = 2
    COM_CAPACITY = 4
    FIXED_COST = 8
    VAR_COST = 16

    @property
    def code(self) ->str:
        """the letter used in -X<p><q> correlation flags"""
        return FAMILY_CODES[self]

# canonical order of the families in a flattened parameter vector
FAMILIES = (Family.DEMAND, Family.ARC_CAPACITY, Family.COM_CAPACITY, Family.FIXED_COST, Family.VAR_COST)
FAMILY_CODES = {
    Family.DEMAND: 'D', Family.ARC_CAPACITY: 'A', Family.COM_CAPACITY: 'B',
    Family.FIXED_COST: 'F', Family.VAR_COST: 'C'}
CODE_FAMILIES = {y: x for x, y in FAMILY_CODES.items()}


class Graph(ReprMixin):

    """a directed graph. Arc index is the position in arcs.

    noParallel: the graph was built with parallel arcs precluded
    firstExtra: index of the first arc added randomly. Arcs before it
    come from the grid, the ring or the graph file"""

    def __init__(self, nodeCount:int, arcs:Iterable[Tuple[int, int]],
        noParallel:bool=False, firstExtra:int=0) ->None:
        self.nodeCount = int(nodeCount)
        self.arcs:Tuple[Tuple[int, int], ...] = tuple((int(t), int(h)) for t, h in arcs)
        self.noParallel = bool(noParallel)
        self.firstExtra = int(firstExtra)
        self.tails = np.array([x[0] for x in self.arcs], dtype=np.int64)
        self.heads = np.array([x[1] for x in self.arcs], dtype=np.int64)
        self.tails.flags.writeable = False
        self.heads.flags.writeable = False

    @property
    def arcCount(self) ->int:
        """|A|"""
        return len(self.arcs)

    def withArcs(self, arcs:Iterable[Tuple[int, int]]) ->'Graph':
        """a new graph with more arcs appended"""
        return Graph(self.nodeCount, self.arcs + tuple(arcs), self.noParallel, self.firstExtra)

    def violations(self) ->List[str]:
        """all violated graph invariants"""
        result = []
        if self.nodeCount < 1:
            result.append(f'node count {self.nodeCount} is not positive')
        seen:Dict[Tuple[int, int], int] = {}
        for idx, (tail, head) in enumerate(self.arcs):
            if not 0 <= tail < self.nodeCount or not 0 <= head < self.nodeCount:
                result.append(f'arc {idx} ({tail}, {head}) has a node out of range')
            if tail == head:
                result.append(f'self-loop at arc {idx}')
            if self.noParallel and (tail, head) in seen:
                result.append(f'arc {idx} is parallel to arc {seen[(tail, head)]}')
            seen.setdefault((tail, head), idx)
        return result

    def __eq__(self, other:object) ->bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.nodeCount == other.nodeCount and self.arcs == other.arcs

    def __hash__(self) ->int:
        return hash((self.nodeCount, self.arcs))

    def __str__(self) ->str:
        return f'Graph({self.nodeCount} nodes, {self.arcCount} arcs)'


class Commodity(NamedTuple):

    """origin O(k), destination D(k) and demand d^k"""
    origin: int
    destination: int
    demand: float


class DetInstance(ReprMixin):

    """a complete deterministic instance.

    varCost and comCapacity have shape (|A|, |K|), arc-major.
    comCapacity is None when useComCapacity is False."""

    # pylint: disable=too-many-instance-attributes

    def __init__(self, graph:Graph, commodities:Iterable[Commodity],
        fixedCost:'npt.ArrayLike', capacity:'npt.ArrayLike', varCost:'npt.ArrayLike',
        comCapacity:Optional['npt.ArrayLike']=None, useComCapacity:bool=False,
        capInteger:bool=False, bndInteger:bool=False) ->None:
        # pylint: disable=too-many-arguments
        self.graph = graph
        self.commodities:Tuple[Commodity, ...] = tuple(
            Commodity(int(x[0]), int(x[1]), float(x[2])) for x in commodities)
        arcCount = graph.arcCount
        comCount = len(self.commodities)
        self.fixedCost = _frozen(fixedCost, (arcCount, ))
        self.capacity = _frozen(capacity, (arcCount, ))
        self.varCost = _frozen(varCost, (arcCount, comCount))
        self.useComCapacity = bool(useComCapacity)
        self.comCapacity = None if comCapacity is None else _frozen(comCapacity, (arcCount, comCount))
        self.capInteger = bool(capInteger)
        self.bndInteger = bool(bndInteger)

    @property
    def arcCount(self) ->int:
        """|A|"""
        return self.graph.arcCount

    @property
    def comCount(self) ->int:
        """|K|"""
        return len(self.commodities)

    @property
    def nodeCount(self) ->int:
        """|N|"""
        return self.graph.nodeCount

    @property
    def demands(self) ->'npt.NDArray[np.float64]':
        """d^k for all k"""
        return _frozen([x.demand for x in self.commodities], (0, ))

    def replace(self, **changes:Any) ->'DetInstance':
        """a copy with some fields replaced"""
        fields:Dict[str, Any] = {
            'graph': self.graph, 'commodities': self.commodities,
            'fixedCost': self.fixedCost, 'capacity': self.capacity,
            'varCost': self.varCost, 'comCapacity': self.comCapacity,
            'useComCapacity': self.useComCapacity,
            'capInteger': self.capInteger, 'bndInteger': self.bndInteger}
        unknown = set(changes) - set(fields)
        if unknown:
            raise TypeError(f'DetInstance has no fields {sorted(unknown)}')
        fields.update(changes)
        return DetInstance(**fields)

    def __eq__(self, other:object) ->bool:
        if not isinstance(other, DetInstance):
            return NotImplemented
        if self.comCapacity is None or other.comCapacity is None:
            sameB = self.comCapacity is None and other.comCapacity is None
        else:
            sameB = np.array_equal(self.comCapacity, other.comCapacity)
        return (self.graph == other.graph and self.commodities == other.commodities
                and self.useComCapacity == other.useComCapacity
                and np.array_equal(self.fixedCost, other.fixedCost)
                and np.array_equal(self.capacity, other.capacity)
                and np.array_equal(self.varCost, other.varCost)
                and sameB)

    __hash__ = None  # type:ignore[assignment]

    def __str__(self) ->str:
        return (f'DetInstance({self.nodeCount} nodes, {self.arcCount} arcs, '
                f'{self.comCount} commodities{", with b" if self.useComCapacity else ""})')


def nodeBalance(instance:DetInstance, commodity:int,
    demandOverride:Optional[float]=None) ->'npt.NDArray[np.float64]':
    """w^k: +d at the origin, -d at the destination, 0 elsewhere"""
    if not 0 <= commodity < instance.comCount:
        raise IndexError(f'commodity {commodity} is not in 0..{instance.comCount - 1}')
    com = instance.commodities[commodity]
    demand = com.demand if demandOverride is None else float(demandOverride)
    result = np.zeros(instance.nodeCount)
    result[com.origin] = demand
    result[com.destination] = -demand
    return result


def totalVolume(instance:DetInstance) ->float:
    """the sum of all demands"""
    return float(sum(x.demand for x in instance.commodities))


def _signViolations(name:str, values:'npt.NDArray[np.float64]', what:str) ->List[str]:
    """one message per negative or non finite entry"""
    result = []
    for idx in zip(*np.nonzero(~np.isfinite(values))):
        result.append(f'{name} on {what} {",".join(str(x) for x in idx)} is not finite')
    for idx in zip(*np.nonzero(values < 0)):
        result.append(f'{name} {values[idx]} on {what} {",".join(str(x) for x in idx)} is negative')
    return result


def _integerViolations(name:str, values:'npt.NDArray[np.float64]', what:str) ->List[str]:
    """one message per non integer entry"""
    finite = np.where(np.isfinite(values), values, 0.0)
    return [f'{name} {values[idx]} on {what} {",".join(str(x) for x in idx)} is not integer'
            for idx in zip(*np.nonzero(finite != np.round(finite)))]


def validate(instance:DetInstance) ->List[str]:
    """every violated invariant. An empty list means valid"""
    result = instance.graph.violations()
    arcCount, comCount = instance.arcCount, instance.comCount
    for idx, com in enumerate(instance.commodities):
        if not 0 <= com.origin < instance.nodeCount or not 0 <= com.destination < instance.nodeCount:
            result.append(f'commodity {idx} has a node out of range')
        if com.origin == com.destination:
            result.append(f'commodity {idx} has origin = destination {com.origin}')
        if not np.isfinite(com.demand):
            result.append(f'demand of commodity {idx} is not finite')
        elif com.demand < 0:
            result.append(f'demand {com.demand} of commodity {idx} is negative')
    shapes = (('fixed cost', instance.fixedCost, (arcCount, )),
              ('capacity', instance.capacity, (arcCount, )),
              ('variable cost', instance.varCost, (arcCount, comCount)))
    if instance.comCapacity is not None:
        shapes += (('commodity capacity', instance.comCapacity, (arcCount, comCount)), )
    badShape = False
    for name, values, shape in shapes:
        if values.shape != shape:
            result.append(f'{name} has shape {values.shape}, expected {shape}')
            badShape = True
    if instance.useComCapacity and instance.comCapacity is None:
        result.append('commodity capacities are active but missing')
    if badShape:
        return result
    result.extend(_signViolations('fixed cost', instance.fixedCost, 'arc'))
    result.extend(_signViolations('capacity', instance.capacity, 'arc'))
    result.extend(_signViolations('variable cost', instance.varCost, 'arc,commodity'))
    if instance.capInteger:
        result.extend(_integerViolations('capacity', instance.capacity, 'arc'))
    if instance.comCapacity is not None:
        result.extend(_signViolations('commodity capacity', instance.comCapacity, 'arc,commodity'))
        if instance.bndInteger:
            result.extend(_integerViolations('commodity capacity', instance.comCapacity, 'arc,commodity'))
    return result


class RandomizationSelection(ReprMixin):

    """which families vary between scenarios and where their values go
    in a flattened vector: all demands by commodity, then arc capacities
    by arc, then commodity capacities by (arc, commodity), then fixed
    costs by arc, then variable costs by (arc, commodity)"""

    def __init__(self, flags:Family, arcCount:int, comCount:int) ->None:
        self.flags = Family(flags)
        self.arcCount = arcCount
        self.comCount = comCount
        self.slices:Dict[Family, slice] = {}
        start = 0
        for family in self.families:
            size = self.familySize(family)
            self.slices[family] = slice(start, start + size)
            start += size
        self.variableCount = start

    @classmethod
    def forInstance(cls, flags:int, instance:DetInstance) ->'RandomizationSelection':
        """selection sized for instance"""
        return cls(Family(flags), instance.arcCount, instance.comCount)

    @property
    def families(self) ->List[Family]:
        """selected families in canonical order"""
        return [x for x in FAMILIES if x & self.flags]

    def familySize(self, family:Family) ->int:
        """how many variables family contributes"""
        if family == Family.DEMAND:
            return self.comCount
        if family in (Family.ARC_CAPACITY, Family.FIXED_COST):
            return self.arcCount
        return self.arcCount * self.comCount

    @property
    def variableIndex(self) ->List[Tuple[Family, Tuple[int, ...]]]:
        """(family, identifying indices) per variable, in canonical order"""
        result:List[Tuple[Family, Tuple[int, ...]]] = []
        for family in self.families:
            if family == Family.DEMAND:
                result.extend((family, (k, )) for k in range(self.comCount))
            elif family in (Family.ARC_CAPACITY, Family.FIXED_COST):
                result.extend((family, (a, )) for a in range(self.arcCount))
            else:
                result.extend((family, (a, k)) for a in range(self.arcCount) for k in range(self.comCount))
        return result

    def familyOf(self) ->'npt.NDArray[np.int64]':
        """the family bit of every variable"""
        result = np.zeros(self.variableCount, dtype=np.int64)
        for family, part in self.slices.items():
            result[part] = int(family)
        return result

    def describe(self, variable:int) ->str:
        """human readable name of a variable, 1-based like in files"""
        for family, part in self.slices.items():
            if part.start <= variable < part.stop:
                offset = variable - part.start
                if family == Family.DEMAND:
                    return f'demand of commodity {offset + 1}'
                if family == Family.ARC_CAPACITY:
                    return f'capacity of arc {offset + 1}'
                if family == Family.FIXED_COST:
                    return f'fixed cost of arc {offset + 1}'
                arc, com = divmod(offset, self.comCount)
                name = 'commodity capacity' if family == Family.COM_CAPACITY else 'variable cost'
                return f'{name} of arc {arc + 1} commodity {com + 1}'
        raise IndexError(f'variable {variable} is not in 0..{self.variableCount - 1}')

    def __str__(self) ->str:
        return f"{'+'.join(x.code for x in self.families) or 'nothing'}: {self.variableCount} variables"


def _familyValues(instance:DetInstance, family:Family) ->'npt.NDArray[np.float64]':
    """the base values of one family in canonical order"""
    if family == Family.DEMAND:
        return instance.demands
    if family == Family.ARC_CAPACITY:
        return instance.capacity
    if family == Family.FIXED_COST:
        return instance.fixedCost
    if family == Family.VAR_COST:
        return instance.varCost.ravel()
    if not instance.useComCapacity or instance.comCapacity is None:
        raise ConfigurationError('commodity capacities are selected for randomization '
                                 'but the instance has none')
    return instance.comCapacity.ravel()


def _checkShape(instance:DetInstance, selection:RandomizationSelection) ->None:
    """selection must be sized for instance"""
    if (selection.arcCount, selection.comCount) != (instance.arcCount, instance.comCount):
        raise ConfigurationError(
            f'selection for {selection.arcCount} arcs and {selection.comCount} commodities '
            f'does not fit {instance}')


def flatten(instance:DetInstance, selection:RandomizationSelection) ->'npt.NDArray[np.float64]':
    """the base values of all selected parameters in canonical order"""
    _checkShape(instance, selection)
    parts = [_familyValues(instance, x) for x in selection.families]
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def unflatten(instance:DetInstance, selection:RandomizationSelection,
    column:'npt.ArrayLike') ->DetInstance:
    """a copy of instance with the selected parameters taken from column.
    Randomized capacities are real valued: their integer flags are cleared"""
    _checkShape(instance, selection)
    values = np.asarray(column, dtype=np.float64)
    changes:Dict[str, Any] = {}
    for family, part in selection.slices.items():
        chunk = values[part]
        if family == Family.DEMAND:
            changes['commodities'] = [
                Commodity(x.origin, x.destination, float(d)) for x, d in zip(instance.commodities, chunk)]
        elif family == Family.ARC_CAPACITY:
            changes['capacity'] = chunk
            changes['capInteger'] = False
        elif family == Family.FIXED_COST:
            changes['fixedCost'] = chunk
        elif family == Family.VAR_COST:
            changes['varCost'] = chunk.reshape(instance.arcCount, instance.comCount)
        else:
            _familyValues(instance, family)
            changes['comCapacity'] = chunk.reshape(instance.arcCount, instance.comCount)
            changes['bndInteger'] = False
    return instance.replace(**changes)


class ScenarioMatrix(ReprMixin):

    """values: one row per randomized variable in canonical order,
    one column per scenario. probabilities: p(omega) per column"""

    def __init__(self, values:'npt.ArrayLike', probabilities:Optional['npt.ArrayLike']=None) ->None:
        self.values = _frozen(values)
        if self.values.ndim != 2 or min(self.values.shape) < 1:
            raise ValueError(f'scenario values must be a non empty matrix, got shape {self.values.shape}')
        if probabilities is None:
            probabilities = equiprobable(self.values.shape[1])
        self.probabilities = _frozen(probabilities)
        checkProbabilities(self.probabilities, self.values.shape[1], 1e-12)

    @property
    def variableCount(self) ->int:
        """n"""
        return self.values.shape[0]

    @property
    def scenarioCount(self) ->int:
        """s"""
        return self.values.shape[1]

    def column(self, scenario:int) ->'npt.NDArray[np.float64]':
        """all variable values of one scenario"""
        return self.values[:, scenario]

    def retain(self, keep:'npt.ArrayLike') ->'ScenarioMatrix':
        """only scenarios where keep is True, probabilities rescaled to sum 1"""
        mask = np.asarray(keep, dtype=bool)
        kept = self.probabilities[mask]
        return ScenarioMatrix(self.values[:, mask], kept / kept.sum())

    def __eq__(self, other:object) ->bool:
        if not isinstance(other, ScenarioMatrix):
            return NotImplemented
        return (np.array_equal(self.values, other.values)
                and np.array_equal(self.probabilities, other.probabilities))

    __hash__ = None  # type:ignore[assignment]

    def __str__(self) ->str:
        return f'ScenarioMatrix({self.variableCount} variables, {self.scenarioCount} scenarios)'


def equiprobable(scenarioCount:int) ->'npt.NDArray[np.float64]':
    """1/s for every scenario"""
    return np.full(scenarioCount, 1.0 / scenarioCount)


def checkProbabilities(probabilities:'npt.NDArray[np.float64]', scenarioCount:int, tolerance:float) ->None:
    """raise ValueError unless probabilities is a valid distribution over scenarioCount scenarios"""
    if probabilities.shape != (scenarioCount, ):
        raise ValueError(f'{probabilities.size} probabilities for {scenarioCount} scenarios')
    if not np.all(probabilities > 0):
        raise ValueError('probabilities must be strictly positive')
    if abs(float(probabilities.sum()) - 1.0) > tolerance:
        raise ValueError(f'probabilities sum to {probabilities.sum()!r}, not 1')
