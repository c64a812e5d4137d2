# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

The deterministic instance generator. generate runs the stages in a
fixed order, each stage draws from the random source in a fixed order:

  buildTopology       extra arcs, one (tail, head) pair per attempt
  placeCommodities    per commodity: origin, destination, demand
  sampleArcParameters f by arc, u by arc, c by (arc, commodity), b likewise
  tuneRandomArcs      one sample per pass that has something to do
  tuneDesignFlow      no draws
"""

from enum import Enum
from typing import List, Optional, Tuple, Dict, Any, TYPE_CHECKING

import numpy as np
import networkx as nx

from common import ConfigurationError, ReprMixin
from log import logWarning, logDebug
from model import Graph, Commodity, DetInstance, totalVolume, validate
from rand import PcgRandom, CountRandomCalls
from util import roundHalfUp, Duration

if TYPE_CHECKING:
    from config import CliConfig
    import numpy.typing as npt


class EmptyGraph(ValueError):

    """a random topology without arcs"""


class Saturation(ValueError):

    """no more distinct arcs can be added"""


class Topology(Enum):

    """how the core structure is built"""
    RANDOM = 'random'
    GRID = 'grid'
    CIRCULAR = 'circular'
    FILE = 'file'


class OdMode(Enum):

    """how origins and destinations are chosen"""
    SINGLE = 'single'
    SHARED = 'shared'
    RANDOM = 'random'


# key in CliConfig -> attribute of GenConfig
CONFIG_KEYS = {
    'gridX': 'gridX', 'gridY': 'gridY', 'nbNodes': 'nodeCount', 'nbCom': 'commodityCount',
    'nbArcs': 'extraRandomArcs', 'srcMin': 'srcMin', 'srcMax': 'srcMax',
    'snkMin': 'snkMin', 'snkMax': 'snkMax',
    'demMin': 'demMin', 'demMax': 'demMax', 'fixMin': 'fixMin', 'fixMax': 'fixMax',
    'varMin': 'varMin', 'varMax': 'varMax', 'capMin': 'capMin', 'capMax': 'capMax',
    'bndMin': 'bndMin', 'bndMax': 'bndMax',
    'rZeroFix': 'ratioZeroFix', 'rFullCap': 'ratioFullCap',
    'rZeroBnd': 'ratioZeroBnd', 'rMaxBnd': 'ratioMaxBnd',
    'adjFix': 'fixMultiplier', 'adjCap': 'capMultiplier'}
FLAG_KEYS = {
    'capInt': 'capInteger', 'bndInt': 'bndInteger', 'useBnd': 'useComCapacity',
    'tuneExtrasOnly': 'tuneExtrasOnly'}


class GenConfig(ReprMixin):

    """all settings of the deterministic generator. Keyword arguments
    override the defaults, unknown keywords are refused"""

    # pylint: disable=too-many-instance-attributes

    def __init__(self, **kwargs:Any) ->None:
        self.topology = Topology.RANDOM
        self.gridX = 3
        self.gridY = 3
        self.nodeCount = 10
        self.commodityCount = 25
        self.extraRandomArcs = 60
        self.allowParallel = False
        self.srcMin = self.srcMax = self.snkMin = self.snkMax = 1
        self.odMode = OdMode.SINGLE
        self.demMin, self.demMax = 5.0, 50.0
        self.fixMin, self.fixMax = 50.0, 150.0
        self.varMin, self.varMax = 5.0, 15.0
        self.capMin, self.capMax = 50.0, 150.0
        self.bndMin, self.bndMax = 10.0, 50.0
        self.capInteger = False
        self.bndInteger = False
        self.useComCapacity = False
        self.ratioZeroFix = 0.0
        self.ratioFullCap = 0.0
        self.ratioZeroBnd = 0.0
        self.ratioMaxBnd = 0.0
        self.tuneExtrasOnly = False
        self.fixMultiplier = 1.0
        self.capMultiplier = 1.0
        for key, value in kwargs.items():
            if not hasattr(self, key):
                raise TypeError(f'GenConfig has no setting {key}')
            setattr(self, key, value)
        self.topology = Topology(self.topology)
        self.odMode = OdMode(self.odMode)
        if self.topology == Topology.GRID:
            self.nodeCount = self.gridX * self.gridY

    @classmethod
    def fromConfig(cls, config:'CliConfig') ->'GenConfig':
        """the generator settings of a resolved detgen configuration"""
        kwargs:Dict[str, Any] = {y: config[x] for x, y in CONFIG_KEYS.items()}
        kwargs.update({y: bool(config[x]) for x, y in FLAG_KEYS.items()})
        kwargs['topology'] = Topology(config['topo'])
        kwargs['odMode'] = OdMode(config['odMode'])
        kwargs['allowParallel'] = not config['noParallel']
        return cls(**kwargs)

    def violations(self) ->List[str]:
        """every violated constraint"""
        # pylint: disable=too-many-branches
        result = []
        if self.topology == Topology.GRID:
            if self.gridX < 1 or self.gridY < 1:
                result.append(f'grid {self.gridX}x{self.gridY} is empty')
            if self.nodeCount != self.gridX * self.gridY:
                result.append(f'grid {self.gridX}x{self.gridY} needs {self.gridX * self.gridY} nodes')
        elif self.nodeCount < 1:
            result.append(f'node count {self.nodeCount} must be positive')
        if self.topology == Topology.CIRCULAR and self.nodeCount < 3:
            result.append(f'a circle needs at least 3 nodes, not {self.nodeCount}')
        if self.commodityCount < 1:
            result.append(f'commodity count {self.commodityCount} must be positive')
        if self.extraRandomArcs < 0:
            result.append(f'extra arc count {self.extraRandomArcs} is negative')
        for name in ('src', 'snk'):
            low, high = getattr(self, name + 'Min'), getattr(self, name + 'Max')
            if low < 1 or low > high:
                result.append(f'{name}Min {low} and {name}Max {high} need 1 <= min <= max')
        if (self.odMode == OdMode.RANDOM and self.topology != Topology.FILE
                and self.srcMax + self.snkMax > self.nodeCount):
            result.append(f'srcMax {self.srcMax} + snkMax {self.snkMax} exceed {self.nodeCount} nodes')
        for name in ('dem', 'fix', 'var', 'cap', 'bnd'):
            low, high = getattr(self, name + 'Min'), getattr(self, name + 'Max')
            if not 0 <= low <= high or not np.isfinite(high):
                result.append(f'{name}Min {low} and {name}Max {high} need 0 <= min <= max')
        for name in ('ratioZeroFix', 'ratioFullCap', 'ratioZeroBnd', 'ratioMaxBnd'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                result.append(f'{name} {getattr(self, name)} is not in [0, 1]')
        result.extend(self.multiplierViolations())
        return result

    def multiplierViolations(self) ->List[str]:
        """the constraints on the design and flow tuning"""
        result = []
        if not self.fixMultiplier >= 1.0:
            result.append(f'fixed cost multiplier {self.fixMultiplier} must be at least 1')
        if not 0.0 < self.capMultiplier <= 1.0:
            result.append(f'capacity multiplier {self.capMultiplier} is not in (0, 1]')
        return result

    def validate(self) ->None:
        """raise ConfigurationError listing every violation"""
        problems = self.violations()
        if problems:
            raise ConfigurationError('; '.join(problems))

    def __str__(self) ->str:
        return (f'GenConfig({self.topology.value}, {self.nodeCount} nodes, '
                f'{self.commodityCount} commodities, {self.extraRandomArcs} extra arcs)')


def _undirectedToArcs(edges:List[Tuple[int, int]]) ->List[Tuple[int, int]]:
    """every edge u < v becomes u->v and v->u, sorted by edge"""
    result = []
    for tail, head in sorted((min(x), max(x)) for x in edges):
        result.append((tail, head))
        result.append((head, tail))
    return result


def gridArcs(gridX:int, gridY:int) ->List[Tuple[int, int]]:
    """lattice arcs in both directions. Node (i, j) has index i * gridY + j"""
    lattice = nx.grid_2d_graph(gridX, gridY)
    return _undirectedToArcs([(u[0] * gridY + u[1], v[0] * gridY + v[1]) for u, v in lattice.edges()])


def circularArcs(nodeCount:int) ->List[Tuple[int, int]]:
    """i <-> i+1 mod nodeCount"""
    return _undirectedToArcs(list(nx.cycle_graph(nodeCount).edges()))


def addRandomArcs(graph:Graph, count:int, allowParallel:bool, rng:PcgRandom) ->Graph:
    """append count random arcs in draw order"""
    if not count:
        return graph
    n = graph.nodeCount
    existing = set(graph.arcs)
    if not allowParallel and len(existing) + count > n * (n - 1):
        raise Saturation(
            f'{count} more arcs do not fit into {n} nodes holding {len(existing)} distinct arcs')
    budget = 100 * count
    added:List[Tuple[int, int]] = []
    with CountRandomCalls(rng, 'addRandomArcs'):
        while len(added) < count:
            if budget == 0:
                raise Saturation(f'found only {len(added)} of {count} random arcs after {100 * count} attempts')
            budget -= 1
            tail = rng.uniformInt(0, n - 1)
            head = rng.uniformInt(0, n - 1)
            if tail == head:
                continue
            if not allowParallel and (tail, head) in existing:
                continue
            existing.add((tail, head))
            added.append((tail, head))
    return graph.withArcs(added)


def buildTopology(config:GenConfig, rng:PcgRandom, graphIn:Optional[Graph]=None) ->Graph:
    """the core structure plus the extra random arcs"""
    if (graphIn is not None) != (config.topology == Topology.FILE):
        raise ConfigurationError('an input graph is needed for and only for topology file')
    noParallel = not config.allowParallel
    if config.topology == Topology.GRID:
        base = Graph(config.gridX * config.gridY, gridArcs(config.gridX, config.gridY), noParallel)
    elif config.topology == Topology.CIRCULAR:
        if config.nodeCount < 3:
            raise ConfigurationError(f'a circle needs at least 3 nodes, not {config.nodeCount}')
        base = Graph(config.nodeCount, circularArcs(config.nodeCount), noParallel)
    elif config.topology == Topology.FILE:
        assert graphIn is not None
        base = Graph(graphIn.nodeCount, graphIn.arcs, noParallel)
    else:
        if config.extraRandomArcs == 0:
            raise EmptyGraph('a random topology needs extra arcs: -nbArcs must be positive')
        base = Graph(config.nodeCount, [], noParallel)
    base = Graph(base.nodeCount, base.arcs, noParallel, firstExtra=base.arcCount)
    return addRandomArcs(base, config.extraRandomArcs, config.allowParallel, rng)


def _drawPair(nodeCount:int, rng:PcgRandom) ->Tuple[int, int]:
    """origin and a different destination"""
    origin = rng.uniformInt(0, nodeCount - 1)
    destination = rng.uniformInt(0, nodeCount - 2)
    if destination >= origin:
        destination += 1
    return origin, destination


def placeCommodities(graph:Graph, config:GenConfig, rng:PcgRandom) ->List[Commodity]:
    """origins, destinations and demands"""
    n = graph.nodeCount
    if n < 2:
        raise ConfigurationError(f'commodities need at least 2 nodes, the graph has {n}')
    result = []
    with CountRandomCalls(rng, 'placeCommodities'):
        if config.odMode == OdMode.SINGLE:
            for _ in range(config.commodityCount):
                origin, destination = _drawPair(n, rng)
                result.append(Commodity(origin, destination, rng.uniformReal(config.demMin, config.demMax)))
        elif config.odMode == OdMode.SHARED:
            origin, destination = _drawPair(n, rng)
            for _ in range(config.commodityCount):
                result.append(Commodity(origin, destination, rng.uniformReal(config.demMin, config.demMax)))
        else:
            if config.srcMax + config.snkMax > n:
                raise ConfigurationError(
                    f'srcMax {config.srcMax} + snkMax {config.snkMax} exceed {n} nodes')
            for _ in range(config.commodityCount):
                sources = rng.uniformInt(config.srcMin, config.srcMax)
                sinks = rng.uniformInt(config.snkMin, config.snkMax)
                nodes = [int(x) for x in rng.sampleWithoutReplacement(n, sources + sinks)]
                share = rng.uniformReal(config.demMin, config.demMax) / (sources * sinks)
                for origin in nodes[:sources]:
                    for destination in nodes[sources:]:
                        result.append(Commodity(origin, destination, share))
    return result


def sampleArcParameters(graph:Graph, commodities:List[Commodity],
    config:GenConfig, rng:PcgRandom) ->DetInstance:
    """f, u, c and optionally b, uniformly from their ranges"""
    arcCount, comCount = graph.arcCount, len(commodities)
    with CountRandomCalls(rng, 'sampleArcParameters'):
        fixedCost = rng.uniformReals(config.fixMin, config.fixMax, (arcCount, ))
        capacity = rng.uniformReals(config.capMin, config.capMax, (arcCount, ))
        varCost = rng.uniformReals(config.varMin, config.varMax, (arcCount, comCount))
        comCapacity = None
        if config.useComCapacity:
            comCapacity = rng.uniformReals(config.bndMin, config.bndMax, (arcCount, comCount))
    if config.capInteger:
        capacity = roundHalfUp(capacity)
    if comCapacity is not None and config.bndInteger:
        comCapacity = roundHalfUp(comCapacity)
    return DetInstance(
        graph, commodities, fixedCost, capacity, varCost, comCapacity,
        useComCapacity=config.useComCapacity,
        capInteger=config.capInteger, bndInteger=config.bndInteger)


def _chooseArcs(candidates:'npt.NDArray[np.int64]', ratio:float, rng:PcgRandom) ->'npt.NDArray[np.int64]':
    """floor(ratio * candidates) distinct arcs"""
    count = int(np.floor(ratio * len(candidates)))
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    return candidates[rng.sampleWithoutReplacement(len(candidates), count)]


def tuneRandomArcs(instance:DetInstance, config:GenConfig, rng:PcgRandom) ->DetInstance:
    """zero fixed costs, full capacities, zero and maximal commodity capacities
    on randomly chosen arcs, in this order"""
    first = instance.graph.firstExtra if config.tuneExtrasOnly else 0
    candidates = np.arange(first, instance.arcCount, dtype=np.int64)
    fixedCost = instance.fixedCost.copy()
    capacity = instance.capacity.copy()
    comCapacity = None if instance.comCapacity is None else instance.comCapacity.copy()
    with CountRandomCalls(rng, 'tuneRandomArcs'):
        fixedCost[_chooseArcs(candidates, config.ratioZeroFix, rng)] = 0.0
        volume = totalVolume(instance)
        capacity[_chooseArcs(candidates, config.ratioFullCap, rng)] = (
            roundHalfUp(volume) if instance.capInteger else volume)
        if comCapacity is None:
            if config.ratioZeroBnd or config.ratioMaxBnd:
                logWarning('commodity capacities are not generated, ignoring -rZeroBnd and -rMaxBnd')
        else:
            comCapacity[_chooseArcs(candidates, config.ratioZeroBnd, rng), :] = 0.0
            chosen = _chooseArcs(candidates, config.ratioMaxBnd, rng)
            full = capacity[chosen]
            if instance.bndInteger:
                full = roundHalfUp(full)
            comCapacity[chosen, :] = full[:, np.newaxis]
    return instance.replace(fixedCost=fixedCost, capacity=capacity, comCapacity=comCapacity)


def tuneDesignFlow(instance:DetInstance, config:GenConfig) ->DetInstance:
    """scale all fixed costs up and all capacities down"""
    problems = config.multiplierViolations()
    if problems:
        raise ConfigurationError('; '.join(problems))
    capacity = instance.capacity * config.capMultiplier
    if instance.capInteger:
        capacity = roundHalfUp(capacity)
    return instance.replace(fixedCost=instance.fixedCost * config.fixMultiplier, capacity=capacity)


def warnIfNotStronglyConnected(graph:Graph) ->bool:
    """log a warning if some node cannot reach some other node. Returns
    True if strongly connected"""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(graph.nodeCount))
    digraph.add_edges_from(graph.arcs)
    if nx.is_strongly_connected(digraph):
        return True
    parts = nx.number_strongly_connected_components(digraph)
    logWarning(f'the graph is not strongly connected: {parts} components')
    return False


def generate(config:GenConfig, rng:PcgRandom, graphIn:Optional[Graph]=None) ->DetInstance:
    """the complete pipeline"""
    config.validate()
    with Duration('generate'):
        graph = buildTopology(config, rng, graphIn)
        commodities = placeCommodities(graph, config, rng)
        instance = sampleArcParameters(graph, commodities, config, rng)
        instance = tuneRandomArcs(instance, config, rng)
        instance = tuneDesignFlow(instance, config)
    problems = validate(instance)
    if problems:
        raise ConfigurationError('the generated instance is not valid: ' + '; '.join(problems))
    warnIfNotStronglyConnected(graph)
    logDebug(f'generated {instance} with {rng.count} random draws')
    return instance
