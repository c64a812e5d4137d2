# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

Readers and writers of all files. Nodes, arcs, commodities and scenarios
are numbered from 1 in files. Reals are written as the shortest decimal
that reads back to the same double. Writers produce LF line endings,
readers also accept CRLF. Values are separated by blanks.

STD:     |N| |A| |K| useB
         |A| lines: tail head f u
         |K| lines: origin destination demand
         |A| lines of |K| variable costs, empty lines when |K| is 0
         with useB=1, |A| lines of |K| commodity capacities
STOCH:   per scenario a line `SCENARIO number probability`, then STD
GRAPH:   |N| |A|, then |A| lines: tail head
MOMENTS: n 4, then n lines: mean std skewness kurtosis
CORR:    n n, then n lines of n values
PROBS:   s, then s lines with one probability
HKWMAT:  n s, then n lines of s values
"""

from typing import List, Tuple, Optional, Iterable, Callable, Dict, Sequence, TYPE_CHECKING

import numpy as np

from model import (Graph, Commodity, DetInstance, ScenarioMatrix, RandomizationSelection, nodeBalance,
                   checkProbabilities)
from moments import MomentTargets, CorrelationMatrix, CorrelationError, DegenerateDistribution

if TYPE_CHECKING:
    import numpy.typing as npt

PROBABILITY_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-12


class ParseError(ValueError):

    """a file does not hold what it should"""

    def __init__(self, fileName:str, lineNr:int, msg:str) ->None:
        super().__init__(f'{fileName}:{lineNr}: {msg}')
        self.fileName = fileName
        self.lineNr = lineNr


def formatReal(value:float) ->str:
    """shortest exact decimal"""
    return repr(float(value))


def _joinReals(values:Iterable[float]) ->str:
    """one line"""
    return ' '.join(formatReal(x) for x in values)


class _Lines:

    """the non-empty lines of a text, with line numbers"""

    def __init__(self, text:str, fileName:str) ->None:
        self.fileName = fileName
        self.lines = [(nr, line.split()) for nr, line in enumerate(text.splitlines(), start=1) if line.strip()]
        self.position = 0
        self.lastNr = 0

    def atEnd(self) ->bool:
        """no more lines"""
        return self.position >= len(self.lines)

    def peek(self) ->List[str]:
        """the next line without consuming it"""
        return self.lines[self.position][1] if not self.atEnd() else []

    def fail(self, msg:str, lineNr:Optional[int]=None) ->ParseError:
        """the error for the current line"""
        return ParseError(self.fileName, self.lastNr if lineNr is None else lineNr, msg)

    def next(self, count:int, what:str) ->List[str]:
        """the next line, it must have count fields. A row of 0 fields is an
        empty line, which is never stored: nothing is consumed"""
        if count == 0:
            return []
        if self.atEnd():
            raise self.fail(f'file ends before {what}', self.lastNr + 1)
        self.lastNr, fields = self.lines[self.position]
        self.position += 1
        if len(fields) != count:
            raise self.fail(f'{what}: expected {count} values, found {len(fields)}')
        return fields

    def ints(self, count:int, what:str) ->List[int]:
        """the next line as integers"""
        fields = self.next(count, what)
        try:
            return [int(x) for x in fields]
        except ValueError as exc:
            raise self.fail(f'{what}: {exc}') from exc

    def reals(self, count:int, what:str) ->'npt.NDArray[np.float64]':
        """the next line as finite reals"""
        fields = self.next(count, what)
        try:
            result = np.array([float(x) for x in fields])
        except ValueError as exc:
            raise self.fail(f'{what}: {exc}') from exc
        if not np.all(np.isfinite(result)):
            raise self.fail(f'{what}: values must be finite')
        return result

    def node(self, text:str, nodeCount:int, what:str) ->int:
        """1-based in the file, 0-based in memory"""
        try:
            value = int(text)
        except ValueError as exc:
            raise self.fail(f'{what}: {exc}') from exc
        if not 1 <= value <= nodeCount:
            raise self.fail(f'{what}: node {value} is not in 1..{nodeCount}')
        return value - 1

    def finish(self) ->None:
        """there must be nothing left"""
        if not self.atEnd():
            raise self.fail('unexpected data after the end', self.lines[self.position][0])


def _stdLines(instance:DetInstance) ->List[str]:
    """the STD body"""
    useB = instance.useComCapacity and instance.comCapacity is not None
    result = [f'{instance.nodeCount} {instance.arcCount} {instance.comCount} {int(useB)}']
    for (tail, head), fixed, cap in zip(instance.graph.arcs, instance.fixedCost, instance.capacity):
        result.append(f'{tail + 1} {head + 1} {formatReal(fixed)} {formatReal(cap)}')
    for com in instance.commodities:
        result.append(f'{com.origin + 1} {com.destination + 1} {formatReal(com.demand)}')
    result.extend(_joinReals(x) for x in instance.varCost)
    if useB:
        assert instance.comCapacity is not None
        result.extend(_joinReals(x) for x in instance.comCapacity)
    return result


def writeStd(instance:DetInstance) ->str:
    """the STD text"""
    return '\n'.join(_stdLines(instance)) + '\n'


def _nonNegative(lines:_Lines, values:'npt.NDArray[np.float64]', what:str) ->None:
    """costs and capacities may not be negative"""
    if np.any(values < 0):
        raise lines.fail(f'{what} must not be negative')


def _readStdBody(lines:_Lines) ->DetInstance:
    """one STD instance starting at the current line"""
    nodeCount, arcCount, comCount, useB = lines.ints(4, 'header')
    if nodeCount < 1 or arcCount < 0 or comCount < 0 or useB not in (0, 1):
        raise lines.fail(f'header {nodeCount} {arcCount} {comCount} {useB} is not valid')
    arcs = []
    fixedCost = np.empty(arcCount)
    capacity = np.empty(arcCount)
    for arc in range(arcCount):
        fields = lines.next(4, f'arc {arc + 1}')
        tail = lines.node(fields[0], nodeCount, f'arc {arc + 1}')
        head = lines.node(fields[1], nodeCount, f'arc {arc + 1}')
        if tail == head:
            raise lines.fail(f'arc {arc + 1} is a self-loop')
        try:
            fixedCost[arc], capacity[arc] = float(fields[2]), float(fields[3])
        except ValueError as exc:
            raise lines.fail(f'arc {arc + 1}: {exc}') from exc
        _nonNegative(lines, np.array([fixedCost[arc], capacity[arc]]), f'cost and capacity of arc {arc + 1}')
        arcs.append((tail, head))
    commodities = []
    for com in range(comCount):
        fields = lines.next(3, f'commodity {com + 1}')
        origin = lines.node(fields[0], nodeCount, f'commodity {com + 1}')
        destination = lines.node(fields[1], nodeCount, f'commodity {com + 1}')
        if origin == destination:
            raise lines.fail(f'commodity {com + 1} has origin = destination')
        try:
            demand = float(fields[2])
        except ValueError as exc:
            raise lines.fail(f'commodity {com + 1}: {exc}') from exc
        _nonNegative(lines, np.array([demand]), f'demand of commodity {com + 1}')
        commodities.append(Commodity(origin, destination, demand))
    varCost = np.empty((arcCount, comCount))
    for arc in range(arcCount):
        varCost[arc] = lines.reals(comCount, f'variable costs of arc {arc + 1}')
        _nonNegative(lines, varCost[arc], f'variable costs of arc {arc + 1}')
    comCapacity = None
    if useB:
        comCapacity = np.empty((arcCount, comCount))
        for arc in range(arcCount):
            comCapacity[arc] = lines.reals(comCount, f'commodity capacities of arc {arc + 1}')
            _nonNegative(lines, comCapacity[arc], f'commodity capacities of arc {arc + 1}')
    return DetInstance(Graph(nodeCount, arcs), commodities, fixedCost, capacity, varCost,
                       comCapacity, useComCapacity=bool(useB))


def readStd(text:str, fileName:str='<std>') ->DetInstance:
    """the instance in an STD text"""
    lines = _Lines(text, fileName)
    result = _readStdBody(lines)
    lines.finish()
    return result


def writeStochastic(base:DetInstance, selection:RandomizationSelection, retained:ScenarioMatrix,
    numbers:Optional[Sequence[int]]=None) ->str:
    """every scenario as a complete instance. numbers are the 1-based
    scenario numbers, default 1..s"""
    # pylint: disable=import-outside-toplevel,cyclic-import
    from feasibility import scenarioInstance
    if numbers is None:
        numbers = range(1, retained.scenarioCount + 1)
    if len(numbers) != retained.scenarioCount:
        raise ValueError(f'{len(numbers)} scenario numbers for {retained.scenarioCount} scenarios')
    result = []
    for column, (number, probability) in enumerate(zip(numbers, retained.probabilities)):
        result.append(f'SCENARIO {number} {formatReal(probability)}')
        result.extend(_stdLines(scenarioInstance(base, selection, retained.column(column))))
    return '\n'.join(result) + '\n'


def readStochastic(text:str, fileName:str='<stoch>') ->List[Tuple[int, float, DetInstance]]:
    """(scenario number, probability, instance) per scenario"""
    lines = _Lines(text, fileName)
    result = []
    while not lines.atEnd():
        fields = lines.next(3, 'scenario header')
        if fields[0] != 'SCENARIO':
            raise lines.fail(f'expected SCENARIO, found {fields[0]}')
        try:
            number, probability = int(fields[1]), float(fields[2])
        except ValueError as exc:
            raise lines.fail(f'scenario header: {exc}') from exc
        result.append((number, probability, _readStdBody(lines)))
    if not result:
        raise lines.fail('no scenarios found', 1)
    try:
        checkProbabilities(np.array([x[1] for x in result]), len(result), PROBABILITY_TOLERANCE)
    except ValueError as exc:
        raise lines.fail(str(exc), 1) from exc
    return result


def writeGraph(graph:Graph) ->str:
    """the GRAPH text"""
    lines = [f'{graph.nodeCount} {graph.arcCount}']
    lines.extend(f'{tail + 1} {head + 1}' for tail, head in graph.arcs)
    return '\n'.join(lines) + '\n'


def readGraph(text:str, fileName:str='<graph>') ->Graph:
    """the graph in a GRAPH text"""
    lines = _Lines(text, fileName)
    nodeCount, arcCount = lines.ints(2, 'header')
    if nodeCount < 1 or arcCount < 0:
        raise lines.fail(f'header {nodeCount} {arcCount} is not valid')
    arcs = []
    for arc in range(arcCount):
        fields = lines.next(2, f'arc {arc + 1}')
        arcs.append((lines.node(fields[0], nodeCount, f'arc {arc + 1}'),
                     lines.node(fields[1], nodeCount, f'arc {arc + 1}')))
        if arcs[-1][0] == arcs[-1][1]:
            raise lines.fail(f'arc {arc + 1} is a self-loop')
    lines.finish()
    return Graph(nodeCount, arcs)


def _writeMatrix(values:'npt.NDArray[np.float64]', header:str) ->str:
    """header line and one line per row"""
    return '\n'.join([header] + [_joinReals(x) for x in values]) + '\n'


def _readMatrix(lines:_Lines, what:str, columns:Optional[int]=None) ->'npt.NDArray[np.float64]':
    """header `rows columns` and the rows. columns given means it must match"""
    rows, cols = lines.ints(2, 'header')
    if rows < 1 or cols < 1 or (columns is not None and cols != columns):
        raise lines.fail(f'header {rows} {cols} is not valid for {what}')
    result = np.empty((rows, cols))
    for row in range(rows):
        result[row] = lines.reals(cols, f'{what} row {row + 1}')
    lines.finish()
    return result


def writeMoments(targets:MomentTargets) ->str:
    """the MOMENTS text"""
    return _writeMatrix(targets.values, f'{targets.variableCount} 4')


def readMoments(text:str, fileName:str='<moments>') ->MomentTargets:
    """the targets in a MOMENTS text"""
    lines = _Lines(text, fileName)
    values = _readMatrix(lines, 'moments', 4)
    try:
        return MomentTargets(values)
    except (ValueError, DegenerateDistribution) as exc:
        raise ParseError(fileName, 1, str(exc)) from exc


def writeCorr(matrix:CorrelationMatrix) ->str:
    """the CORR text"""
    size = matrix.variableCount
    return _writeMatrix(matrix.values, f'{size} {size}')


def readCorr(text:str, fileName:str='<corr>') ->CorrelationMatrix:
    """the correlation matrix in a CORR text"""
    lines = _Lines(text, fileName)
    values = _readMatrix(lines, 'correlations')
    if values.shape[0] != values.shape[1]:
        raise ParseError(fileName, 1, f'correlation matrix must be square, not {values.shape}')
    try:
        return CorrelationMatrix(values, tolerance=SYMMETRY_TOLERANCE)
    except CorrelationError as exc:
        raise ParseError(fileName, 1, str(exc)) from exc


def writeProbs(probabilities:'npt.ArrayLike') ->str:
    """the PROBS text"""
    values = np.asarray(probabilities, dtype=np.float64)
    return '\n'.join([str(len(values))] + [formatReal(x) for x in values]) + '\n'


def readProbs(text:str, fileName:str='<probs>') ->'npt.NDArray[np.float64]':
    """the probabilities in a PROBS text"""
    lines = _Lines(text, fileName)
    count = lines.ints(1, 'header')[0]
    if count < 1:
        raise lines.fail(f'scenario count {count} is not positive')
    result = np.array([lines.reals(1, f'probability {x + 1}')[0] for x in range(count)])
    lines.finish()
    try:
        checkProbabilities(result, count, PROBABILITY_TOLERANCE)
    except ValueError as exc:
        raise ParseError(fileName, 1, str(exc)) from exc
    return result


def writeHkwMatrix(scenarios:ScenarioMatrix) ->str:
    """the HKWMAT text"""
    return _writeMatrix(scenarios.values, f'{scenarios.variableCount} {scenarios.scenarioCount}')


def readHkwMatrix(text:str, fileName:str='<hkw>',
    probabilities:Optional['npt.ArrayLike']=None) ->ScenarioMatrix:
    """the scenarios in an HKWMAT text, equiprobable unless probabilities are given"""
    lines = _Lines(text, fileName)
    values = _readMatrix(lines, 'scenario matrix')
    try:
        return ScenarioMatrix(values, probabilities)
    except ValueError as exc:
        raise ParseError(fileName, 1, str(exc)) from exc


def arcNames(graph:Graph) ->List[str]:
    """tail_head, parallel arcs get p2, p3 and so on appended"""
    seen:Dict[Tuple[int, int], int] = {}
    result = []
    for tail, head in graph.arcs:
        seen[(tail, head)] = seen.get((tail, head), 0) + 1
        name = f'{tail + 1}_{head + 1}'
        if seen[(tail, head)] > 1:
            name += f'p{seen[(tail, head)]}'
        result.append(name)
    return result


class _Model:

    """the rows and columns of the network design model"""

    # pylint: disable=too-few-public-methods

    def __init__(self, instance:DetInstance) ->None:
        names = arcNames(instance.graph)
        comCount = instance.comCount
        self.designNames = [f'y_{x}' for x in names]
        self.flowNames = [[f'x_{x}_{k + 1}' for k in range(comCount)] for x in names]
        self.objective = 'obj'
        # rows: name, sense, rhs, [(column, coefficient)]
        self.rows:List[Tuple[str, str, float, List[Tuple[str, float]]]] = []
        incident:List[List[Tuple[int, float]]] = [[] for _ in range(instance.nodeCount)]
        for arc, (tail, head) in enumerate(instance.graph.arcs):
            incident[tail].append((arc, 1.0))
            incident[head].append((arc, -1.0))
        balances = [nodeBalance(instance, x) for x in range(comCount)]
        for node in range(instance.nodeCount):
            for idx in range(comCount):
                terms = [(self.flowNames[arc][idx], coef) for arc, coef in incident[node]]
                self.rows.append((f'flow_{node + 1}_{idx + 1}', 'E', float(balances[idx][node]), terms))
        for arc, name in enumerate(names):
            terms = [(self.flowNames[arc][k], 1.0) for k in range(comCount)]
            terms.append((self.designNames[arc], -float(instance.capacity[arc])))
            self.rows.append((f'bundle_{name}', 'L', 0.0, terms))
        if instance.useComCapacity and instance.comCapacity is not None:
            for arc, name in enumerate(names):
                for k in range(comCount):
                    self.rows.append((f'strong_{name}_{k + 1}', 'L', 0.0, [
                        (self.flowNames[arc][k], 1.0),
                        (self.designNames[arc], -float(instance.comCapacity[arc, k]))]))
        self.costs:Dict[str, float] = {}
        for arc in range(instance.arcCount):
            self.costs[self.designNames[arc]] = float(instance.fixedCost[arc])
            for k in range(comCount):
                self.costs[self.flowNames[arc][k]] = float(instance.varCost[arc, k])


def _expression(terms:Iterable[Tuple[str, float]], perLine:int=6) ->str:
    """a linear expression in LP syntax, wrapped"""
    parts = []
    for idx, (name, coef) in enumerate(terms):
        sign = '-' if coef < 0 else '+'
        if idx == 0:
            parts.append(f'{"- " if coef < 0 else ""}{formatReal(abs(coef))} {name}')
        else:
            parts.append(f'{sign} {formatReal(abs(coef))} {name}')
    if not parts:
        return '0'
    lines = [' '.join(parts[x:x + perLine]) for x in range(0, len(parts), perLine)]
    return '\n   '.join(lines)


def writeLp(instance:DetInstance) ->str:
    """the model in CPLEX LP format"""
    model = _Model(instance)
    result = [f'\\ network design: {instance.nodeCount} nodes, {instance.arcCount} arcs, '
              f'{instance.comCount} commodities',
              'Minimize', f' {model.objective}: {_expression(model.costs.items())}',
              'Subject To']
    senses = {'E': '=', 'L': '<='}
    for name, sense, rhs, terms in model.rows:
        result.append(f' {name}: {_expression(terms)} {senses[sense]} {formatReal(rhs)}')
    result.append('Bounds')
    result.extend(f' 0 <= {x} <= 1' for x in model.designNames)
    result.append('Binaries')
    result.extend(f' {x}' for x in model.designNames)
    result.append('End')
    return '\n'.join(result) + '\n'


def _mpsLine(*fields:str) ->str:
    """fields start in columns 2, 5, 15, 25, 40 and 50. Longer names push the rest right"""
    starts = (1, 4, 14, 24, 39, 49)
    line = ''
    for start, text in zip(starts, fields):
        if not text:
            continue
        line = line.ljust(start) if len(line) < start else line + ' '
        line += text
    return line


def writeMps(instance:DetInstance) ->str:
    """the model in fixed MPS format. Design variables are binary"""
    model = _Model(instance)
    result = ['NAME          mcfndp', 'ROWS', _mpsLine('N', model.objective)]
    result.extend(_mpsLine(sense, name) for name, sense, _, _ in model.rows)
    entries:Dict[str, List[Tuple[str, float]]] = {x: [] for x in model.costs}
    for name, cost in model.costs.items():
        if cost:
            entries[name].append((model.objective, cost))
    for rowName, _, _, terms in model.rows:
        for column, coef in terms:
            entries[column].append((rowName, coef))
    result.append('COLUMNS')
    result.append(_mpsLine('', 'MARKER', "'MARKER'", '', "'INTORG'"))
    for name in model.designNames:
        result.extend(_mpsLine('', name, row, formatReal(coef)) for row, coef in entries[name])
    result.append(_mpsLine('', 'MARKER', "'MARKER'", '', "'INTEND'"))
    for names in model.flowNames:
        for name in names:
            if not entries[name]:
                entries[name].append((model.objective, 0.0))
            result.extend(_mpsLine('', name, row, formatReal(coef)) for row, coef in entries[name])
    result.append('RHS')
    result.extend(_mpsLine('', 'RHS', name, formatReal(rhs)) for name, _, rhs, _ in model.rows if rhs)
    result.append('BOUNDS')
    result.extend(_mpsLine('UP', 'BND', name, '1') for name in model.designNames)
    result.append('ENDATA')
    return '\n'.join(result) + '\n'


INPUT_FORMATS:Dict[str, Callable[[str, str], DetInstance]] = {'S': readStd}
OUTPUT_FORMATS:Dict[str, Tuple[str, Callable[[DetInstance], str]]] = {
    'std': ('.std', writeStd), 'lp': ('.lp', writeLp), 'mps': ('.mps', writeMps)}


def readTextFile(fileName:str) ->str:
    """the whole file. OSError is passed on"""
    with open(fileName, encoding='utf-8', newline=None) as inFile:
        return inFile.read()


def writeTextFile(fileName:str, text:str) ->None:
    """with LF line endings on every platform"""
    with open(fileName, 'w', encoding='utf-8', newline='\n') as outFile:
        outFile.write(text)
