# -*- coding: utf-8 -*-

"""
Copyright (C) 2008-2016 Wolfgang Rohdewald <wolfgang@rohdewald.de>
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

Every option of detgen and stogen is declared once as a Parameter.
Values come from three sources with increasing precedence: the declared
default, the +F configuration files in the given order, the command line.

A configuration file holds one `key value` pair per line, keys are flag
names without the leading dash, # starts a comment.
"""

import argparse
import math
from typing import Dict, Optional, Union, List, Iterable, Any, Tuple, Sequence

from log import logDebug
from common import Debug, ConfigurationError, ReprMixin, Internal
from rand import DEFAULT_SEED, DEFAULT_STREAM, U64

Value = Union[int, float, str, List[str]]

DEFAULT = 'DEFAULT'
CLI = 'CLI'


def fileSource(name:str) ->str:
    """provenance of a value read from a configuration file"""
    return f'FILE({name})'


class Parameter:

    """helper class for defining configuration parameters"""

    metavar = 'VALUE'

    def __init__(self, group:str, name:str, default:Value, helpText:str='',
                 aliases:Sequence[str]=()) ->None:
        """configuration group, parameter name, default value"""
        self.group = group
        self.name = name
        self.default = default
        self.helpText = helpText
        self.aliases = tuple(aliases)

    def parse(self, text:str) ->Value:
        """convert and check text. Raise ConfigurationError"""
        raise NotImplementedError

    def addArgument(self, parser:'argparse._ActionsContainer') ->None:
        """declare this parameter to argparse"""
        parser.add_argument(
            '-' + self.name, *('-' + x for x in self.aliases), dest=self.name,
            default=argparse.SUPPRESS, metavar=self.metavar,
            help=f'{self.helpText} (default: {self.showDefault()})')

    def showDefault(self) ->str:
        """the default as written in a configuration file"""
        return str(self.default)

    def _fail(self, text:str, why:str) ->ConfigurationError:
        """the error for a bad value"""
        return ConfigurationError(f'-{self.name}: {text!r} {why}')


class StringParameter(Parameter):

    """helper class for defining string parameters"""

    metavar = 'FILE'

    def __init__(self, group:str, name:str, default:Optional[str]=None, helpText:str='') ->None:
        if default is None:
            default = ''
        super().__init__(group, name, default, helpText)

    def parse(self, text:str) ->str:
        return str(text).strip()

    def showDefault(self) ->str:
        return self.default or 'none'  # type:ignore[return-value]


class BoolParameter(Parameter):

    """0 or 1. A switch takes no value on the command line"""

    metavar = '0|1'

    def __init__(self, group:str, name:str, default:Optional[bool]=None,
                 helpText:str='', switch:bool=False) ->None:
        if default is None:
            default = False
        super().__init__(group, name, int(default), helpText)
        self.switch = switch

    def parse(self, text:str) ->int:
        value = str(text).strip()
        if value not in ('0', '1'):
            raise self._fail(text, 'must be 0 or 1')
        return int(value)

    def addArgument(self, parser:'argparse._ActionsContainer') ->None:
        if not self.switch:
            super().addArgument(parser)
            return
        parser.add_argument('-' + self.name, dest=self.name, action='store_const', const='1',
                            default=argparse.SUPPRESS, help=self.helpText)


class IntParameter(Parameter):

    """helper class for defining integer parameters"""

    metavar = 'INT'

    def __init__(self, group:str, name:str, default:Optional[int]=None,
                 minValue:Optional[int]=None, maxValue:Optional[int]=None, helpText:str='') ->None:
        if default is None:
            default = 0
        super().__init__(group, name, default, helpText)
        self.minValue = minValue
        self.maxValue = maxValue

    def parse(self, text:str) ->int:
        try:
            value = int(str(text).strip())
        except ValueError as exc:
            raise self._fail(text, 'is not an integer') from exc
        if self.minValue is not None and value < self.minValue:
            raise self._fail(text, f'must be at least {self.minValue}')
        if self.maxValue is not None and value > self.maxValue:
            raise self._fail(text, f'must be at most {self.maxValue}')
        return value


class FloatParameter(Parameter):

    """a real value with optional bounds. An open bound is excluded"""

    metavar = 'REAL'

    def __init__(self, group:str, name:str, default:float=0.0,
                 minValue:Optional[float]=None, maxValue:Optional[float]=None, helpText:str='',
                 aliases:Sequence[str]=(), minOpen:bool=False, maxOpen:bool=False) ->None:
        # pylint: disable=too-many-arguments
        super().__init__(group, name, float(default), helpText, aliases)
        self.minValue = minValue
        self.maxValue = maxValue
        self.minOpen = minOpen
        self.maxOpen = maxOpen

    def parse(self, text:str) ->float:
        try:
            value = float(str(text).strip())
        except ValueError as exc:
            raise self._fail(text, 'is not a number') from exc
        if not math.isfinite(value):
            raise self._fail(text, 'is not finite')
        if self.minValue is not None:
            if value < self.minValue or (self.minOpen and value == self.minValue):
                raise self._fail(text, f"must be {'above' if self.minOpen else 'at least'} {self.minValue}")
        if self.maxValue is not None:
            if value > self.maxValue or (self.maxOpen and value == self.maxValue):
                raise self._fail(text, f"must be {'below' if self.maxOpen else 'at most'} {self.maxValue}")
        return value


class ChoiceParameter(Parameter):

    """one out of a fixed set of words"""

    def __init__(self, group:str, name:str, default:str, choices:Iterable[str], helpText:str='') ->None:
        super().__init__(group, name, default, helpText)
        self.choices = tuple(choices)
        self.metavar = '|'.join(self.choices)

    def parse(self, text:str) ->str:
        value = str(text).strip()
        if value not in self.choices:
            raise self._fail(text, f"must be one of {', '.join(self.choices)}")
        return value


class ListParameter(ChoiceParameter):

    """repeatable on the command line. In a file, values are separated by blanks"""

    def __init__(self, group:str, name:str, default:List[str], choices:Iterable[str], helpText:str='') ->None:
        super().__init__(group, name, '', choices, helpText)
        self.default = list(default)

    def parse(self, text:Union[str, List[str]]) ->List[str]:  # type:ignore[override]
        words = text.split() if isinstance(text, str) else [y for x in text for y in str(x).split()]
        return [super(ListParameter, self).parse(x) for x in words]

    def addArgument(self, parser:'argparse._ActionsContainer') ->None:
        parser.add_argument('-' + self.name, dest=self.name, action='append',
                            default=argparse.SUPPRESS, metavar=self.metavar,
                            help=f'{self.helpText}, repeatable (default: {self.showDefault()})')

    def showDefault(self) ->str:
        return ' '.join(self.default)  # type:ignore[arg-type]


class CliConfig(ReprMixin):

    """the effective configuration: value and provenance of every key"""

    def __init__(self, parameters:Iterable[Parameter]) ->None:
        self.parameters:Dict[str, Parameter] = {}
        self.values:Dict[str, Value] = {}
        self.provenance:Dict[str, str] = {}
        for par in parameters:
            self.parameters[par.name] = par
            self.set(par.name, par.default, DEFAULT)

    def set(self, name:str, value:Value, source:str) ->None:
        """later calls override earlier ones"""
        if name not in self.parameters:
            raise ConfigurationError(f'unknown option {name}')
        self.values[name] = value
        self.provenance[name] = source

    def __getitem__(self, name:str) ->Any:
        return self.values[name]

    def __contains__(self, name:object) ->bool:
        return name in self.values

    def source(self, name:str) ->str:
        """where the value of name came from"""
        return self.provenance[name]

    def echo(self) ->List[str]:
        """the effective configuration, one line per key, as a configuration file"""
        result = []
        for name, value in self.values.items():
            shown = ' '.join(value) if isinstance(value, list) else value
            result.append(f'{name} {shown}  # {self.provenance[name]}')
        return result

    def __str__(self) ->str:
        return ' '.join(f'{x}={y}' for x, y in self.values.items())


def _keyMap(parameters:Iterable[Parameter]) ->Dict[str, Parameter]:
    """names and aliases to parameters"""
    result:Dict[str, Parameter] = {}
    for par in parameters:
        result[par.name] = par
        for alias in par.aliases:
            result[alias] = par
    return result


def readConfigFile(fileName:str) ->List[Tuple[int, str, str]]:
    """(line number, key, value text) for every assignment in the file"""
    result = []
    try:
        with open(fileName, encoding='utf-8') as configFile:
            lines = configFile.read().splitlines()
    except OSError as exc:
        raise ConfigurationError(f'+F {fileName}: {exc.strerror}') from exc
    for lineNr, line in enumerate(lines, start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        key = parts[0].lstrip('-')
        result.append((lineNr, key, parts[1] if len(parts) > 1 else ''))
    return result


def resolveConfig(parameters:Sequence[Parameter], files:Iterable[str],
    cliValues:Dict[str, Any]) ->CliConfig:
    """defaults, then every file in order, then the command line"""
    result = CliConfig(parameters)
    keys = _keyMap(parameters)
    for fileName in files:
        for lineNr, key, text in readConfigFile(fileName):
            if key not in keys:
                raise ConfigurationError(f'{fileName}:{lineNr}: unknown option {key}')
            par = keys[key]
            try:
                result.set(par.name, par.parse(text), fileSource(fileName))
            except ConfigurationError as exc:
                raise ConfigurationError(f'{fileName}:{lineNr}: {exc}') from exc
    for name, text in cliValues.items():
        if name not in keys:
            raise ConfigurationError(f'unknown option {name}')
        par = keys[name]
        result.set(par.name, par.parse(text), CLI)
    if Debug.config:
        for name in result.values:
            logDebug(f'{name}={result[name]} from {result.source(name)}')
    return result


def buildParser(prog:str, description:str, parameters:Iterable[Parameter]) ->argparse.ArgumentParser:
    """single dash long flags, +F for configuration files, no abbreviations"""
    parser = argparse.ArgumentParser(
        prog=prog, description=description, prefix_chars='-+',
        allow_abbrev=False, add_help=False)
    parser.add_argument('-help', '-h', action='help', help='show this help message and exit')
    parser.add_argument('+F', dest='configFiles', action='append', default=[], metavar='FILE',
                        help='read options from FILE, repeatable. Later files override earlier ones')
    groups:Dict[str, Any] = {}
    for par in parameters:
        if par.group not in groups:
            groups[par.group] = parser.add_argument_group(par.group)
        par.addArgument(groups[par.group])
    return parser


def parseCommandLine(parser:argparse.ArgumentParser, parameters:Sequence[Parameter],
    argv:Sequence[str]) ->CliConfig:
    """argparse raises SystemExit for -help and for unknown flags"""
    namespace = vars(parser.parse_args(list(argv)))
    files = namespace.pop('configFiles')
    return resolveConfig(parameters, files, namespace)


def commonParameters() ->List[Parameter]:
    """shared by detgen and stogen"""
    return [
        IntParameter('Basic', 'seed', DEFAULT_SEED, 0, U64, 'seed of the random generator'),
        IntParameter('Basic', 'stream', DEFAULT_STREAM, 0, U64, 'stream of the random generator'),
        IntParameter('Basic', 'V', 1, 0, None, 'verbosity: 0 warnings only, 1 info, 2 debug, 3 trace'),
        StringParameter('Basic', 'debug', '', Debug.help())]


def detgenParameters() ->List[Parameter]:
    """all options of detgen"""
    core = 'Core structure'
    arcs = 'Tuning random arcs'
    design = 'Tuning design and flow problems'
    return commonParameters() + [
        StringParameter('Basic', 'o', 'instance', 'base name of the output files'),
        ListParameter('Basic', 'fmt', ['std'], ('std', 'lp', 'mps'), 'output format'),
        StringParameter('Basic', 'graphIn', '', 'read the graph from this file, needs -topo file'),
        StringParameter('Basic', 'graphOut', '', 'write the graph to this file'),
        ChoiceParameter(core, 'topo', 'random', ('random', 'grid', 'circular', 'file'), 'topology'),
        IntParameter(core, 'gridX', 3, 1, None, 'grid width'),
        IntParameter(core, 'gridY', 3, 1, None, 'grid height'),
        IntParameter(core, 'nbNodes', 10, 1, None, 'number of nodes, not for grids'),
        IntParameter(core, 'nbCom', 25, 1, None, 'number of commodities'),
        IntParameter(core, 'nbArcs', 60, 0, None, 'number of extra random arcs'),
        BoolParameter(core, 'noParallel', True, 'preclude parallel arcs'),
        ChoiceParameter(core, 'odMode', 'single', ('single', 'shared', 'random'),
                        'origins and destinations of commodities'),
        IntParameter(core, 'srcMin', 1, 1, None, 'minimum number of sources per commodity'),
        IntParameter(core, 'srcMax', 1, 1, None, 'maximum number of sources per commodity'),
        IntParameter(core, 'snkMin', 1, 1, None, 'minimum number of sinks per commodity'),
        IntParameter(core, 'snkMax', 1, 1, None, 'maximum number of sinks per commodity'),
        FloatParameter(core, 'demMin', 5.0, 0.0, None, 'minimum demand'),
        FloatParameter(core, 'demMax', 50.0, 0.0, None, 'maximum demand'),
        FloatParameter(core, 'fixMin', 50.0, 0.0, None, 'minimum fixed cost'),
        FloatParameter(core, 'fixMax', 150.0, 0.0, None, 'maximum fixed cost'),
        FloatParameter(core, 'varMin', 5.0, 0.0, None, 'minimum variable cost'),
        FloatParameter(core, 'varMax', 15.0, 0.0, None, 'maximum variable cost'),
        FloatParameter(core, 'capMin', 50.0, 0.0, None, 'minimum arc capacity'),
        FloatParameter(core, 'capMax', 150.0, 0.0, None, 'maximum arc capacity'),
        FloatParameter(core, 'bndMin', 10.0, 0.0, None, 'minimum commodity capacity'),
        FloatParameter(core, 'bndMax', 50.0, 0.0, None, 'maximum commodity capacity'),
        BoolParameter(core, 'capInt', False, 'integer arc capacities'),
        BoolParameter(core, 'bndInt', False, 'integer commodity capacities'),
        BoolParameter(core, 'useBnd', False, 'generate commodity capacities'),
        FloatParameter(arcs, 'rZeroFix', 0.0, 0.0, 1.0, 'ratio of arcs with zero fixed cost'),
        FloatParameter(arcs, 'rFullCap', 0.0, 0.0, 1.0, 'ratio of arcs with capacity = total volume'),
        FloatParameter(arcs, 'rZeroBnd', 0.0, 0.0, 1.0, 'ratio of arcs with zero commodity capacities'),
        FloatParameter(arcs, 'rMaxBnd', 0.0, 0.0, 1.0,
                       'ratio of arcs with commodity capacities = arc capacity'),
        BoolParameter(arcs, 'tuneExtrasOnly', False, 'tune only the extra random arcs'),
        FloatParameter(design, 'adjFix', 1.0, 1.0, None, 'multiply all fixed costs'),
        FloatParameter(design, 'adjCap', 1.0, 0.0, 1.0, 'multiply all arc capacities', minOpen=True)]


def correlationParameters() ->List[Parameter]:
    """-XDD, -XDA and so on. -XAD is the same as -XDA"""
    codes = 'DABFC'
    result:List[Parameter] = []
    for idx, first in enumerate(codes):
        for second in codes[idx:]:
            aliases = (f'X{second}{first}', ) if first != second else ()
            result.append(FloatParameter(
                'Correlations', f'X{first}{second}', 0.0, -1.0, 1.0,
                f'correlation between families {first} and {second}',
                aliases=aliases, minOpen=True, maxOpen=True))
    return result


def stogenParameters() ->List[Parameter]:
    """all options of stogen"""
    core = 'Core'
    hkw = 'Scenario algorithm'
    return commonParameters() + [
        StringParameter(core, 'I', '', 'input instance'),
        ChoiceParameter(core, 'F', 'S', ('S', ), 'input format: S for STD'),
        StringParameter(core, 'O', 'instance.stoch', 'output file'),
        IntParameter(core, 'S', 3, 1, 31,
                     'randomized families: 1 demand, 2 arc capacity, 4 commodity capacity, '
                     '8 fixed cost, 16 variable cost'),
        BoolParameter(core, 'G', False, 'generate targets, else read them from -MO and -CO', switch=True),
        ChoiceParameter(core, 'T', 'U', ('U', 'T'), 'distribution: U uniform, T triangular'),
        FloatParameter(core, 'A', 0.25, 0.0, 1.0, 'alpha: lower end is D - alpha*D', maxOpen=True),
        FloatParameter(core, 'B', 0.25, 0.0, None, 'beta: upper end is D + beta*D'),
        IntParameter(core, 'N', 1000, 1, None, 'number of scenarios'),
        StringParameter(core, 'P', '', 'probabilities file, else equiprobable'),
        StringParameter(core, 'MO', '', 'moments file, written with -G, read otherwise'),
        StringParameter(core, 'CO', '', 'correlation file, written with -G, read otherwise'),
        IntParameter(core, 'W', 1, 1, None, 'worker threads for the feasibility check'),
        FloatParameter(hkw, 'EM', 1e-3, 0.0, None, 'maximum moment error', minOpen=True),
        FloatParameter(hkw, 'EC', 1e-3, 0.0, None, 'maximum correlation error', minOpen=True),
        IntParameter(hkw, 'MT', 10, 1, None, 'maximum number of trials'),
        IntParameter(hkw, 'MI', 100, 1, None, 'maximum number of iterations per trial'),
        StringParameter(hkw, 'HO', '', 'write the scenario matrix to this file'),
        StringParameter(hkw, 'HI', '', 'start from the scenario matrix in this file'),
        ] + correlationParameters()


def startProgram(parser:argparse.ArgumentParser, parameters:Sequence[Parameter],
    argv:Sequence[str]) ->CliConfig:
    """parse, apply -debug and -V, echo the effective configuration"""
    config = parseCommandLine(parser, parameters, argv)
    error = Debug.setOptions(config['debug'])
    if error:
        raise ConfigurationError(error)
    Internal.setVerbosity(config['V'])
    if config['V'] >= 1:
        for line in config.echo():
            print(line)
    return config
