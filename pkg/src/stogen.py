#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

stogen: turn a deterministic instance into a two stage stochastic one.

    stogen.py -I instB.std -F S -S 3 -G -T U -A 0.25 -B 0.3 -XDD 0.5 -XDA -0.3 -XAA 0.7

Exit codes: 0 success, 1 generation or file error, 2 usage error.
"""

import sys
from typing import Sequence, Dict, Tuple, Optional, TYPE_CHECKING

from common import ConfigurationError
from config import buildParser, startProgram, stogenParameters, CliConfig
from feasibility import filterScenarios, FeasibilityReport, EmptyResult
from fileformat import (INPUT_FORMATS, ParseError, readTextFile, writeTextFile,
                        readMoments, writeMoments, readCorr, writeCorr, readProbs,
                        readHkwMatrix, writeHkwMatrix, writeStochastic)
from hkw import HkwOptions, generateScenarios, logNegativeValues, RankError, ConvergenceFailure
from log import logError, logInfo
from model import DetInstance, RandomizationSelection, Family, CODE_FAMILIES, ScenarioMatrix, flatten
from moments import (Distribution, MomentTargets, CorrelationMatrix, assembleTargets,
                     assembleCorrelation, CorrelationError, ZeroBaseValue, DegenerateDistribution)
from rand import PcgRandom
from simplex import SolverStall

if TYPE_CHECKING:
    import numpy as np
    import numpy.typing as npt


def blockValues(config:CliConfig) ->Dict[Tuple[Family, Family], float]:
    """the -X<p><q> values by pair of families"""
    result = {}
    for name in config.values:
        if len(name) == 3 and name[0] == 'X' and name[1] in CODE_FAMILIES and name[2] in CODE_FAMILIES:
            result[(CODE_FAMILIES[name[1]], CODE_FAMILIES[name[2]])] = float(config[name])
    return result


def loadInstance(config:CliConfig) ->DetInstance:
    """the base instance given by -I and -F"""
    if not config['I']:
        raise ConfigurationError('-I: an input instance is needed')
    reader = INPUT_FORMATS[config['F']]
    return reader(readTextFile(config['I']), config['I'])


def targetsFor(config:CliConfig, base:DetInstance,
    selection:RandomizationSelection) ->Tuple[MomentTargets, CorrelationMatrix]:
    """generate them with -G, else read them from -MO and -CO"""
    if config['G']:
        targets = assembleTargets(base, selection, Distribution(config['T']), config['A'], config['B'])
        corr = assembleCorrelation(selection, blockValues(config))
        if config['MO']:
            writeTextFile(config['MO'], writeMoments(targets))
        if config['CO']:
            writeTextFile(config['CO'], writeCorr(corr))
        return targets, corr
    if not config['MO'] or not config['CO']:
        raise ConfigurationError('without -G, -MO and -CO must name the target files')
    targets = readMoments(readTextFile(config['MO']), config['MO'])
    corr = readCorr(readTextFile(config['CO']), config['CO'])
    for name, count in (('-MO', targets.variableCount), ('-CO', corr.variableCount)):
        if count != selection.variableCount:
            raise ConfigurationError(
                f'{name} has {count} variables, -S {config["S"]} selects {selection.variableCount}')
    return targets, corr


def hkwOptions(config:CliConfig) ->HkwOptions:
    """the algorithm settings, with the start matrix of -HI"""
    start:Optional[ScenarioMatrix] = None
    if config['HI']:
        start = readHkwMatrix(readTextFile(config['HI']), config['HI'])
    return HkwOptions(config['N'], momentTol=config['EM'], corrTol=config['EC'],
                      maxIterations=config['MI'], maxTrials=config['MT'],
                      verbosity=config['V'], startMatrix=start)


def probabilitiesFor(config:CliConfig, scenarioCount:int) ->Optional['npt.NDArray[np.float64]']:
    """from -P, None means equiprobable"""
    if not config['P']:
        return None
    result = readProbs(readTextFile(config['P']), config['P'])
    if len(result) != scenarioCount:
        raise ConfigurationError(f'-P has {len(result)} probabilities for {scenarioCount} scenarios')
    return result


def run(config:CliConfig) ->FeasibilityReport:
    """the whole pipeline, returns the screening report"""
    base = loadInstance(config)
    selection = RandomizationSelection.forInstance(config['S'], base)
    flatten(base, selection)
    targets, corr = targetsFor(config, base, selection)
    opts = hkwOptions(config)
    scenarioCount = opts.scenarioCount if opts.startMatrix is None else opts.startMatrix.scenarioCount
    probs = probabilitiesFor(config, scenarioCount)
    logInfo(f'{selection}, {scenarioCount} scenarios')
    scenarios = generateScenarios(targets, corr, opts, probs, PcgRandom(config['seed'], config['stream']))
    if config['HO']:
        writeTextFile(config['HO'], writeHkwMatrix(scenarios))
    logNegativeValues(scenarios, selection)
    retained, report = filterScenarios(base, selection, scenarios, config['W'])
    numbers = [x.scenario + 1 for x in report.perScenario if x.feasible]
    writeTextFile(config['O'], writeStochastic(base, selection, retained, numbers))
    return report


def main(argv:Sequence[str]) ->int:
    """the exit code"""
    parameters = stogenParameters()
    parser = buildParser('stogen', 'generate a two stage stochastic network design instance', parameters)
    try:
        config = startProgram(parser, parameters, argv)
        report = run(config)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigurationError as exc:
        parser.print_usage(sys.stderr)
        logError(str(exc))
        return 2
    except (RankError, CorrelationError, ZeroBaseValue, DegenerateDistribution, ConvergenceFailure,
            EmptyResult, SolverStall, ParseError, OSError, ValueError) as exc:
        logError(exc)
        return 1
    print(report.summary())
    return 0


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
