#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

detgen: generate one deterministic network design instance.

    detgen.py -topo grid -gridX 3 -gridY 3 -nbCom 2 -o small -fmt std -fmt mps

Exit codes: 0 success, 1 generation or file error, 2 usage error.
"""

import sys
from typing import Sequence, Optional

from common import ConfigurationError
from config import buildParser, startProgram, detgenParameters, CliConfig
from fileformat import OUTPUT_FORMATS, ParseError, readGraph, writeGraph, readTextFile, writeTextFile
from generator import GenConfig, Topology, generate, EmptyGraph, Saturation
from log import logError
from model import Graph, DetInstance
from rand import PcgRandom


def summary(instance:DetInstance) ->str:
    """the cardinality line for standard output"""
    return (f'{instance.nodeCount} nodes, {instance.arcCount} arcs, {instance.comCount} commodities'
            f'{", with commodity capacities" if instance.useComCapacity else ""}')


def run(config:CliConfig) ->DetInstance:
    """generate and write everything config asks for"""
    genConfig = GenConfig.fromConfig(config)
    graphIn:Optional[Graph] = None
    if config['graphIn']:
        if genConfig.topology != Topology.FILE:
            raise ConfigurationError('-graphIn needs -topo file')
        graphIn = readGraph(readTextFile(config['graphIn']), config['graphIn'])
    instance = generate(genConfig, PcgRandom(config['seed'], config['stream']), graphIn)
    if config['graphOut']:
        writeTextFile(config['graphOut'], writeGraph(instance.graph))
    for fmt in dict.fromkeys(config['fmt']):
        suffix, writer = OUTPUT_FORMATS[fmt]
        writeTextFile(config['o'] + suffix, writer(instance))
    return instance


def main(argv:Sequence[str]) ->int:
    """the exit code"""
    parameters = detgenParameters()
    parser = buildParser('detgen', 'generate a deterministic network design instance', parameters)
    try:
        config = startProgram(parser, parameters, argv)
        instance = run(config)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigurationError as exc:
        parser.print_usage(sys.stderr)
        logError(str(exc))
        return 2
    except (EmptyGraph, Saturation, ParseError, OSError, ValueError) as exc:
        logError(exc)
        return 1
    print(summary(instance))
    return 0


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
