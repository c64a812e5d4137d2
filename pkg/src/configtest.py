#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import contextlib
import io
import os
import tempfile
import unittest
from typing import List, Sequence

import detgen
from common import ConfigurationError, Debug
from config import (CliConfig, buildParser, parseCommandLine, startProgram,
                    detgenParameters, stogenParameters, DEFAULT, CLI, fileSource)
from rand import PcgRandom


class ConfigFiles(unittest.TestCase):

    """defaults, then files, then the command line"""

    def setUp(self) ->None:
        self.tmpDir = tempfile.TemporaryDirectory()  # pylint: disable=consider-using-with

    def tearDown(self) ->None:
        self.tmpDir.cleanup()

    def configFile(self, name:str, lines:List[str]) ->str:
        """write lines into a file in the temporary directory"""
        result = os.path.join(self.tmpDir.name, name)
        with open(result, 'w', encoding='utf-8') as outFile:
            outFile.write('\n'.join(lines) + '\n')
        return result

    @staticmethod
    def detgen(argv:Sequence[str]) ->CliConfig:
        """resolve detgen options"""
        parameters = detgenParameters()
        return parseCommandLine(buildParser('detgen', '', parameters), parameters, argv)

    @staticmethod
    def stogen(argv:Sequence[str]) ->CliConfig:
        """resolve stogen options"""
        parameters = stogenParameters()
        return parseCommandLine(buildParser('stogen', '', parameters), parameters, argv)

    def testPrecedence(self) ->None:
        """the command line wins over the file, the file over the default"""
        fileName = self.configFile('p.txt', ['# options', 'seed 1', 'stream 7  # trailing comment', ''])
        config = self.detgen(['+F', fileName, '-seed', '4567'])
        self.assertEqual(config['seed'], 4567)
        self.assertEqual(config.source('seed'), CLI)
        self.assertEqual(config['stream'], 7)
        self.assertEqual(config.source('stream'), fileSource(fileName))
        self.assertEqual(config['nbCom'], 25)
        self.assertEqual(config.source('nbCom'), DEFAULT)

    def testPrecedenceProperty(self) ->None:
        """random key sets, the file before or after the flags: CLI beats the file beats the default"""
        keys = ['seed', 'stream', 'gridX', 'gridY', 'nbNodes', 'nbCom', 'nbArcs',
                'demMin', 'demMax', 'fixMin', 'fixMax']
        defaults = self.detgen([])
        rnd = PcgRandom(41, 42)
        for trial in range(40):
            fileValues = {x: rnd.uniformInt(1, 99) for x in keys if rnd.uniformInt(0, 1)}
            cliValues = {x: rnd.uniformInt(1, 99) for x in keys if rnd.uniformInt(0, 1)}
            fileName = self.configFile(f'random{trial}.txt', [f'{x} {y}' for x, y in fileValues.items()])
            flags:List[str] = []
            for key, value in cliValues.items():
                flags.extend([f'-{key}', str(value)])
            argv = ['+F', fileName] + flags if rnd.uniformInt(0, 1) else flags + ['+F', fileName]
            config = self.detgen(argv)
            for key in keys:
                if key in cliValues:
                    expected, source = cliValues[key], CLI
                elif key in fileValues:
                    expected, source = fileValues[key], fileSource(fileName)
                else:
                    expected, source = defaults[key], DEFAULT
                self.assertEqual(config[key], expected, f'{key} in {argv}')
                self.assertEqual(config.source(key), source, f'{key} in {argv}')

    def testLaterFileWins(self) ->None:
        """files are read in order"""
        first = self.configFile('a.txt', ['nbCom 5', 'nbNodes 8'])
        second = self.configFile('b.txt', ['nbCom 6'])
        config = self.detgen(['+F', first, '+F', second])
        self.assertEqual(config['nbCom'], 6)
        self.assertEqual(config['nbNodes'], 8)
        self.assertEqual(config.source('nbCom'), fileSource(second))

    def testUnknownKey(self) ->None:
        """with file name and line number"""
        fileName = self.configFile('bad.txt', ['seed 3', 'colour blue'])
        with self.assertRaises(ConfigurationError) as context:
            self.detgen(['+F', fileName])
        self.assertIn(f'{fileName}:2:', str(context.exception))
        self.assertIn('colour', str(context.exception))

    def testMissingFile(self) ->None:
        """an unreadable file is a usage error"""
        self.assertRaises(ConfigurationError, self.detgen,
                          ['+F', os.path.join(self.tmpDir.name, 'missing.txt')])

    def testBadValues(self) ->None:
        """ranges and types are checked"""
        for argv in (['-nbCom', '0'], ['-nbCom', 'many'], ['-adjCap', '0'], ['-adjFix', '0.5'],
                     ['-topo', 'torus'], ['-fmt', 'xml'], ['-capInt', '2']):
            self.assertRaises(ConfigurationError, self.detgen, argv)
        for argv in (['-XDD', '1'], ['-A', '1'], ['-S', '32'], ['-EM', '0']):
            self.assertRaises(ConfigurationError, self.stogen, argv)

    def testLists(self) ->None:
        """-fmt is repeatable, blank separated in files"""
        self.assertEqual(self.detgen([])['fmt'], ['std'])
        self.assertEqual(self.detgen(['-fmt', 'lp', '-fmt', 'mps'])['fmt'], ['lp', 'mps'])
        fileName = self.configFile('f.txt', ['fmt std lp'])
        self.assertEqual(self.detgen(['+F', fileName])['fmt'], ['std', 'lp'])

    def testAlias(self) ->None:
        """-XAD sets XDA"""
        config = self.stogen(['-XAD', '-0.2'])
        self.assertEqual(config['XDA'], -0.2)
        self.assertNotIn('XAD', config)
        fileName = self.configFile('x.txt', ['XAD 0.3'])
        self.assertEqual(self.stogen(['+F', fileName])['XDA'], 0.3)

    def testSwitch(self) ->None:
        """-G takes no value"""
        self.assertEqual(self.stogen([])['G'], 0)
        self.assertEqual(self.stogen(['-G', '-N', '50'])['G'], 1)

    def testEcho(self) ->None:
        """one line per key with its source"""
        lines = self.detgen(['-nbCom', '3']).echo()
        self.assertIn('nbCom 3  # CLI', lines)
        self.assertIn('fmt std  # DEFAULT', lines)


class Startup(unittest.TestCase):

    """startProgram and the exit codes of detgen"""

    def tearDown(self) ->None:
        Debug.reset()

    @staticmethod
    def quietly(argv:Sequence[str]) ->int:
        """detgen.main with standard output and error captured"""
        with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
            return detgen.main(argv)

    def testDebugOptions(self) ->None:
        """-debug is checked"""
        parameters = detgenParameters()
        parser = buildParser('detgen', '', parameters)
        with contextlib.redirect_stdout(io.StringIO()):
            startProgram(parser, parameters, ['-debug', 'simplex,callers:3', '-V', '0'])
        self.assertTrue(Debug.simplex)
        self.assertEqual(Debug.callers, '3')
        self.assertRaises(ConfigurationError, startProgram, parser, parameters, ['-debug', 'nonsense'])

    def testHelp(self) ->None:
        """exits with 0"""
        output = io.StringIO()
        with contextlib.redirect_stdout(output):
            self.assertEqual(detgen.main(['-help']), 0)
        self.assertIn('-nbCom', output.getvalue())

    def testUsageErrors(self) ->None:
        """exit code 2"""
        self.assertEqual(self.quietly(['-bogus', '1']), 2)
        self.assertEqual(self.quietly(['-nbCom', '0']), 2)
        self.assertEqual(self.quietly(['-graphIn', 'some.graph']), 2)

    def testGenerationError(self) ->None:
        """a random topology without extra arcs is empty"""
        self.assertEqual(self.quietly(['-nbArcs', '0', '-V', '0']), 1)


if __name__ == '__main__':
    unittest.main()
