#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

Both programs end to end, in a temporary directory.
"""

import contextlib
import datetime
import io
import os
import tempfile
import unittest
from typing import List, Sequence

import numpy as np

import detgen
import stogen
from fileformat import readStd, readStochastic, readMoments, readCorr, readTextFile
from model import Family, RandomizationSelection, flatten
from util import elapsedSince

BASE_ARGS = ['-topo', 'circular', '-nbNodes', '10', '-nbArcs', '40', '-nbCom', '25',
             '-demMin', '5', '-demMax', '50', '-capMin', '2500', '-capMax', '3000', '-V', '0']
STOCH_ARGS = ['-S', '3', '-G', '-T', 'U', '-A', '0.25', '-B', '0.25',
              '-XDD', '0.5', '-XAA', '0.7', '-XDA', '-0.2', '-V', '0']


class Programs(unittest.TestCase):

    """detgen and stogen as called from the shell"""

    def setUp(self) ->None:
        self.tmpDir = tempfile.TemporaryDirectory()  # pylint: disable=consider-using-with

    def tearDown(self) ->None:
        self.tmpDir.cleanup()

    def path(self, name:str) ->str:
        """in the temporary directory"""
        return os.path.join(self.tmpDir.name, name)

    def call(self, program:str, argv:Sequence[str]) ->str:
        """run and return standard output. The exit code must be 0"""
        output = io.StringIO()
        with contextlib.redirect_stdout(output):
            code = {'detgen': detgen.main, 'stogen': stogen.main}[program](argv)
        self.assertEqual(code, 0, output.getvalue())
        return output.getvalue()

    def readBytes(self, name:str) ->bytes:
        """the raw file content"""
        with open(self.path(name), 'rb') as inFile:
            return inFile.read()

    def testGridHeader(self) ->None:
        """3x3 grid, 2 commodities, no commodity capacities"""
        output = self.call('detgen', ['-topo', 'grid', '-nbCom', '2', '-nbArcs', '0', '-V', '0',
                                      '-o', self.path('grid'), '-fmt', 'std', '-fmt', 'lp', '-fmt', 'mps'])
        self.assertIn('9 nodes, 24 arcs, 2 commodities', output)
        self.assertEqual(readTextFile(self.path('grid.std')).splitlines()[0], '9 24 2 0')
        for suffix in ('.lp', '.mps'):
            self.assertTrue(os.path.exists(self.path('grid' + suffix)))

    def testMomentMatching(self) ->None:
        """10 nodes, 60 arcs, 25 commodities, 200 scenarios: targets met, all scenarios feasible"""
        self.call('detgen', BASE_ARGS + ['-o', self.path('base')])
        base = readStd(readTextFile(self.path('base.std')))
        self.assertEqual((base.nodeCount, base.arcCount, base.comCount), (10, 60, 25))
        start = datetime.datetime.now()
        output = self.call('stogen', STOCH_ARGS + [
            '-I', self.path('base.std'), '-N', '200', '-O', self.path('out.stoch'),
            '-MO', self.path('targets.mom'), '-CO', self.path('targets.cor')])
        self.assertLess(elapsedSince(start), 30.0)
        self.assertIn('200 scenarios tested, 0 rejected', output)

        scenarios = readStochastic(readTextFile(self.path('out.stoch')))
        self.assertEqual([x[0] for x in scenarios], list(range(1, 201)))
        selection = RandomizationSelection.forInstance(Family.DEMAND | Family.ARC_CAPACITY, base)
        self.assertEqual(selection.variableCount, 85)
        matrix = np.array([flatten(x[2], selection) for x in scenarios]).T
        probs = np.array([x[1] for x in scenarios])
        targets = readMoments(readTextFile(self.path('targets.mom')))
        corr = readCorr(readTextFile(self.path('targets.cor')))

        mean = matrix @ probs
        centered = matrix - mean[:, np.newaxis]
        variance = centered ** 2 @ probs
        std = np.sqrt(variance)
        skew = centered ** 3 @ probs / std ** 3
        kurt = centered ** 4 @ probs / variance ** 2
        deviations: List[float] = []
        deviations.extend(np.abs(mean - targets.mean) / targets.stdDev)
        deviations.extend(np.abs(std / targets.stdDev - 1.0))
        deviations.extend(np.abs(skew - targets.skewness))
        deviations.extend(np.abs(kurt - targets.kurtosis))
        self.assertLessEqual(max(deviations), 1e-3)
        achieved = (centered * probs) @ centered.T / np.outer(std, std)
        upper = np.triu_indices(85, 1)
        self.assertLessEqual(float(np.max(np.abs(achieved - corr.values)[upper])), 1e-3)
        self.assertEqual(corr.values[0, 1], 0.5)
        self.assertEqual(corr.values[25, 26], 0.7)
        self.assertEqual(corr.values[0, 25], -0.2)

    def testThousandScenarios(self) ->None:
        """the same base instance with 1000 scenarios"""
        self.call('detgen', BASE_ARGS + ['-o', self.path('base')])
        start = datetime.datetime.now()
        output = self.call('stogen', STOCH_ARGS + [
            '-I', self.path('base.std'), '-N', '1000', '-O', self.path('out.stoch')])
        self.assertLess(elapsedSince(start), 30.0)
        self.assertIn('1000 scenarios tested, 0 rejected', output)
        self.assertEqual(len(readStochastic(readTextFile(self.path('out.stoch')))), 1000)

    def testDeterminism(self) ->None:
        """same seed and stream, same bytes. Another stream, other bytes"""
        for name, stream in (('a', '1234'), ('b', '1234'), ('c', '99')):
            self.call('detgen', ['-topo', 'grid', '-nbCom', '4', '-nbArcs', '3', '-V', '0', '-stream', stream,
                                 '-o', self.path(name)])
            self.call('stogen', ['-I', self.path(name + '.std'), '-S', '1', '-G', '-N', '100', '-V', '0',
                                 '-stream', stream, '-O', self.path(name + '.stoch')])
        for suffix in ('.std', '.stoch'):
            self.assertEqual(self.readBytes('a' + suffix), self.readBytes('b' + suffix))
            self.assertNotEqual(self.readBytes('a' + suffix), self.readBytes('c' + suffix))

    def testGenerationSpeed(self) ->None:
        """large deterministic instances"""
        for nodes, arcs, commodities, limit in ((20, 315, 200, 10.0), (30, 700, 400, 40.0)):
            start = datetime.datetime.now()
            self.call('detgen', ['-nbNodes', str(nodes), '-nbArcs', str(arcs), '-nbCom', str(commodities),
                                 '-V', '0', '-o', self.path('large')])
            self.assertLess(elapsedSince(start), limit)
            header = readTextFile(self.path('large.std')).splitlines()[0]
            self.assertEqual(header, f'{nodes} {arcs} {commodities} 0')


class ElementCounts(unittest.TestCase):

    """randomized elements for demands and arc capacities"""

    def testShapes(self) ->None:
        """85, 133, 320 and 515"""
        for arcs, commodities, expected in ((60, 25, 85), (83, 50, 133), (220, 100, 320), (315, 200, 515)):
            selection = RandomizationSelection(Family.DEMAND | Family.ARC_CAPACITY, arcs, commodities)
            self.assertEqual(selection.variableCount, expected)


if __name__ == '__main__':
    unittest.main()
