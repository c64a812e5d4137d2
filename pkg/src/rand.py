# -*- coding: utf-8 -*-

"""
Copyright (C) 2008-2016 Wolfgang Rohdewald <wolfgang@rohdewald.de>
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

The pseudo random source for both generators: a PCG64 bit generator
from numpy. A (seed, stream) pair is turned into the generator state by
numpy.random.SeedSequence(entropy=seed, spawn_key=(stream,)), so distinct
streams with the same seed are independent sequences.

Reals are built from 53 random bits, integers are drawn with rejection
(numpy Generator.integers), so there is no modulo bias.
"""

from typing import Type, TYPE_CHECKING

import numpy as np

from util import callers
from common import Debug
from log import logDebug

if TYPE_CHECKING:
    import numpy.typing as npt

DEFAULT_SEED = 4567
DEFAULT_STREAM = 1234
U64 = (1 << 64) - 1


class CountRandomCalls:

    """a helper class for logging count of random draws"""

    def __init__(self, rnd:'PcgRandom', what:str) ->None:
        self.rnd = rnd
        self.what = what
        self.oldCount = rnd.count

    def __enter__(self) ->'CountRandomCalls':
        return self

    def __exit__(self, exc_type:Type[Exception], exc_value:Exception, trback:str) ->None:
        if Debug.random:
            logDebug(
                f'{self.rnd.count - self.oldCount} out of '
                f'{self.rnd.count} draws by {self.what} from {callers()}')


class PcgRandom:

    """seedable, streamed random source. A PcgRandom has a single owner,
    concurrent users need distinct streams"""

    def __init__(self, seed:int=DEFAULT_SEED, stream:int=DEFAULT_STREAM) ->None:
        if not 0 <= seed <= U64 or not 0 <= stream <= U64:
            raise ValueError(f'seed {seed} and stream {stream} must be unsigned 64 bit integers')
        self.seed = seed
        self.stream = stream
        self.count = 0
        sequence = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
        self.generator = np.random.Generator(np.random.PCG64(sequence))
        if Debug.random:
            logDebug(f'Random gets seed {seed} stream {stream}')

    def __str__(self) ->str:
        return f'PcgRandom(seed={self.seed}, stream={self.stream}, draws={self.count})'

    def uniformReal(self, lo:float, hi:float) ->float:
        """a value in [lo, hi). lo == hi returns lo"""
        if lo > hi:
            raise ValueError(f'uniformReal: lo {lo} > hi {hi}')
        self.count += 1
        draw = float(self.generator.random())
        if lo == hi:
            return float(lo)
        result = lo + (hi - lo) * draw
        if result >= hi:
            # rounding can hit hi for wide intervals
            result = float(np.nextafter(hi, lo))
        return result

    def uniformReals(self, lo:float, hi:float, shape:'npt.ArrayLike') ->'npt.NDArray[np.float64]':
        """an array of values in [lo, hi), filled in C order"""
        if lo > hi:
            raise ValueError(f'uniformReals: lo {lo} > hi {hi}')
        with CountRandomCalls(self, f'uniformReals({lo},{hi},{shape})'):
            result = self.generator.random(shape)
            self.count += result.size
            if lo == hi:
                return np.full(result.shape, float(lo))
            result = lo + (hi - lo) * result
            return np.minimum(result, np.nextafter(hi, lo))

    def uniformInt(self, lo:int, hi:int) ->int:
        """an integer in [lo, hi], both ends included"""
        if lo > hi:
            raise ValueError(f'uniformInt: lo {lo} > hi {hi}')
        self.count += 1
        return int(self.generator.integers(lo, hi, endpoint=True))

    def sampleWithoutReplacement(self, population:int, k:int) ->'npt.NDArray[np.int64]':
        """k distinct values out of range(population), in draw order"""
        if not 0 <= k <= population:
            raise ValueError(f'cannot sample {k} out of {population}')
        with CountRandomCalls(self, f'sample({population}, {k})'):
            self.count += k
            return self.generator.choice(population, size=k, replace=False)

    def standardNormals(self, shape:'npt.ArrayLike') ->'npt.NDArray[np.float64]':
        """i.i.d. standard normal draws, filled in C order"""
        with CountRandomCalls(self, f'standardNormals({shape})'):
            result = self.generator.standard_normal(shape)
            self.count += result.size
            return result
