# -*- coding: utf-8 -*-

"""
Copyright (C) 2008-2016 Wolfgang Rohdewald <wolfgang@rohdewald.de>
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

# util must not import from log because log imports util

import traceback
import datetime

from typing import Optional, Sequence, Any, Type, TYPE_CHECKING

import numpy as np

from common import Internal

if TYPE_CHECKING:
    from types import FrameType
    import numpy.typing as npt


def callers(count:int=5, exclude:Optional[Sequence]=None, frame:Optional['FrameType']=None) ->str:
    """return the name of the calling method"""
    stck = traceback.extract_stack(f=frame, limit=30)
    excluding = list(exclude) if exclude else []
    excluding.extend(['<genexpr>', '<listcomp>', '__call__', 'run', '<module>'])
    excluding.extend(['callers', 'logMessage', 'logDebug', 'logInfo', 'logWarning', 'logError'])
    _ = list(x[2] for x in stck if x[2] not in excluding)
    names = reversed(_[-count:])
    result = '.'.join(names)
    return f'[{result}]'


def elapsedSince(since:Optional[datetime.datetime]) ->float:
    """return seconds since since"""
    if not since:
        return 0.0
    delta = datetime.datetime.now() - since
    return float(
        delta.microseconds
        + (delta.seconds + delta.days * 24 * 3600) * 10 ** 6) / 10 ** 6


def roundHalfUp(values:'npt.ArrayLike') ->'npt.NDArray[np.float64]':
    """7.5 becomes 8, 7.4999 becomes 7. Applied after any scaling"""
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5)


class Duration:

    """logs the wall time of a stage at INFO, visible from -V 1 on. Stages
    shorter than threshold seconds are not logged"""

    def __init__(self, name:str, threshold:float=0.0) ->None:
        self.name = name
        self.threshold = threshold
        self.seconds = 0.0
        self.__start = datetime.datetime.now()

    def __enter__(self) ->'Duration':
        return self

    def __exit__(self, exc_type:Type, exc_value:Exception, trback:Any) ->None:
        self.seconds = elapsedSince(self.__start)
        if self.seconds >= self.threshold:
            Internal.logger.info(f'{self.name} took {self.seconds:.2f} seconds')
