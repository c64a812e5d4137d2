# -*- coding: utf-8 -*-

"""
Copyright (C) 2008-2016 Wolfgang Rohdewald <wolfgang@rohdewald.de>
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import logging
import traceback
from typing import Union

from common import Internal, Debug
from util import elapsedSince, callers


def __enrichMessage(msg:str) ->str:
    """
    Add some optional prefixes to msg: elapsed time, callers.

    @param msg: The original message.
    @type msg: C{str}
    @rtype: C{str}
    """
    result = msg
    if Debug.timestamp:
        result = f'{elapsedSince(Debug.timestamp):08.4f} {result}'
    if int(Debug.callers):
        result = '  ' + result
    return result


def __exceptionToString(exception:Exception) ->str:
    """
    Convert exception into a useful string for logging.

    @param exception: The exception to be logged.
    @type exception: C{Exception}

    @rtype: C{str}
    """
    parts = []
    for arg in exception.args:
        if hasattr(arg, 'strerror'):
            parts.append(f'[Errno {arg.errno}] {arg.strerror}')
        elif arg is None:
            pass
        else:
            parts.append(str(arg))
    if getattr(exception, 'filename', None):
        parts.append(exception.filename)  # type:ignore[attr-defined]
    return ' '.join(parts) or exception.__class__.__name__


def logMessage(msg:Union[Exception, str], prio:int, showStack:bool=False) ->None:
    """writes message to the log"""
    if isinstance(msg, Exception):
        msg = __exceptionToString(msg)
    msg = str(msg)
    Internal.logger.log(prio, __enrichMessage(msg))
    if showStack:
        for line in traceback.format_stack(limit=5)[:-2]:
            Internal.logger.log(prio, '  ' + line.strip())
    if int(Debug.callers):
        Internal.logger.log(prio, '    ' + callers(int(Debug.callers)))


def logInfo(msg:Union[Exception, str]) ->None:
    """log an info message"""
    logMessage(msg, logging.INFO)


def logError(msg:Union[Exception, str], showStack:bool=False) ->None:
    """log an error message"""
    logMessage(msg, logging.ERROR, showStack=showStack)


def logDebug(msg:Union[Exception, str], showStack:bool=False) ->None:
    """log a debug message, shown with -V 2 or more"""
    logMessage(msg, logging.DEBUG, showStack=showStack)


def logWarning(msg:Union[Exception, str]) ->None:
    """log a warning"""
    logMessage(msg, logging.WARNING)
