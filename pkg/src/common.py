# -*- coding: utf-8 -*-

"""
Copyright (C) 2008-2016 Wolfgang Rohdewald <wolfgang@rohdewald.de>
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0-only

"""

import datetime
import sys
import os
import logging
from typing import Optional, Any, Union, List

# pylint: disable=invalid-name


class ConfigurationError(ValueError):

    """a configuration value or a combination of values is not acceptable"""


class Debug:

    """holds flags for debugging output. They are set with -debug on
    the command line of both programs"""
    random = False
    hkw = False
    newton = False
    simplex = False
    feasibility = False
    config = False
    time = False
    timestamp:Optional[datetime.datetime] = None
    callers = '0'

    def __init__(self) ->None:
        raise TypeError('Debug is not meant to be instantiated')

    @staticmethod
    def switches() ->List[str]:
        """names of all options that take no value"""
        return sorted(x for x, y in vars(Debug).items() if isinstance(y, bool))

    @staticmethod
    def help() ->str:
        """for the help text of -debug"""
        return (f"comma separated debug options out of {', '.join(Debug.switches())}. "
                'callers:N adds N calling functions to every log line')

    @staticmethod
    def setOptions(args:str) ->str:
        """args comes from the command line. Returns an error message or ''"""
        for arg in filter(None, args.split(',')):
            option, withValue, text = arg.partition(':')
            value:Union[bool, str] = text if withValue else True
            current = vars(Debug).get(option)
            if option.startswith('_') or not isinstance(current, (bool, str)):
                return f'-debug: unknown option {option}'
            if not isinstance(current, type(value)):
                return f'-debug: option {option} {"needs" if withValue == "" else "takes no"} value'
            type.__setattr__(Debug, option, value)
        if Debug.time:
            Debug.timestamp = datetime.datetime.now()
        return ''

    @staticmethod
    def reset() ->None:
        """all switches off again. Used between test runs"""
        for option in Debug.switches():
            type.__setattr__(Debug, option, False)
        Debug.callers = '0'
        Debug.timestamp = None


class ReprMixin:

    """repr is str, prefixed with the class name and a short id
    unless str already starts with the class name"""

    def __repr__(self) ->str:
        clsName = self.__class__.__name__
        content = str(self)
        if content.startswith(clsName):
            return content
        return f'{clsName}_{id(self) % 65536:04x}({content})'


class __Internal:

    """
    Global things.

    @cvar logger: The logger shared by all modules.
    @type logger: C{logging.Logger}
    @cvar handler: The handler writing to stderr. Its level follows -V.
    @type handler: C{logging.Handler}
    """
    logger : Any = None
    handler : Any = None

    def __init__(self) ->None:
        """init the logger"""
        logName = os.path.basename(sys.argv[0]).replace('.py', '') or 'mcndgen'
        self.logger = logging.getLogger(logName)
        self.handler = logging.StreamHandler(sys.stderr)
        self.handler.setFormatter(logging.Formatter("%(name)s: %(levelname)s %(message)s"))
        self.logger.addHandler(self.handler)
        self.logger.setLevel(logging.DEBUG)
        self.setVerbosity(1)

    def setVerbosity(self, verbosity:int) ->None:
        """0: warnings and errors, 1: info, 2 and more: debug"""
        if verbosity <= 0:
            level = logging.WARNING
        elif verbosity == 1:
            level = logging.INFO
        else:
            level = logging.DEBUG
        self.handler.setLevel(level)

Internal = __Internal()
