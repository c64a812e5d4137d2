#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Copyright (C) 2008-2017 Wolfgang Rohdewald <wolfgang@rohdewald.de>
Copyright (C) 2024 mcndgen developers

SPDX-License-Identifier: GPL-2.0

Install detgen and stogen. The modules live flat in src/, the two
programs are small shell wrappers calling them.
"""

import os

from setuptools import setup
from setuptools.command.build_py import build_py

# Adapt this range: =======================================================
AUTHOR = 'mcndgen developers'
LICENSE = 'GNU General Public License v2'
VERSION = '1.0.0'
PROGRAMS = ('detgen', 'stogen')
# =======================================================

os.umask(0o0022) # files should be readable and executable by everybody

modules = sorted(x[:-3] for x in os.listdir('src')
                 if x.endswith('.py') and not x.endswith('test.py'))


class McndBuild(build_py):

    """writes the program wrappers before building the modules"""

    def run(self) ->None:
        for binary in PROGRAMS:
            with open(binary, 'w', encoding='utf-8') as script:
                script.write(f'#!/bin/sh\nexec python3 -m {binary} "$@"\n')
            os.chmod(binary, 0o0755)
        build_py.run(self)


setup(name='mcndgen',
    version=VERSION,
    description='Instance generator for multicommodity fixed charge network design',
    long_description='detgen generates deterministic capacitated multicommodity fixed charge '
            'network design instances. stogen turns one of them into a two stage stochastic '
            'instance whose scenarios match target moments and correlations.',
    author=AUTHOR,
    package_dir={'': 'src'},
    py_modules=modules,
    scripts=list(PROGRAMS),
    python_requires='>=3.9',
    install_requires=['numpy>=1.22', 'scipy>=1.9', 'networkx>=2.6', 'twisted>=22.4'],
    cmdclass={'build_py': McndBuild},
    license=LICENSE,
    classifiers=['Development Status :: 4 - Beta',
        'License :: OSI Approved :: GNU General Public License v2 (GPLv2)',
        'Operating System :: OS Independent',
        'Environment :: Console',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',])
