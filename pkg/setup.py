#!/usr/bin/env python
# -*- coding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Setup file for the CHROMA package.
"""
import os
from setuptools import setup, find_packages


README = open(os.path.join(os.path.dirname(__file__), 'README.md')).read()

setup(
    name='chroma',
    version='0.1.0',
    packages=find_packages(),
    include_package_data=True,
    license='GPL-2.0',
    description='CHROMA - numerical laboratory for colouring reconstruction '
                'on random trees',
    long_description=README,
    author='see AUTHORS file',
    classifiers=[
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    scripts=[
        'bin/chroma_run.py',
        'bin/chroma_lint.py',
    ],
    install_requires=open('requirements.txt').readlines(),
)
