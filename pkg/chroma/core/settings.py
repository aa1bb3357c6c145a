# -*- coding: utf-8 -*-

# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.

"""
Settings for the chroma laboratory.

Defaults live here as module constants.  A site file in ini format
(section ``[chroma]``) may override any of the numeric ones, e.g.::

    [chroma]
    NODE_CEILING = 5000000
    POPULATION_SIZE = 200000
"""

# pylint: disable=C0103,W0603
# C0103: Invalid name (module level settings are not constants to pylint)
# W0603: Using the global statement
import os
import logging
import logging.config

from configparser import ConfigParser, Error as ConfigParserError

DEBUG = False

# Trees larger than this are refused by the samplers
NODE_CEILING = 10 ** 7

# Upper bound on colourings enumerated by the brute force oracle
ENUMERATION_CEILING = 10 ** 6

POPULATION_SIZE = 10 ** 5
DOMINANCE_SAMPLES = 10 ** 6
SNAPSHOT_GRID = 512

# Samples drawn from one random stream; chunk boundaries never depend on
# the number of workers
CHUNK_SIZE = 4096

# Floats held at once by a vectorized arrival chunk
ARRIVAL_BUDGET = 2 ** 22

TIE_RTOL = 1e-9
CDF_TOL = 1e-12
QUAD_RTOL = 1e-10

# Largest k for which full simplex vectors are materialized
FULL_STEP_MAX_K = 64

CONFIG_FILE = os.environ.get('CHROMA_CONFIG', '/etc/chroma/chroma.conf')

_OVERRIDABLE = {
    'NODE_CEILING': int,
    'ENUMERATION_CEILING': int,
    'POPULATION_SIZE': int,
    'DOMINANCE_SAMPLES': int,
    'SNAPSHOT_GRID': int,
    'CHUNK_SIZE': int,
    'ARRIVAL_BUDGET': int,
    'TIE_RTOL': float,
    'CDF_TOL': float,
    'QUAD_RTOL': float,
    'FULL_STEP_MAX_K': int,
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '[%(levelname)s] %(asctime)s|%(name)s|%(message)s',
        }
    },
    'handlers': {
        # Development handler logs from DEBUG up
        'development': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
        'production': {
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
        'error_handler': {
            'level': 'ERROR',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'chroma': {
            'handlers': ['production'],
            'level': 'INFO',
            'propagate': False,
        },
        'chroma.run': {
            'handlers': ['error_handler'],
            'level': 'ERROR',
            'propagate': True,
        },
    }
}


def load_overrides(path=None):
    """
    Read numeric overrides from the ``[chroma]`` section of an ini file.

    Missing files are skipped quietly.  Returns the names that changed.
    """
    path = path or CONFIG_FILE
    parser = ConfigParser()
    parser.optionxform = str
    try:
        if not parser.read(path):
            return []
    except ConfigParserError as err:
        raise ValueError('Invalid syntax in configuration at %s: %s'
                         % (path, err))
    if not parser.has_section('chroma'):
        return []

    changed = []
    module = globals()
    for name, value in parser.items('chroma'):
        name = name.upper()
        if name not in _OVERRIDABLE:
            raise ValueError('Unknown setting "%s" in %s' % (name, path))
        try:
            module[name] = _OVERRIDABLE[name](value)
        except ValueError:
            raise ValueError('Bad value "%s" for setting %s in %s'
                             % (value, name, path))
        changed.append(name)
    return changed


def configure_logging(debug=None):
    """Install LOGGING, switching the chroma logger to DEBUG on demand."""
    global DEBUG
    if debug is not None:
        DEBUG = debug
    config = dict(LOGGING)
    config['loggers'] = dict(LOGGING['loggers'])
    if DEBUG:
        config['loggers']['chroma'] = {
            'handlers': ['development'],
            'level': 'DEBUG',
            'propagate': False,
        }
    logging.config.dictConfig(config)
