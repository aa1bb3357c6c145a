# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Module for checking experiment settings against the preconditions of the
operations they drive.
"""
import logging

from chroma.candidate.params import CandidateParams
from chroma.core import settings
from chroma.core.errors import PreconditionError
from chroma.thresholds.freezing import MODELS
from chroma.trees.model import Deterministic, TruncatedPoisson, parse_law

# pylint: disable=C0103,W0603
# C0103: Invalid name "logger"
# W0603: Using the global statement

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('thresholds', 'population', 'full-vs-reduced', 'bp-oracle',
               'stable-law', 'verify-dominance', 'alice-bob', 'scan')

STARTS = ('trivial', 'frozen', 'mixed')

MODES = ('poisson', 'truncated')

_messages = []


def error(*args, **kw):
    "collect a problem and log it"
    _messages.append(*args)
    return logger.error(*args, **kw)


def check_config(values):
    """
    Check resolved settings; the return value lists every problem found,
    empty when the experiment can run.
    """
    global _messages
    _messages = []

    sub = values['subcommand']
    if sub not in SUBCOMMANDS:
        error('(subcommand): Unknown subcommand %s' % sub)
        return _messages

    check_sizes(values, sub)
    law = check_law(values)
    check_candidate(values, sub)
    check_subcommand(values, sub, law)
    return _messages


def check_sizes(values, sub):
    """Counts and sizes"""
    if values['k'] < 3:
        error('(k): Need k >= 3, got %s' % values['k'])
    for name in ('depth', 'gens', 'seed'):
        if values[name] < 0:
            error('(%s): Must be nonnegative, got %s' % (name, values[name]))
    for name in ('workers', 'runs', 'instances', 'trials', 'n_dom'):
        if values[name] < 1:
            error('(%s): Must be positive, got %s' % (name, values[name]))
    if sub in ('population', 'scan') and values['pop'] < 1000:
        error('(pop): Population dynamics needs pop >= 1000, got %s'
              % values['pop'])
    elif values['pop'] < 1:
        error('(pop): Must be positive, got %s' % values['pop'])


def check_law(values):
    """The offspring law, or None when it does not parse"""
    try:
        return parse_law(values['law'])
    except (ValueError, PreconditionError) as err:
        error('(law): %s' % err)
        return None


def check_candidate(values, sub):
    """Candidate parameters, when the subcommand uses them"""
    if sub not in ('verify-dominance', 'stable-law'):
        return
    names = CandidateParams.FIELDS
    try:
        params = CandidateParams(**dict((i, values[i]) for i in names))
    except PreconditionError as err:
        error('(params): %s' % err)
        return
    if sub == 'verify-dominance' and not params.bigm > 2.0 / params.delta:
        error('(bigm): Need M > 2/delta, got M=%s delta=%s'
              % (params.bigm, params.delta))
    if sub == 'stable-law' and params.delta != 0.5:
        error('(delta): The Levy limit needs delta = 0.5, got %s'
              % params.delta)


def check_subcommand(values, sub, law):
    """Settings read by one subcommand only"""
    if sub in ('thresholds', 'stable-law'):
        small = [k for k in values['ks'] if k < 3]
        if small:
            error('(ks): Need every k >= 3, got %s' % small)
    if sub == 'thresholds' and values['model'] not in MODELS:
        error('(model): Unknown model %s' % values['model'])
    if sub in ('population', 'full-vs-reduced') and \
            values['start'] not in STARTS:
        error('(start): Unknown start %s, expected one of %s'
              % (values['start'], ', '.join(STARTS)))
    if sub == 'full-vs-reduced' and values['k'] > settings.FULL_STEP_MAX_K:
        error('(k): The full step is limited to k <= %d'
              % settings.FULL_STEP_MAX_K)
    if sub == 'scan':
        check_scan(values, law)
    if sub == 'alice-bob':
        check_alice(values, law)


def check_scan(values, law):
    """The scan varies the degree of the law family named by ``law``"""
    degrees = values['degrees']
    if min(degrees) <= 0:
        error('(degrees): Degrees must be positive')
    if isinstance(law, TruncatedPoisson):
        error('(law): The scan needs a poisson or dary law family')
    elif isinstance(law, Deterministic) and \
            any(d != int(d) for d in degrees):
        error('(degrees): dary degrees must be integers, got %s' % degrees)


def check_alice(values, law):
    """Fixture and truncation settings"""
    if not 0 <= values['theta'] <= 1:
        error('(theta): Must lie in [0, 1], got %s' % values['theta'])
    if values['mode'] not in MODES:
        error('(mode): Unknown mode %s' % values['mode'])
    elif values['mode'] == 'truncated':
        if not isinstance(law, Deterministic):
            error('(law): Truncated mode needs a dary:d law')
        elif not 0 < values['d_prime'] <= law.d:
            error("(d_prime): Need 0 < d' <= %s, got %s"
                  % (law.d, values['d_prime']))
