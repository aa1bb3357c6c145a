# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Experiment configuration: defaults, then the experiment file, then command
line flags.  Problems are collected and raised together.
"""
import logging
from collections import OrderedDict

from chroma.candidate.params import CandidateParams
from chroma.core import settings
from chroma.core.errors import ConfigError
from chroma.experiments.check import check_config
from chroma.experiments.parser import parse_bool, parse_config, parse_int, \
    parse_list
from chroma.trees.model import parse_law

logger = logging.getLogger(__name__)


def _int_list(text):
    return parse_list(text, parse_int)


def _float_list(text):
    return parse_list(text, float)


_DEFAULT_PARAMS = CandidateParams()

# name: (converter from text, default); None defaults read settings
FIELDS = OrderedDict((
    ('subcommand', (str, 'population')),
    ('k', (parse_int, 10)),
    ('law', (str, 'poisson:12')),
    ('depth', (parse_int, 3)),
    ('pop', (parse_int, None)),
    ('gens', (parse_int, 20)),
    ('seed', (parse_int, 0)),
    ('workers', (parse_int, 1)),
    ('out', (str, '-')),
    ('delta', (float, _DEFAULT_PARAMS.delta)),
    ('kappa', (float, _DEFAULT_PARAMS.kappa)),
    ('alpha0', (float, _DEFAULT_PARAMS.alpha0)),
    ('bigm', (float, _DEFAULT_PARAMS.bigm)),
    ('sigma', (float, _DEFAULT_PARAMS.sigma)),
    ('gamma', (float, _DEFAULT_PARAMS.gamma)),
    ('eps', (float, _DEFAULT_PARAMS.eps)),
    ('beta', (float, _DEFAULT_PARAMS.beta)),
    ('ks', (_int_list, [10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6])),
    ('model', (str, 'poisson')),
    ('start', (str, 'frozen')),
    ('degrees', (_float_list, [4.0, 6.0, 8.0, 10.0, 12.0])),
    ('theta', (float, 1.0)),
    ('n_iter', (parse_int, 30)),
    ('n_dom', (parse_int, None)),
    ('runs', (parse_int, 2000)),
    ('instances', (parse_int, 100)),
    ('c', (float, 0.1)),
    ('trials', (parse_int, 100)),
    ('mode', (str, 'poisson')),
    ('d_prime', (float, 0.0)),
    ('check', (parse_bool, False)),
))


# run-time only, left out of reports
NOT_ECHOED = ('workers', 'out')


def defaults():
    """Default values, sizes taken from the settings module"""
    values = OrderedDict((name, default) for name, (_, default)
                         in FIELDS.items())
    values['pop'] = settings.POPULATION_SIZE
    values['n_dom'] = settings.DOMINANCE_SAMPLES
    return values


class ExperimentConfig(object):
    """Resolved, checked settings of one run"""

    def __init__(self, **values):
        for name in FIELDS:
            setattr(self, name, values[name])

    def __repr__(self):
        return '<ExperimentConfig %s k=%s seed=%s>' % (self.subcommand,
                                                       self.k, self.seed)

    def as_dict(self):
        """Fields that shape the results, for echoing into reports"""
        return OrderedDict((name, getattr(self, name)) for name in FIELDS
                           if name not in NOT_ECHOED)

    def params(self):
        return CandidateParams(**dict(
            (name, getattr(self, name)) for name in CandidateParams.FIELDS))

    def offspring(self):
        return parse_law(self.law)


def _convert(name, value, messages):
    if not isinstance(value, str):
        return value
    try:
        return FIELDS[name][0](value)
    except ValueError as err:
        messages.append('(%s): Bad value %r: %s' % (name, value, err))
        return None


def resolve(content=None, overrides=None):
    """``(values, messages)`` from an experiment file and flag overrides"""
    values = defaults()
    messages = []
    if content is not None:
        try:
            parsed = parse_config(content)
        except ValueError as err:
            messages.append('(file): %s' % err)
            parsed = {}
        for key, found in sorted(parsed.items()):
            if key not in FIELDS:
                messages.append('(file): Unknown key %s' % key)
            elif len(found) > 1:
                messages.append('(file): Duplicated key %s' % key)
            else:
                values[key] = _convert(key, found[0], messages)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = _convert(key, value, messages)
    if not messages:
        messages.extend(check_config(values))
    return values, messages


def load_config(content=None, overrides=None):
    """Checked :class:`ExperimentConfig`, or :class:`ConfigError`"""
    values, messages = resolve(content, overrides)
    if messages:
        raise ConfigError(messages)
    config = ExperimentConfig(**values)
    logger.debug('Resolved %r', config)
    return config


def lint(content):
    """Every problem of an experiment file, empty when it can run"""
    try:
        return resolve(content)[1]
    except ValueError as err:
        return [str(err)]
