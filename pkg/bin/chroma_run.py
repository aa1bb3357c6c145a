#!/usr/bin/env python
# -*- encoding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Run one experiment and write its report.

Settings come from the defaults, then the ``--config`` file, then the
flags given here.
"""
import sys
import argparse
import logging

from chroma.core.errors import ChromaError, ConfigError
from chroma.core.settings import configure_logging, load_overrides
from chroma.experiments.check import SUBCOMMANDS
from chroma.experiments.config import load_config
from chroma.experiments.runner import run

logger = logging.getLogger("chroma.run")

# flag: help; every value is parsed by the config layer
FLAGS = (
    ('k', 'number of colours'),
    ('law', "offspring law: poisson:d, dary:d or tpois:d',d"),
    ('depth', 'tree depth'),
    ('pop', 'population size N'),
    ('gens', 'generations'),
    ('seed', 'master seed'),
    ('workers', 'worker processes'),
    ('out', 'report path, - for stdout'),
    ('delta', 'candidate tail exponent'),
    ('kappa', 'candidate kappa'),
    ('alpha0', 'candidate alpha_0'),
    ('bigm', 'candidate tail start M'),
    ('sigma', 'candidate sigma'),
    ('gamma', 'candidate tail weight'),
    ('eps', 'candidate epsilon'),
    ('beta', 'degree factor below the freezing threshold'),
    ('ks', 'list of k for sweeps'),
    ('model', 'threshold model: poisson or dary'),
    ('start', 'starting measure: trivial, frozen or mixed'),
    ('degrees', 'list of degrees for the scan'),
    ('theta', 'fixture mixing weight'),
    ('n-iter', 'fixture iterations'),
    ('n-dom', 'samples for dominance checks'),
    ('runs', 'Alice runs per depth'),
    ('instances', 'oracle instances'),
    ('c', 'dominance constant c'),
    ('trials', 'equivariance records'),
    ('mode', 'Alice mode: poisson or truncated'),
    ('d-prime', "truncated Poisson mean d'"),
)


def build_parser():
    parser = argparse.ArgumentParser(description=__doc__.strip())
    parser.add_argument('subcommand', choices=SUBCOMMANDS)
    parser.add_argument('--config', type=argparse.FileType('r'),
                        help='experiment file')
    for flag, text in FLAGS:
        parser.add_argument('--%s' % flag, default=None, help=text)
    parser.add_argument('--check', action='store_true', default=None,
                        help='assert the expected outcome, exit 1 on failure')
    parser.add_argument('-v', '--verbose', action='store_true')
    return parser


def main(argv=None):
    """
    return 0 on success, 1 on a failed check or error, 2 on bad settings.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        load_overrides()
    except ValueError as err:
        print(err, file=sys.stderr)
        return 2

    overrides = dict(vars(args))
    for name in ('config', 'verbose'):
        del overrides[name]
    content = args.config.read() if args.config else None
    try:
        config = load_config(content, overrides)
    except ConfigError as err:
        for message in err.messages:
            print(message, file=sys.stderr)
        return 2

    try:
        return run(config)
    except ChromaError:
        logger.exception('Experiment %s failed', config.subcommand)
        return 1
    except Exception:  # pylint: disable=W0703
        logger.exception('Unexpected error in %s', config.subcommand)
        return 1


if __name__ == '__main__':
    sys.exit(main())
