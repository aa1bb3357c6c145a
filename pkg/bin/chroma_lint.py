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
Check an experiment file without running it.
"""
import sys
import argparse
import logging

from chroma.core.settings import configure_logging
from chroma.experiments.config import lint

logger = logging.getLogger("chroma.run")


def main():
    """
    Lint the experiment file.
    return 0 means it can run, non-zero is the number of problems found.
    """
    parser = argparse.ArgumentParser()
    parser.add_argument('config', type=argparse.FileType('r'),
                        help='experiment file')
    parser.add_argument('-v', '--verbose', action='store_true')
    args = parser.parse_args()
    configure_logging(args.verbose)

    logger.debug('Checking %s', args.config.name)
    res = lint(args.config.read())
    for message in res:
        print(message)
    if res:
        logger.warning('Check complete. %s problems found.', len(res))
    else:
        logger.debug('Check complete. OK')
    return len(res)


if __name__ == '__main__':
    sys.exit(main())
