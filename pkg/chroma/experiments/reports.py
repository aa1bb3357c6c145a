# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Report writers.  Every report starts with the resolved configuration so a
file alone is enough to rerun it.
"""
import contextlib
import csv
import json
import math
import sys

import numpy as np

CONFIG_PREFIX = '# config: '


def plain(value):
    """
    JSON-ready copy of ``value``: numpy scalars and arrays become Python
    numbers and lists, namedtuples become dicts, non-finite floats become
    ``"inf"``/``"-inf"`` and ``nan`` becomes ``null``.

    >>> plain({'a': np.float64('inf'), 'b': np.arange(2)})
    {'a': 'inf', 'b': [0, 1]}
    """
    if hasattr(value, '_asdict'):
        return dict((key, plain(val)) for key, val in value._asdict().items())
    if isinstance(value, dict):
        return dict((str(key), plain(val)) for key, val in value.items())
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(i) for i in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


def dumps(payload):
    return json.dumps(plain(payload), sort_keys=True, indent=2) + '\n'


@contextlib.contextmanager
def open_output(path):
    """Text stream for ``path``, ``-`` being stdout"""
    if path in (None, '-'):
        yield sys.stdout
        return
    with open(path, 'w', newline='') as stream:
        yield stream


def config_line(config):
    """Single comment line echoing ``config`` for CSV reports"""
    return CONFIG_PREFIX + json.dumps(plain(config.as_dict()),
                                      sort_keys=True) + '\n'


def read_config_line(line):
    """Configuration dict from a :func:`config_line`"""
    if not line.startswith(CONFIG_PREFIX):
        raise ValueError('Missing config line: %s' % line.strip())
    return json.loads(line[len(CONFIG_PREFIX):])


def write_json(stream, config, report):
    """``report`` under ``"report"`` next to the config and seed"""
    stream.write(dumps({
        'config': config.as_dict(),
        'seed': config.seed,
        'subcommand': config.subcommand,
        'report': report,
    }))


def _number(value):
    value = plain(value)
    return repr(value) if isinstance(value, float) else str(value)


def _write_rows(stream, config, header, rows):
    stream.write(config_line(config))
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_number(i) for i in row])


def trajectory_header(grid):
    return ['generation', 'mean', 'p_one', 'p_frozen', 'gap'] + \
        ['q%04d' % i for i in range(grid)]


def write_trajectory(stream, config, rows):
    """One CSV line per generation, the quantile profile flattened"""
    grid = len(rows[0].quantiles) if rows else 0
    flat = ([row.generation, row.mean, row.p_one, row.p_frozen, row.gap] +
            list(row.quantiles) for row in rows)
    _write_rows(stream, config, trajectory_header(grid), flat)


SWEEP_HEADER = ['k', 'model', 'd_f', 'x_star', 'non_reconstruction',
                'freezing_asymptotic', 'main_theorem_form', 'kesten_stigum']


def write_sweep(stream, config, rows):
    _write_rows(stream, config, SWEEP_HEADER, rows)


SCAN_HEADER = ['d', 'gap', 'p_frozen', 'mean']


def write_scan(stream, config, rows):
    _write_rows(stream, config, SCAN_HEADER, rows)
