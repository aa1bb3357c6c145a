# -*- encoding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
'''
This module is used to test report writers:
chroma/experiments/reports.py
'''
#pylint: disable=missing-docstring,invalid-name

import csv
import io
import json
from collections import namedtuple

import numpy as np
import pytest

from chroma.dynamics.population import ScanRow, TrajectoryRow
from chroma.experiments import reports
from chroma.experiments.config import load_config


def test_plain():
    Pair = namedtuple('Pair', 'a b')
    value = {1: Pair(np.int64(3), np.array([0.5, np.nan])),
             'flag': np.bool_(True), 'low': float('-inf')}
    assert reports.plain(value) == {
        '1': {'a': 3, 'b': [0.5, None]}, 'flag': True, 'low': '-inf'}
    assert isinstance(reports.plain(np.float32(0.25)), float)


def test_json_report():
    config = load_config(overrides={'seed': 4})
    out = io.StringIO()
    reports.write_json(out, config, {'ks': np.float64(0.01), 'max_c':
                                     np.inf})
    data = json.loads(out.getvalue())
    assert data['seed'] == 4
    assert data['subcommand'] == 'population'
    assert data['report'] == {'ks': 0.01, 'max_c': 'inf'}
    assert data['config']['law'] == 'poisson:12'


def test_config_line():
    config = load_config(overrides={'k': 5})
    line = reports.config_line(config)
    assert line.startswith('# config: {') and line.endswith('\n')
    assert reports.read_config_line(line)['k'] == 5
    with pytest.raises(ValueError):
        reports.read_config_line('generation,mean\n')


def test_trajectory_csv():
    config = load_config()
    rows = [TrajectoryRow(i, 0.5, 0.1, 0.1, 0.5 - 1.0 / 3,
                          np.array([1.0 / 3, 0.75, 1.0]))
            for i in range(2)]
    out = io.StringIO()
    reports.write_trajectory(out, config, rows)
    lines = out.getvalue().splitlines()
    assert reports.read_config_line(lines[0])['subcommand'] == 'population'
    table = list(csv.reader(lines[1:]))
    assert table[0] == ['generation', 'mean', 'p_one', 'p_frozen', 'gap',
                        'q0000', 'q0001', 'q0002']
    assert len(table) == 3
    assert table[2][0] == '1'
    # floats written with repr keep every digit
    assert float(table[1][5]) == 1.0 / 3


def test_scan_csv():
    config = load_config(overrides={'subcommand': 'scan'})
    out = io.StringIO()
    reports.write_scan(out, config, [ScanRow(4.0, 0.0, 0.0, 0.25)])
    lines = out.getvalue().splitlines()
    assert lines[1] == ','.join(reports.SCAN_HEADER)
    assert lines[2] == '4.0,0.0,0.0,0.25'


def test_open_output(tmp_path):
    path = str(tmp_path / 'report.json')
    with reports.open_output(path) as stream:
        stream.write('{}\n')
    with open(path) as stream:
        assert stream.read() == '{}\n'
