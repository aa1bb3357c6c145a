# -*- encoding: utf-8 -*-
# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
'''
This module is used to test the command line entry points:
bin/chroma_run.py, bin/chroma_lint.py
'''
#pylint: disable=missing-docstring,invalid-name

import importlib.util
import json
import os
import sys

import pytest

from chroma.core import settings

BIN = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir,
                   os.pardir, 'bin')


def load_script(name):
    spec = importlib.util.spec_from_file_location(
        name, os.path.join(BIN, '%s.py' % name))
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture
def no_site_file(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, 'CONFIG_FILE', str(tmp_path / 'none.conf'))
    monkeypatch.setattr(settings, 'DEBUG', settings.DEBUG)
    return tmp_path


def test_unknown_subcommand(no_site_file):
    with pytest.raises(SystemExit) as info:
        load_script('chroma_run').main(['colour-everything'])
    assert info.value.code == 2


def test_bad_config_exits_2(no_site_file, capsys):
    assert load_script('chroma_run').main(['population', '--k', '2']) == 2
    assert '(k): Need k >= 3, got 2' in capsys.readouterr().err


def test_bad_site_file_exits_2(no_site_file):
    site = no_site_file / 'bad.conf'
    site.write_text('[chroma]\nWORKERS = 3\n')
    settings.CONFIG_FILE = str(site)
    assert load_script('chroma_run').main(['thresholds']) == 2


def test_run_writes_report(no_site_file):
    experiment = no_site_file / 'oracle.txt'
    experiment.write_text('subcommand: bp-oracle\ninstances: 2\n')
    out = no_site_file / 'oracle.json'
    status = load_script('chroma_run').main(
        ['bp-oracle', '--config', str(experiment), '--instances', '4',
         '--out', str(out), '--check'])
    assert status == 0
    data = json.loads(out.read_text())
    assert data['report']['instances'] == 4
    assert data['config']['check'] is True


def test_lint_counts_problems(no_site_file, monkeypatch, capsys):
    experiment = no_site_file / 'bad.txt'
    experiment.write_text('subcommand: population\nk: two\ncolours: 4\n')
    monkeypatch.setattr(sys, 'argv', ['chroma_lint.py', str(experiment)])
    assert load_script('chroma_lint').main() == 2
    out = capsys.readouterr().out
    assert '(file): Unknown key colours' in out


def test_lint_clean_file(no_site_file, monkeypatch):
    experiment = no_site_file / 'good.txt'
    experiment.write_text('subcommand: thresholds\nks: 1e3\n')
    monkeypatch.setattr(sys, 'argv', ['chroma_lint.py', str(experiment)])
    assert load_script('chroma_lint').main() == 0
