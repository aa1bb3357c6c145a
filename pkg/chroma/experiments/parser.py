# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Parser of experiment files: ``key: value`` lines, ``#`` comments and
blank lines ignored.
"""


def strip_comment(line):
    """Drop everything after ``#``"""
    return line.split('#', 1)[0].rstrip()


def parse_kv(line):
    """``(key, value)`` of one ``key: value`` line"""
    try:
        mark, val = line.split(':', 1)
    except ValueError:
        raise ValueError("Can't find colon(:) at line: %s" % line)
    mark, val = mark.strip(), val.strip()
    if not mark:
        raise ValueError("Empty key at line: %s" % line)
    return mark, val


def parse_lines(content):
    """
    ``(key, value)`` pairs in file order.

    >>> parse_lines('''
    ... k: 5
    ... law: poisson:6   # mean degree
    ...
    ... seed: 3
    ... ''')
    [('k', '5'), ('law', 'poisson:6'), ('seed', '3')]
    """
    if not content.strip():
        raise ValueError("Content must be not empty")
    res = []
    for raw in content.splitlines():
        line = strip_comment(raw)
        if line:
            res.append(parse_kv(line))
    return res


def parse_config(content):
    """
    ``{key: [values]}`` of an experiment file, keys normalized to lower
    case with dashes turned into underscores.
    """
    merged = {}
    for key, value in parse_lines(content):
        key = key.lower().replace('-', '_')
        merged.setdefault(key, []).append(value)
    return merged


def parse_list(text, convert=float):
    """Comma or space separated values, ``1e3`` style numbers allowed"""
    items = [i for i in text.replace(',', ' ').split() if i]
    if not items:
        raise ValueError('Empty list: %r' % text)
    return [convert(i) for i in items]


def parse_int(text):
    """Integers, also written as ``1e6``"""
    try:
        return int(text)
    except ValueError:
        pass
    value = float(text)
    if not value.is_integer():
        raise ValueError('Not an integer: %r' % text)
    return int(value)


def parse_bool(text):
    lowered = str(text).strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('Not a boolean: %r' % text)
