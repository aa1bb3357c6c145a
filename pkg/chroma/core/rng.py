# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Counter-based random streams.

Every random draw in chroma comes from a generator obtained with
:func:`stream`, keyed by the master seed and a tuple of integers naming
the purpose and the position of the work item::

    rng = stream(seed, tag('population'), generation, chunk)

Two calls with the same key always produce the same numbers, no matter
which process makes them or in which order.
"""
import zlib

import numpy as np


def tag(name):
    """Stable integer for a purpose name"""
    return zlib.crc32(name.encode('utf-8')) & 0xffffffff


def stream(seed, *key):
    """
    Philox generator for ``(seed, key)``.

    :param seed: master seed, a nonnegative integer
    :param key: nonnegative integers; strings are turned into tags
    """
    spawn_key = tuple(tag(i) if isinstance(i, str) else int(i) for i in key)
    seq = np.random.SeedSequence(int(seed), spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(seq))


def as_generator(rng):
    """Accept a Generator, an integer seed or None"""
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(0 if rng is None else rng)


def child_seed(rng):
    """Draw a fresh master seed from ``rng`` for nested keyed streams"""
    return int(rng.integers(0, 2 ** 63 - 1))


def chunk_bounds(total, size):
    """
    Split ``range(total)`` into consecutive ``(start, stop)`` pairs.

    >>> chunk_bounds(10, 4)
    [(0, 4), (4, 8), (8, 10)]
    """
    size = max(int(size), 1)
    return [(start, min(start + size, total))
            for start in range(0, int(total), size)]
