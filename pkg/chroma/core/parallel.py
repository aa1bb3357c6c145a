# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Ordered parallel map over independent work items.

Work items carry their own seeds and indices, so the pool only changes
who computes a chunk, never what the chunk contains.
"""
import logging
from multiprocessing import Pool

import numpy as np

logger = logging.getLogger(__name__)


def chunked_map(func, tasks, workers=1):
    """
    Apply ``func`` to every task and return the results in task order.

    ``func`` must be a module level function so it can be pickled.
    """
    tasks = list(tasks)
    workers = max(int(workers or 1), 1)
    if workers == 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]

    logger.debug('Mapping %d tasks over %d workers', len(tasks), workers)
    with Pool(processes=min(workers, len(tasks))) as pool:
        return pool.map(func, tasks, chunksize=1)


def concat(parts):
    """Concatenate per-chunk arrays, or tuples of arrays, in order"""
    if not parts:
        return np.empty(0)
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(column) for column in zip(*parts))
    return np.concatenate(parts)
