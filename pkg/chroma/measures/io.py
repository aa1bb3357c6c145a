# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
CSV form of measures::

    # mass=1.0 k=3
    point,weight
    0.3333333333333333,0.5
    1.0,0.5
"""
import csv
import io
import re

from chroma.measures.empirical import EmpiricalMeasure
from chroma.measures.star import StarMeasure

HEADER = re.compile(r'#\s*mass=(?P<mass>\S+)\s+k=(?P<k>\S+)')


def write_measure(stream, measure, k=None):
    """Write ``measure`` to the text stream ``stream``"""
    k = k if k is not None else getattr(measure, 'k', None)
    stream.write('# mass=%r k=%s\n' % (measure.mass,
                                         '-' if k is None else int(k)))
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(('point', 'weight'))
    for point, weight in zip(measure.points, measure.weights):
        writer.writerow((repr(float(point)), repr(float(weight))))


def read_measure(stream):
    """Read a measure written by :func:`write_measure`"""
    first = stream.readline()
    match = HEADER.match(first)
    if not match:
        raise ValueError('Missing "# mass=... k=..." header: %s'
                         % first.strip())
    reader = csv.reader(stream)
    header = next(reader, None)
    if header != ['point', 'weight']:
        raise ValueError('Expected "point,weight" columns, got %s' % header)
    points, weights = [], []
    for row in reader:
        if not row:
            continue
        points.append(float(row[0]))
        weights.append(float(row[1]))
    k = match.group('k')
    if k == '-':
        return EmpiricalMeasure(points, weights)
    return StarMeasure(points, weights, k=int(k))


def dumps_measure(measure, k=None):
    """:func:`write_measure` into a string"""
    out = io.StringIO()
    write_measure(out, measure, k)
    return out.getvalue()
