# -*- coding: utf-8 -*-

# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.

"""
Namespace package of CHROMA, the colouring reconstruction laboratory.
"""

from pkgutil import extend_path
__path__ = extend_path(__path__, __name__)

__version__ = '0.1.0'
