# -*- coding: utf-8 -*-

# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.

"""
The candidate fixed-point family and its compound Poisson samplers.
"""
