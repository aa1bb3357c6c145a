# This file is part of CHROMA: Colouring Reconstruction Laboratory
#
# Copyright (C) 2025-2026 CHROMA developers
#
# CHROMA is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# version 2.0 as published by the Free Software Foundation.
"""
Exceptions raised by chroma.
"""


class ChromaError(Exception):
    """Base class of every chroma error"""


class PreconditionError(ChromaError, ValueError):
    """An argument lies outside the domain of an operation"""


class InconsistentEvidence(PreconditionError):
    """Observed leaf colours admit no proper colouring"""


class ResourceLimitError(ChromaError, RuntimeError):
    """A configured node or enumeration ceiling was exceeded"""


class RootFindingError(ChromaError, ArithmeticError):
    """A bracketing search found no sign change"""


class DominanceFailure(ChromaError):
    """An empirical stochastic dominance check failed"""

    def __init__(self, message, worst_gap=None):
        super(DominanceFailure, self).__init__(message)
        self.worst_gap = worst_gap


class ConfigError(ChromaError, ValueError):
    """Invalid experiment configuration; ``messages`` lists every problem"""

    def __init__(self, messages):
        self.messages = list(messages)
        super(ConfigError, self).__init__('; '.join(self.messages))
