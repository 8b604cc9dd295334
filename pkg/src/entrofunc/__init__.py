"""Exact and certified dynamical entropies on normed semigroups."""

from entrofunc.logvalue import LogValue

__version__ = "0.1.0"

__all__ = ["LogValue", "__version__"]
