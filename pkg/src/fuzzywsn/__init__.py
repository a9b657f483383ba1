"""Heterogeneous wireless sensor network simulator with fuzzy cluster-head election."""

from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
