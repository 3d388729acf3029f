"""Exact computations with pointed Hopf algebras of finite Cartan type and their simple modules."""
from __future__ import annotations

from .errors import PointedHopfError
from .scalars import FieldSpec, Scalar

__all__ = ["FieldSpec", "Scalar", "PointedHopfError"]
__version__ = "0.1.0"
