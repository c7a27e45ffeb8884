"""Diagram algebras and the homology of their trivial modules."""

from ._backend import BACKEND
from .coeff import QQ, ZZ, AbelianInvariants, RingSpec, SparseMatrix

__all__ = ["BACKEND", "QQ", "ZZ", "AbelianInvariants", "RingSpec", "SparseMatrix"]
__version__ = "0.1.0"
