"""Representation matrices, relation checks and structural operations."""

from .build import Representation, RepError, build_rep
from .sparse import SparseMatrix

__all__ = ["Representation", "RepError", "SparseMatrix", "build_rep"]
