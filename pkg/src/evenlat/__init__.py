"""Exact tools for even unimodular lattices glued from codes over Z/N."""

from .codes import CyclicCode, GqrParams, code_from_rows, gqr_code
from .errors import LatticeError
from .gluing import GluedLattice, glue
from .lattice import GramLattice, discriminant_group
from .theta import extremal_theta

__version__ = "0.1.0"

__all__ = [
    "CyclicCode",
    "GqrParams",
    "GluedLattice",
    "GramLattice",
    "LatticeError",
    "code_from_rows",
    "discriminant_group",
    "extremal_theta",
    "glue",
    "gqr_code",
]
