"""Comprehensive involutive systems for parametric polynomial ideals."""

from .engine import Cell, Specification, cominvsys
from .involution import DivisionSpec, gbi
from .polyalg import MonomialOrder, Poly, PolyRing

__all__ = [
    "Cell",
    "Specification",
    "cominvsys",
    "DivisionSpec",
    "gbi",
    "MonomialOrder",
    "Poly",
    "PolyRing",
]
__version__ = "0.1.0"
