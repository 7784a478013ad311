"""Construction and exhaustive verification of (t mod q)-arcs in PG(r, q)."""

from .arc import Arc, classify_mod, is_strong, spectrum
from .gf import GF, FiniteField, field_new
from .pg import ProjSpace, build_space

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "FiniteField",
    "GF",
    "ProjSpace",
    "build_space",
    "classify_mod",
    "field_new",
    "is_strong",
    "spectrum",
]
