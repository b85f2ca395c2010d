"""Bipartition combinatorics, point-count polynomials and finite-field censuses
for the exotic nilpotent cone and the classical nilpotent cones of types B and C.

Subpackages: :mod:`nilpieces.finitefield` (exact linear algebra over small
fields) and :mod:`nilpieces.cones` (points, classification, censuses and
adapted filtrations).
"""

from .combinatorics import Bipartition, bip, enumerate_bipartitions, preceq
from .maps import (
    collapse_B,
    collapse_C,
    collapse_special,
    collapse_tilde,
    hat_phi_B,
    hat_phi_C,
    phi_B,
    phi_B2,
    phi_C,
)
from .polycount import (
    IntPolynomial,
    b2_orbit_poly,
    exotic_point_poly,
    piece_poly,
    typeB_point_poly,
    typeC_point_poly,
    verify_identities,
)

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "IntPolynomial",
    "b2_orbit_poly",
    "bip",
    "collapse_B",
    "collapse_C",
    "collapse_special",
    "collapse_tilde",
    "enumerate_bipartitions",
    "exotic_point_poly",
    "hat_phi_B",
    "hat_phi_C",
    "phi_B",
    "phi_B2",
    "phi_C",
    "piece_poly",
    "preceq",
    "typeB_point_poly",
    "typeC_point_poly",
    "verify_identities",
]
