"""Exact lattice point counts of compactified moduli spaces.

The package computes the counting functions N̄_{g,n}(b_1, …, b_n) by two
independent exact methods — a combinatorial recursion on the boundary
parameters and a residue recursion on the spectral curve x = z + 1/z,
y = z — together with the quantities derived from them: parity-split
polynomial forms, orbifold Euler characteristics, intersection numbers,
and the string/dilaton residue identities used to cross-certify everything.
"""

from __future__ import annotations

from .lattice import (
    euler_char,
    is_stable,
    nbar_eval,
    nbar_eval_asym,
    nbar_poly,
    positivity_report,
    psi_number,
)
from .quasipoly import (
    QuasiPolynomial,
    qp_fit,
    qp_from_json,
    qp_from_xi_tensor,
    qp_parse,
    qp_serialize,
    qp_to_json,
    qp_to_xi_tensor,
)

__version__ = "0.1.0"

__all__ = [
    "QuasiPolynomial",
    "euler_char",
    "is_stable",
    "nbar_eval",
    "nbar_eval_asym",
    "nbar_poly",
    "positivity_report",
    "psi_number",
    "qp_fit",
    "qp_from_json",
    "qp_from_xi_tensor",
    "qp_parse",
    "qp_serialize",
    "qp_to_json",
    "qp_to_xi_tensor",
    "__version__",
]
