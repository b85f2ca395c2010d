"""Exact linear algebra over small finite fields with fixed form conventions."""

from .field import CharacteristicError, Field, frobenius_sqrt, get_field
from .forms import (
    FormContext,
    form_context,
    form_eval,
    gram_matrix,
    in_oV,
    in_oVtilde,
    in_sp,
    perp,
    quad_eval,
    symplectic_basis,
)
from .linalg import (
    NotNilpotent,
    as_matrix,
    identity,
    is_nilpotent,
    jordan_block_matrix,
    jordan_type,
    kernel_basis,
    matmul,
    matrix_power,
    matvec,
    rank,
    rref,
)

__all__ = [
    "CharacteristicError",
    "Field",
    "FormContext",
    "NotNilpotent",
    "as_matrix",
    "form_context",
    "form_eval",
    "frobenius_sqrt",
    "get_field",
    "gram_matrix",
    "identity",
    "in_oV",
    "in_oVtilde",
    "in_sp",
    "is_nilpotent",
    "jordan_block_matrix",
    "jordan_type",
    "kernel_basis",
    "matmul",
    "matrix_power",
    "matvec",
    "perp",
    "quad_eval",
    "rank",
    "rref",
    "symplectic_basis",
]
