"""Points of the exotic cone and the characteristic-2 maps into the classical cones."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..finitefield import CharacteristicError, Field, form_context, frobenius_sqrt, in_oV, linalg


@dataclass(frozen=True, eq=False)
class ExoticPoint:
    """A pair ``(v, x)`` with ``x`` nilpotent and ``<xw, w> = 0`` for all ``w``."""

    field: Field
    v: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, np.uint8)
        x = np.asarray(self.x, np.uint8)
        if x.shape != (len(v), len(v)) or len(v) % 2:
            raise ValueError("need v of even length 2n and x of shape (2n, 2n)")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return len(self.v) // 2

    def validate(self) -> None:
        ctx = form_context(self.field, 2 * self.n)
        if not in_exotic_S(ctx, self.x):
            raise ValueError("x does not kill the form on the diagonal")
        if not linalg.is_nilpotent(self.field, self.x):
            raise ValueError("x is not nilpotent")


def in_exotic_S(ctx, x) -> bool:
    """``<xw, w> = 0`` for all ``w``: the Gram matrix of ``(w, z) -> <xw, z>`` is alternating."""
    F = ctx.field
    M = linalg.matmul(F, x.T.astype(np.uint8), ctx.gram)  # M[i, j] = <x e_i, e_j>
    return not F.add_t[M, M.T].any() and not np.diagonal(M).any()


def _need_char2(F: Field) -> None:
    if F.p != 2:
        raise CharacteristicError("this map only exists in characteristic 2")


def s_section(F: Field, v) -> np.ndarray:
    """The matrix with ``(i, j)`` entry ``a_i a_{2n-1-j}`` (0-based)."""
    _need_char2(F)
    v = np.asarray(v, np.uint8)
    return F.mul_t[v[:, None], v[None, ::-1]]


def pi_map(F: Field, y) -> np.ndarray:
    """Square roots of the antidiagonal entries; left inverse of ``s_section``."""
    _need_char2(F)
    y = np.asarray(y, np.uint8)
    d = y.shape[0]
    return np.array([frobenius_sqrt(F, int(y[i, d - 1 - i])) for i in range(d)], np.uint8)


def psi(F: Field, v, x) -> np.ndarray:
    _need_char2(F)
    return F.add_t[s_section(F, v), np.asarray(x, np.uint8)]


def delta(F: Field, v) -> np.ndarray:
    """``(2n+1)``-square matrix: row 0, column ``i`` (1-based in ``V``) holds ``a_{2n+1-i}``."""
    _need_char2(F)
    v = np.asarray(v, np.uint8)
    d = len(v) + 1
    out = np.zeros((d, d), np.uint8)
    out[0, 1:] = v[::-1]
    return out


def embed(x) -> np.ndarray:
    x = np.asarray(x, np.uint8)
    d = x.shape[0] + 1
    out = np.zeros((d, d), np.uint8)
    out[1:, 1:] = x
    return out


def psi_tilde(F: Field, v, x) -> np.ndarray:
    _need_char2(F)
    return F.add_t[delta(F, v), embed(x)]


def psi_tilde_inverse(F: Field, y) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, np.uint8)
    return y[0, 1:][::-1].copy(), y[1:, 1:].copy()


def point_from_psi_tilde(F: Field, y) -> ExoticPoint:
    v, x = psi_tilde_inverse(F, y)
    return ExoticPoint(F, v, x)


def o_params(d: int, strict: bool) -> list[tuple[int, int]]:
    """Free entries of a matrix symmetric about the skew diagonal.

    ``strict`` drops the skew diagonal itself (the orthogonal case).
    """
    return [(i, j) for i in range(d) for j in range(d) if (i + j < d - 1 if strict else i + j <= d - 1)]


def matrix_from_params(F: Field, d: int, params, strict: bool) -> np.ndarray:
    m = np.zeros((d, d), np.uint8)
    for (i, j), a in zip(o_params(d, strict), params):
        m[i, j] = a
        m[d - 1 - j, d - 1 - i] = a
    return m


def random_exotic_point(F: Field, n: int, rng: np.random.Generator, max_tries: int = 10_000) -> ExoticPoint:
    """Uniform over the exotic cone by rejection sampling on the nilpotency of ``x``."""
    d = 2 * n
    pos = o_params(d, strict=True)
    for _ in range(max_tries):
        x = matrix_from_params(F, d, rng.integers(0, F.q, len(pos)), strict=True)
        if linalg.is_nilpotent(F, x):
            v = rng.integers(0, F.q, d).astype(np.uint8)
            return ExoticPoint(F, v, x)
    raise RuntimeError("no nilpotent sample found")


def check_in_oV(F: Field, x) -> bool:
    return in_oV(form_context(F, np.asarray(x).shape[0]), x)
