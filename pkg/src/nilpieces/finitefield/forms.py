"""Fixed bilinear and quadratic forms, and Lie algebra membership.

Coordinates are 0-based in code.  In characteristic 2:

* on ``V`` (dimension 2n) the form is ``<a, b> = sum_i a_i b_{2n-1-i}`` and
  ``Q(a) = a_0 a_{2n-1} + ... + a_{n-1} a_n``;
* on ``V~ = F e_0 + V`` (dimension 2n+1) coordinate 0 is ``e_0``,
  ``Q~(a e_0 + v) = a^2 + Q(v)`` and the polar form has ``e_0`` as radical.

In odd characteristic the symplectic form is ``<e_i, e_{2n-1-i}> = 1`` for
``i < n`` and ``-1`` for ``i >= n``, and the orthogonal form on a space of
dimension 2n+1 is the symmetric antidiagonal one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import CharacteristicError, Field
from . import linalg


@dataclass(frozen=True, eq=False)
class FormContext:
    field: Field
    dim: int
    kind: str  # "V" (char 2, even), "Vtilde" (char 2, odd), "symplectic", "orthogonal"
    gram: np.ndarray

    @property
    def n(self) -> int:
        return self.dim // 2

    @property
    def char2(self) -> bool:
        return self.field.p == 2

    @property
    def offset(self) -> int:
        """Index of the first coordinate of ``V`` (1 on ``V~``, else 0)."""
        return 1 if self.kind == "Vtilde" else 0


def form_context(F: Field, dim: int) -> FormContext:
    n = dim // 2
    G = np.zeros((dim, dim), np.uint8)
    if F.p == 2:
        kind = "V" if dim % 2 == 0 else "Vtilde"
        off = dim % 2
        for i in range(2 * n):
            G[off + i, off + 2 * n - 1 - i] = 1
    elif dim % 2 == 0:
        kind = "symplectic"
        for i in range(dim):
            G[i, dim - 1 - i] = 1 if i < n else F.neg(1)
    else:
        kind = "orthogonal"
        for i in range(dim):
            G[i, dim - 1 - i] = 1
    G.flags.writeable = False
    return FormContext(F, dim, kind, G)


def _check(ctx: FormContext, *vs):
    for v in vs:
        if len(v) != ctx.dim:
            raise ValueError(f"vector of length {len(v)} in a space of dimension {ctx.dim}")


def form_eval(ctx: FormContext, v, w) -> int:
    _check(ctx, v, w)
    F = ctx.field
    return linalg.dot(F, v, linalg.matvec(F, ctx.gram, w))


def quad_eval(ctx: FormContext, v) -> int:
    if not ctx.char2:
        raise CharacteristicError("quadratic forms are only fixed in characteristic 2")
    _check(ctx, v)
    F = ctx.field
    off, n = ctx.offset, ctx.n
    acc = F.mul(v[0], v[0]) if off else 0
    for i in range(n):
        acc = F.add(acc, F.mul(v[off + i], v[off + 2 * n - 1 - i]))
    return acc


def gram_matrix(ctx: FormContext, A, B) -> np.ndarray:
    """``[<a_i, b_j>]`` for rows ``a_i`` of ``A`` and ``b_j`` of ``B``."""
    F = ctx.field
    A = np.array(A, np.uint8, ndmin=2)
    B = np.array(B, np.uint8, ndmin=2)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((A.shape[0], B.shape[0]), np.uint8)
    return linalg.matmul(F, linalg.matmul(F, A, ctx.gram), B.T)


def perp(ctx: FormContext, basis) -> np.ndarray:
    """Basis (rows) of the orthogonal complement of the row span of ``basis``."""
    basis = np.array(basis, np.uint8, ndmin=2).reshape(-1, ctx.dim)
    if basis.shape[0] == 0:
        return linalg.identity(ctx.dim)
    return linalg.kernel_basis(ctx.field, linalg.matmul(ctx.field, basis, ctx.gram))


def is_skew_adjoint(ctx: FormContext, m) -> bool:
    """``<mv, w> + <v, mw> = 0`` for all v, w."""
    F = ctx.field
    m = np.asarray(m, np.uint8)
    left = linalg.matmul(F, m.T, ctx.gram)
    right = linalg.matmul(F, ctx.gram, m)
    return not F.add_t[left, right].any()


def in_sp(ctx: FormContext, m) -> bool:
    m = np.asarray(m, np.uint8)
    if ctx.kind == "V":
        d = ctx.dim
        return all(m[i, j] == m[d - 1 - j, d - 1 - i] for i in range(d) for j in range(d))
    if ctx.kind == "symplectic":
        return is_skew_adjoint(ctx, m)
    raise ValueError(f"no symplectic Lie algebra on a {ctx.kind} space")


def in_oV(ctx: FormContext, m) -> bool:
    m = np.asarray(m, np.uint8)
    if ctx.kind == "V":
        d = ctx.dim
        return in_sp(ctx, m) and all(m[i, d - 1 - i] == 0 for i in range(d))
    if ctx.kind == "orthogonal":
        return is_skew_adjoint(ctx, m)
    raise ValueError(f"no orthogonal Lie algebra on a {ctx.kind} space")


def in_oVtilde(ctx: FormContext, m) -> bool:
    if ctx.kind != "Vtilde":
        raise ValueError("in_oVtilde needs the characteristic-2 space of odd dimension")
    m = np.asarray(m, np.uint8)
    if m[:, 0].any():
        return False
    inner = form_context(ctx.field, ctx.dim - 1)
    return in_oV(inner, m[1:, 1:])


def symplectic_basis(ctx: FormContext, vectors) -> np.ndarray:
    """Reorder/transform a basis of a nondegenerate subspace into standard position.

    Returns rows ``f_0, ..., f_{2k-1}`` spanning the same subspace with
    ``<f_i, f_{2k-1-i}> = 1`` for ``i < k`` and all other pairings zero
    (for ``i >= k`` the pairing is then ``-1`` by skew-symmetry).
    """
    F = ctx.field
    pool = [np.array(v, np.uint8) for v in np.array(vectors, np.uint8, ndmin=2).reshape(-1, ctx.dim)]
    es, fs = [], []
    while pool:
        e = pool.pop(0)
        if not e.any():
            continue
        pair = next((k for k, w in enumerate(pool) if form_eval(ctx, e, w)), None)
        if pair is None:
            raise ValueError("subspace is degenerate")
        f = pool.pop(pair)
        f = linalg.scale(F, F.inv(form_eval(ctx, e, f)), f)
        new = []
        for z in pool:
            # z - <z,f> e + <z,e> f is orthogonal to both e and f
            z = F.sub_t[z, linalg.scale(F, form_eval(ctx, z, f), e)]
            z = F.add_t[z, linalg.scale(F, form_eval(ctx, z, e), f)]
            new.append(z)
        pool = new
        es.append(e)
        fs.append(f)
    out = np.array(es + fs[::-1], np.uint8).reshape(-1, ctx.dim)
    return out
