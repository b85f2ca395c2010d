"""Per-matrix linear algebra over a :class:`Field`.

Matrices are 2-D ``uint8`` numpy arrays of element codes; vectors are 1-D.
Over F_2 row reduction packs each row into a Python int and eliminates with
XOR, which is much faster than table lookups for the small sizes used here.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import Field


class NotNilpotent(ValueError):
    pass


def as_matrix(F: Field, rows) -> np.ndarray:
    m = np.array(rows, dtype=np.int64)
    if m.ndim != 2:
        raise ValueError("expected a 2-D array")
    if m.size and (m.min() < 0 or m.max() >= F.q):
        raise ValueError(f"entries must be field codes in range({F.q})")
    return m.astype(np.uint8)


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.uint8)


def matmul(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, np.uint8)
    B = np.asarray(B, np.uint8)
    if A.shape[-1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    if F.is_prime:
        return ((A.astype(np.int64) @ B.astype(np.int64)) % F.p).astype(np.uint8)
    prods = F.mul_t[A[:, :, None], B[None, :, :]]  # (i, j, k)
    out = prods[:, 0]
    for j in range(1, A.shape[1]):
        out = F.add_t[out, prods[:, j]]
    return out


def matvec(F: Field, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matmul(F, A, np.asarray(v, np.uint8)[:, None])[:, 0]


def madd(F: Field, A, B) -> np.ndarray:
    return F.add_t[np.asarray(A, np.uint8), np.asarray(B, np.uint8)]


def scale(F: Field, c: int, A) -> np.ndarray:
    return F.mul_t[c, np.asarray(A, np.uint8)]


def dot(F: Field, u, v) -> int:
    prods = F.mul_t[np.asarray(u, np.uint8), np.asarray(v, np.uint8)]
    acc = 0
    for x in prods:
        acc = F.add_t[acc, x]
    return int(acc)


def matrix_power(F: Field, A: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        raise ValueError("negative power")
    out = identity(A.shape[0])
    base = np.asarray(A, np.uint8)
    while k:
        if k & 1:
            out = matmul(F, out, base)
        base = matmul(F, base, base)
        k >>= 1
    return out


def _rref_f2(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows = [int(sum(int(b) << j for j, b in enumerate(r))) for r in M]
    ncols = M.shape[1]
    pivots = []
    r = 0
    for c in range(ncols):
        bit = 1 << c
        hit = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if hit is None:
            continue
        rows[r], rows[hit] = rows[hit], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
    R = np.array([[(x >> j) & 1 for j in range(ncols)] for x in rows], np.uint8).reshape(M.shape)
    return R, pivots


def rref(F: Field, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = np.array(M, np.uint8, ndmin=2)
    if M.size == 0:
        return M.copy(), []
    if F.q == 2:
        return _rref_f2(M)
    R = M.copy()
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        R[[r, i]] = R[[i, r]]
        R[r] = F.mul_t[F.inv_t[R[r, c]], R[r]]
        for k in range(nrows):
            if k != r and R[k, c]:
                R[k] = F.sub_t[R[k], F.mul_t[R[k, c], R[r]]]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R, pivots


def rank(F: Field, M) -> int:
    return len(rref(F, M)[1])


def kernel_basis(F: Field, M) -> np.ndarray:
    """Rows form a basis of ``{w : M w = 0}``."""
    M = np.array(M, np.uint8, ndmin=2)
    ncols = M.shape[1]
    R, pivots = rref(F, M)
    free = [c for c in range(ncols) if c not in pivots]
    out = np.zeros((len(free), ncols), np.uint8)
    for k, f in enumerate(free):
        out[k, f] = 1
        for r, p in enumerate(pivots):
            out[k, p] = F.neg_t[R[r, f]]
    return out


def row_basis(F: Field, vectors) -> np.ndarray:
    """A basis (rows, in reduced echelon form) of the span of the given rows."""
    V = np.array(vectors, np.uint8, ndmin=2)
    if V.size == 0:
        return V.reshape(0, V.shape[-1] if V.ndim == 2 else 0)
    R, pivots = rref(F, V)
    return R[: len(pivots)]


def image_basis(F: Field, M) -> np.ndarray:
    """Rows spanning the column space of ``M``."""
    return row_basis(F, np.asarray(M, np.uint8).T)


def span_dim(F: Field, vectors) -> int:
    V = np.array(vectors, np.uint8, ndmin=2)
    return 0 if V.size == 0 else rank(F, V)


def contains(F: Field, basis, vectors) -> bool:
    """Is every row of ``vectors`` in the row span of ``basis``?"""
    vectors = np.array(vectors, np.uint8, ndmin=2)
    if vectors.size == 0:
        return True
    basis = np.array(basis, np.uint8, ndmin=2).reshape(-1, vectors.shape[1])
    return span_dim(F, np.vstack([basis, vectors])) == span_dim(F, basis)


def same_span(F: Field, a, b) -> bool:
    return contains(F, a, b) and contains(F, b, a)


def solve_coords(F: Field, basis, vectors) -> np.ndarray:
    """Coordinates ``C`` with ``C @ basis = vectors``; ``basis`` must be independent."""
    basis = np.array(basis, np.uint8, ndmin=2)
    vectors = np.array(vectors, np.uint8, ndmin=2)
    k = basis.shape[0]
    # Solve basis^T c = v for each v, via row reduction of [basis^T | vectors^T].
    aug = np.hstack([basis.T, vectors.T])
    R, pivots = rref(F, aug)
    if pivots[:k] != list(range(k)) or any(p >= k for p in pivots):
        raise ValueError("vector not in span, or basis dependent")
    return R[:k, k:].T.copy()


def is_nilpotent(F: Field, A) -> bool:
    d = A.shape[0]
    k = 1
    while k < d:
        k *= 2
    return not matrix_power(F, A, k).any()


def rank_profile(F: Field, A) -> list[int]:
    """``[rank A^0, rank A^1, ..., rank A^d]``."""
    d = A.shape[0]
    out = [d]
    P = identity(d)
    for _ in range(d):
        P = matmul(F, P, A)
        out.append(rank(F, P))
    return out


def partition_from_profile(profile: Sequence[int]) -> tuple[int, ...]:
    """Jordan type from ranks of successive powers of a nilpotent matrix."""
    at_least = [profile[k - 1] - profile[k] for k in range(1, len(profile))]
    parts = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        parts += [k] * exact
    return tuple(parts)


def jordan_type(F: Field, A) -> tuple[int, ...]:
    A = np.asarray(A, np.uint8)
    prof = rank_profile(F, A)
    if prof[-1] != 0:
        raise NotNilpotent("matrix is not nilpotent")
    lam = partition_from_profile(prof)
    assert sum(lam) == A.shape[0]
    return lam


def jordan_block_matrix(lam: Sequence[int]) -> np.ndarray:
    """Block-diagonal nilpotent with blocks of the given sizes (ones above the diagonal)."""
    d = sum(lam)
    M = np.zeros((d, d), np.uint8)
    pos = 0
    for m in lam:
        for i in range(m - 1):
            M[pos + i, pos + i + 1] = 1
        pos += m
    return M
