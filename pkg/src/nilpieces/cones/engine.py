"""Vectorized classification of stacks of nilpotent matrices.

These are the batched counterparts of the per-point classifiers in
:mod:`nilpieces.cones.classify`; the two are compared in the tests.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .. import maps
from ..combinatorics import Bipartition, enumerate_bipartitions
from ..finitefield import Field
from ..finitefield import batch
from ..finitefield.linalg import partition_from_profile


def decode_digits(start: int, stop: int, q: int, ndigits: int) -> np.ndarray:
    """Base-``q`` digits (least significant first) of ``range(start, stop)``."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, ndigits), np.uint8)
    for k in range(ndigits):
        out[:, k] = idx % q
        idx //= q
    return out


def encode_digits(D: np.ndarray, q: int) -> np.ndarray:
    w = q ** np.arange(D.shape[1], dtype=np.int64)
    return D.astype(np.int64) @ w


def skew_symmetric_stack(digits: np.ndarray, d: int, strict: bool) -> np.ndarray:
    """Matrices symmetric about the skew diagonal from their free entries."""
    N = digits.shape[0]
    I, J = zip(*[(i, j) for i in range(d) for j in range(d) if (i + j < d - 1 if strict else i + j <= d - 1)])
    I, J = np.array(I), np.array(J)
    Y = np.zeros((N, d, d), np.uint8)
    Y[:, I, J] = digits
    Y[:, d - 1 - J, d - 1 - I] = digits
    return Y


def free_entries(Y: np.ndarray, strict: bool) -> np.ndarray:
    d = Y.shape[-1]
    I, J = zip(*[(i, j) for i in range(d) for j in range(d) if (i + j < d - 1 if strict else i + j <= d - 1)])
    return Y[:, np.array(I), np.array(J)]


def psi_stack(F: Field, V: np.ndarray, X: np.ndarray) -> np.ndarray:
    """``s(v) + x`` for stacks."""
    S = F.mul_t[V[:, :, None], V[:, None, ::-1]]
    return F.add_t[S, X]


def psi_tilde_stack(V: np.ndarray, X: np.ndarray) -> np.ndarray:
    N, d = V.shape
    Y = np.zeros((N, d + 1, d + 1), np.uint8)
    Y[:, 0, 1:] = V[:, ::-1]
    Y[:, 1:, 1:] = X
    return Y


def jordan_types(F: Field, Y: np.ndarray) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Per-matrix index into a list of distinct Jordan types."""
    prof = batch.rank_profiles(F, Y)
    if (prof[:, -1] != 0).any():
        raise ValueError("stack contains non-nilpotent matrices")
    uniq, inv = np.unique(prof, axis=0, return_inverse=True)
    return inv.reshape(-1), [partition_from_profile(list(r)) for r in uniq]


def _gram_apply(ctx_perm: np.ndarray, ctx_sign: np.ndarray, F: Field, Z: np.ndarray) -> np.ndarray:
    """``G @ Z`` for a signed-permutation Gram matrix ``G``."""
    out = Z[:, ctx_perm, :]
    if (ctx_sign != 1).any():
        out = F.mul_t[ctx_sign[None, :, None], out]
    return out


def _column_reduce(F: Field, P: np.ndarray) -> np.ndarray:
    """Sum over axis 1 of a stack of products."""
    acc = P[:, 0]
    for i in range(1, P.shape[1]):
        acc = F.add_t[acc, P[:, i]]
    return acc


def hesselink_sp_stack(F: Field, Y: np.ndarray, lam: tuple[int, ...]) -> np.ndarray:
    """Batched ``chi`` for matrices of one Jordan type; one column per distinct part (ascending)."""
    N, d, _ = Y.shape
    pw = batch.bpowers(F, Y, d)
    zero = np.zeros_like(Y)
    perm = np.arange(d)[::-1]
    sign = np.ones(d, np.uint8)  # char 2 Gram: antidiagonal ones
    parts = sorted(set(lam))
    out = np.full((N, len(parts)), -1, np.int64)
    for c, m in enumerate(parts):
        K = batch.bnullspace(F, pw[m])
        for j in range(m + 1):
            M = pw[2 * j + 1] if 2 * j + 1 <= d else zero
            MK = batch.bmatmul(F, M, K)
            vals = _column_reduce(F, F.mul_t[K, _gram_apply(perm, sign, F, MK)])
            hit = ~vals.any(axis=1) & (out[:, c] < 0)
            out[hit, c] = j
        if (out[:, c] < 0).any():
            raise maps.ClassificationError(f"no Hesselink value found for part {m}")
    return out


def hesselink_o_stack(F: Field, Y: np.ndarray, lam: tuple[int, ...]) -> np.ndarray:
    """Batched ``chi~`` on the odd-dimensional characteristic-2 space (coordinate 0 = e_0)."""
    N, D, _ = Y.shape
    n = (D - 1) // 2
    pw = batch.bpowers(F, Y, D)
    perm = np.concatenate([[0], np.arange(1, D)[::-1]])
    parts = sorted(set(lam))
    out = np.full((N, len(parts)), -1, np.int64)
    for c, m in enumerate(parts):
        K = batch.bnullspace(F, pw[m])
        for j in range(m + 1):
            Z = batch.bmatmul(F, pw[j], K)  # columns y^j w
            sq = F.mul_t[Z[:, 0], Z[:, 0]]
            cross = F.mul_t[Z[:, 1 : n + 1], Z[:, D - 1 : n : -1]]
            qvals = F.add_t[sq, _column_reduce(F, cross)] if n else sq
            GZ = Z[:, perm, :].copy()
            GZ[:, 0, :] = 0
            gram = batch.bmatmul(F, np.transpose(Z, (0, 2, 1)), GZ)
            ok = ~qvals.any(axis=1) & ~gram.reshape(N, -1).any(axis=1)
            hit = ok & (out[:, c] < 0)
            out[hit, c] = j
        if (out[:, c] < 0).any():
            raise maps.ClassificationError(f"no Hesselink value found for part {m}")
    return out


@lru_cache(maxsize=None)
def label_index(n: int) -> dict[Bipartition, int]:
    return {bp: k for k, bp in enumerate(enumerate_bipartitions(n))}


def classify_stack(F: Field, Y: np.ndarray, kind: str, n: int) -> tuple[np.ndarray, np.ndarray, list]:
    """Label indices (into ``enumerate_bipartitions(n)``) for a stack of nilpotents.

    ``kind`` is ``"C2"``, ``"B2"``, ``"C-odd"`` or ``"B-odd"``.  Also returns
    the Jordan-type index per matrix and the list of Jordan types.
    """
    index = label_index(n)
    N = Y.shape[0]
    labels = np.full(N, -1, np.int64)
    jt_idx, jts = jordan_types(F, Y) if N else (np.zeros(0, np.int64), [])
    for t, lam in enumerate(jts):
        sel = np.nonzero(jt_idx == t)[0]
        if kind in ("C-odd", "B-odd"):
            try:
                bp = maps.hat_phi_C(lam) if kind == "C-odd" else maps.hat_phi_B(lam)
            except ValueError as e:
                raise maps.ClassificationError(str(e)) from e
            labels[sel] = index[bp]
            continue
        if kind == "C2":
            chi = hesselink_sp_stack(F, Y[sel], lam)
            invert = maps.invert_jordan_C
        elif kind == "B2":
            chi = hesselink_o_stack(F, Y[sel], lam)
            invert = maps.invert_jordan_B2
        else:
            raise ValueError(f"unknown classification kind {kind!r}")
        parts = sorted(set(lam))
        rows, inv = np.unique(chi, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        for r, row in enumerate(rows):
            h = maps.HesselinkIndex.from_mapping(dict(zip(parts, (int(a) for a in row))))
            labels[sel[inv == r]] = index[invert(lam, h)]
    assert (labels >= 0).all()
    return labels, jt_idx, jts
