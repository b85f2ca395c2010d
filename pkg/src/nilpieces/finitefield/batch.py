"""Vectorized linear algebra over stacks of small matrices.

A stack is a ``(N, d, d)`` uint8 array of field codes.  Row reduction works
on all matrices at once without row swaps: for each column, every matrix
picks its first unused row with a nonzero entry there as pivot row.

Over F_2 there is also a packed representation ``(N, d)`` where row ``i``
is an integer with bit ``j`` set iff entry ``(i, j)`` is 1.
"""

from __future__ import annotations

import numpy as np

from .field import Field


def bmatmul(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if F.is_prime:
        out = np.matmul(A.astype(np.int32), B.astype(np.int32))
        return (out % F.p).astype(np.uint8)
    d = A.shape[-1]
    acc = F.mul_t[A[..., :, 0, None], B[..., None, 0, :]]
    for j in range(1, d):
        acc = F.add_t[acc, F.mul_t[A[..., :, j, None], B[..., None, j, :]]]
    return acc


def bmatvec(F: Field, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``A[k] @ v[k]`` for stacks ``A (N,d,e)`` and ``v (N,e)``."""
    return bmatmul(F, A, v[..., None])[..., 0]


def bpowers(F: Field, A: np.ndarray, kmax: int) -> list[np.ndarray]:
    """``[A^0, A^1, ..., A^kmax]``."""
    N, d, _ = A.shape
    out = [np.broadcast_to(np.eye(d, dtype=np.uint8), A.shape).copy()]
    for _ in range(kmax):
        out.append(bmatmul(F, out[-1], A))
    return out


def _nilpotency_exponent(d: int) -> int:
    k = 1
    while k < d:
        k *= 2
    return k


def nilpotent_mask(F: Field, A: np.ndarray) -> np.ndarray:
    """Which matrices satisfy ``A^(2^ceil(log2 d)) = 0`` (repeated squaring)."""
    d = A.shape[-1]
    if F.q == 2:
        P = pack_f2(A)
        for _ in range(_nilpotency_exponent(d).bit_length() - 1):
            P = packed_matmul_f2(P, P, d)
        return ~P.any(axis=1)
    P = A
    for _ in range(_nilpotency_exponent(d).bit_length() - 1):
        P = bmatmul(F, P, P)
    return ~P.reshape(len(P), -1).any(axis=1)


def beliminate(F: Field, A: np.ndarray):
    """Batched reduced row reduction without swaps.

    Returns ``(R, pivot_row, rank)``; ``pivot_row[k, c]`` is the row of ``R[k]``
    holding the pivot of column ``c`` (or -1 for a free column).
    """
    R = np.array(A, np.uint8, copy=True)
    N, nr, nc = R.shape
    used = np.zeros((N, nr), bool)
    pivot_row = np.full((N, nc), -1, np.int64)
    for c in range(nc):
        has = (R[:, :, c] != 0) & ~used
        idx = np.nonzero(has.any(axis=1))[0]
        if idx.size == 0:
            continue
        h = np.arange(idx.size)
        piv = has[idx].argmax(axis=1)
        sub = R[idx]
        prow = sub[h, piv]
        prow = F.mul_t[F.inv_t[prow[:, c]][:, None], prow]
        factors = sub[:, :, c].copy()
        factors[h, piv] = 0
        sub = F.sub_t[sub, F.mul_t[factors[:, :, None], prow[:, None, :]]]
        sub[h, piv] = prow
        R[idx] = sub
        used[idx, piv] = True
        pivot_row[idx, c] = piv
    return R, pivot_row, used.sum(axis=1)


def brank(F: Field, A: np.ndarray) -> np.ndarray:
    if F.q == 2:
        return packed_rank_f2(pack_f2(A), A.shape[-1])
    return beliminate(F, A)[2]


def bnullspace(F: Field, A: np.ndarray) -> np.ndarray:
    """Kernel bases as columns: ``K[k][:, f]`` for each free column ``f``, zero otherwise."""
    R, pivot_row, _ = beliminate(F, A)
    N, _, nc = R.shape
    free = pivot_row < 0
    K = np.zeros((N, nc, nc), np.uint8)
    diag = np.arange(nc)
    K[:, diag, diag] = free
    rows = np.where(free, 0, pivot_row)
    vals = R[np.arange(N)[:, None], rows, :]  # vals[k, p, f] = R[k, pivot_row[k, p], f]
    mask = (~free)[:, :, None] & free[:, None, :]
    K = np.where(mask, F.neg_t[vals], K)
    return K


def rank_profiles(F: Field, A: np.ndarray) -> np.ndarray:
    """``(N, d+1)`` array of ranks of ``A^0, ..., A^d``."""
    N, d, _ = A.shape
    prof = np.empty((N, d + 1), np.int64)
    prof[:, 0] = d
    if F.q == 2:
        P = pack_f2(A)
        cur = P.copy()
        for k in range(1, d + 1):
            prof[:, k] = packed_rank_f2(cur, d)
            cur = packed_matmul_f2(cur, P, d)
        return prof
    cur = A
    for k in range(1, d + 1):
        prof[:, k] = beliminate(F, cur)[2]
        cur = bmatmul(F, cur, A)
    return prof


# ------------------------------------------------------------------ F_2 packed


def pack_f2(A: np.ndarray) -> np.ndarray:
    d = A.shape[-1]
    if d > 16:
        raise ValueError("packed F_2 rows support at most 16 columns")
    weights = (1 << np.arange(d)).astype(np.uint16)
    return (A.astype(np.uint16) * weights).sum(axis=-1).astype(np.uint16)


def unpack_f2(P: np.ndarray, d: int) -> np.ndarray:
    return ((P[..., None] >> np.arange(d, dtype=np.uint16)) & 1).astype(np.uint8)


def packed_matmul_f2(A: np.ndarray, B: np.ndarray, d: int) -> np.ndarray:
    C = np.zeros_like(A)
    for j in range(d):
        C ^= ((A >> j) & 1) * B[:, j : j + 1]
    return C


def packed_rank_f2(P: np.ndarray, d: int) -> np.ndarray:
    P = P.copy()
    N, nr = P.shape
    ar = np.arange(N)
    used = np.zeros((N, nr), bool)
    rank = np.zeros(N, np.int64)
    for c in range(d):
        bit = ((P >> c) & 1).astype(bool)
        cand = bit & ~used
        found = cand.any(axis=1)
        piv = cand.argmax(axis=1)
        prow = P[ar, piv]
        hit = bit & found[:, None]
        hit[ar, piv] = False
        P ^= np.where(hit, prow[:, None], 0).astype(P.dtype)
        used[ar[found], piv[found]] = True
        rank += found
    return rank
