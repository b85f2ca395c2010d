"""Maps between bipartitions and Jordan types, collapses, Hesselink indices.

The replacement passes (``phi_C``, ``phi_B``) look at consecutive pairs of the
*original* sequence; a pair ``s < t`` is replaced by two copies of its average.
Overlapping pairs cannot occur for quasi-partition input, and every pass
asserts that.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .combinatorics import (
    INFINITY,
    Bipartition,
    add_parts,
    bipartition_leq,
    canonical,
    duplicate,
    enumerate_bipartitions,
    is_B2_dist,
    is_B_dist,
    is_C_dist,
    is_P2n1B,
    is_P2nC,
    is_special,
    length,
    part,
    preceq,
    b_stat,
    from_quasi_partition,
)


@dataclass(frozen=True)
class HesselinkIndex:
    """Finite map part value -> nonnegative integer, stored sorted by part."""

    items: tuple[tuple[int, int], ...]

    @classmethod
    def from_mapping(cls, m: Mapping[int, int]) -> "HesselinkIndex":
        return cls(tuple(sorted((int(k), int(v)) for k, v in m.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def __getitem__(self, m: int) -> int:
        return self.as_dict()[m]

    def domain(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.items)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}->{v}" for k, v in self.items) + "}"


def _pair_pass(seq: Sequence[int]) -> tuple[list, list[int]]:
    """Replace every consecutive ``s < t`` by its average twice.

    Returns the new sequence (entries may be halves) and the 0-based start
    index of every replaced pair.
    """
    starts = [i for i in range(len(seq) - 1) if seq[i] < seq[i + 1]]
    assert all(b - a >= 2 for a, b in zip(starts, starts[1:])), f"overlapping replacement in {seq}"
    out = list(seq)
    for i in starts:
        out[i] = out[i + 1] = (seq[i] + seq[i + 1]) / 2
    return out, starts


def _doubled(bp: Bipartition) -> list[int]:
    L = max(len(bp.mu), len(bp.nu))
    seq = []
    for i in range(1, L + 1):
        seq += [2 * part(bp.mu, i), 2 * part(bp.nu, i)]
    return seq


def phi_C(bp: Bipartition) -> tuple[int, ...]:
    out, _ = _pair_pass(_doubled(bp))
    assert all(float(x).is_integer() for x in out)
    lam = canonical(int(x) for x in out)
    assert is_P2nC(lam), (bp, lam)
    return lam


def hesselink_C(bp: Bipartition) -> HesselinkIndex:
    seq = _doubled(bp)
    out, starts = _pair_pass(seq)
    altered = set(starts) | {i + 1 for i in starts}
    chi: dict[int, int] = {}

    def put(m, s):
        if m == 0:
            return
        assert chi.get(m, s) == s, f"conflicting Hesselink values at part {m} for {bp}"
        chi[m] = s

    for i in starts:
        put(seq[i] // 2 + seq[i + 1] // 2, seq[i] // 2)
    for i, x in enumerate(seq):
        if i not in altered:
            put(x, x // 2)
    assert set(chi) == set(phi_C(bp))
    return HesselinkIndex.from_mapping(chi)


def hat_phi_C(lam: Sequence[int]) -> Bipartition:
    lam = canonical(lam)
    if not is_P2nC(lam):
        raise ValueError(f"{lam} has an odd part of odd multiplicity")
    out = []
    i = 0
    while i < len(lam):
        a = lam[i]
        if a % 2 == 0:
            out.append(a // 2)
            i += 1
            continue
        run = sum(1 for b in lam if b == a)
        k = a // 2
        out += [k, k + 1] * (run // 2)
        i += run
    bp = from_quasi_partition(out)
    assert is_C_dist(bp)
    return bp


def phi_B(bp: Bipartition) -> tuple[int, ...]:
    L = max(len(bp.mu), len(bp.nu))
    seq = []
    for i in range(1, L + 2):
        seq += [2 * part(bp.mu, i) + 1, 2 * part(bp.nu, i) - 1]
    seq.append(1)
    # seq now ends with the tail pattern 1, -1, 1 at 1-based positions 2L+1..2L+3
    out, _ = _pair_pass(seq)
    assert out[-2:] == [0, 0], f"tail did not collapse for {bp}: {out}"
    assert all(float(x).is_integer() and x >= 0 for x in out)
    lam = canonical(int(x) for x in out)
    assert is_P2n1B(lam), (bp, lam)
    return lam


def hat_phi_B(lam: Sequence[int]) -> Bipartition:
    lam = canonical(lam)
    if not is_P2n1B(lam):
        raise ValueError(f"{lam} is not in P^B (odd weight, even parts of even multiplicity)")
    out = []
    i = 1
    while i <= len(lam):
        a = lam[i - 1]
        if a % 2:
            out.append((a + (-1) ** i) // 2)
            i += 1
            continue
        run = sum(1 for b in lam if b == a)
        k = a // 2
        if i % 2 == 0:
            out += [k] * run
        else:
            out += [k - 1, k + 1] * (run // 2)
        i += run
    bp = from_quasi_partition(out)
    assert is_B_dist(bp)
    return bp


def collapse_C(bp: Bipartition) -> Bipartition:
    return hat_phi_C(phi_C(bp))


def collapse_B(bp: Bipartition) -> Bipartition:
    return hat_phi_B(phi_B(bp))


def collapse_special(bp: Bipartition) -> Bipartition:
    return collapse_B(collapse_C(bp))


def collapse_tilde(bp: Bipartition) -> Bipartition:
    mu, nu = list(bp.mu), list(bp.nu)
    L = max(len(mu), len(nu))
    mu += [0] * (L - len(mu))
    nu += [0] * (L - len(nu))
    for i in range(L):
        r, s = mu[i], nu[i]
        if r < s - 2:
            mu[i], nu[i] = -(-(r + s) // 2) - 1, (r + s) // 2 + 1
    return Bipartition(canonical(mu), canonical(nu))


def _collapse_direct(bp: Bipartition, kind: str) -> Bipartition:
    """Collapse by the explicit pairwise replacement rules.

    Independent of the Phi / hat-Phi round trip; used to cross-check it.
    """
    seq = []
    for i in range(1, max(len(bp.mu), len(bp.nu)) + 2):
        seq += [part(bp.mu, i), part(bp.nu, i)]
    # (mu_i, nu_i) pairs start at even 0-based index, (nu_i, mu_{i+1}) at odd.
    slack = {"C": (1, 1), "B": (2, 0), "special": (1, 0)}[kind]
    starts = [
        i for i in range(len(seq) - 1) if seq[i] < seq[i + 1] - slack[i % 2]
    ]
    assert all(b - a >= 2 for a, b in zip(starts, starts[1:]))
    out = list(seq)
    for i in starts:
        s = seq[i] + seq[i + 1]
        lo, hi = s // 2, -(-s // 2)
        if kind == "C":
            out[i], out[i + 1] = lo, hi
        elif i % 2 == 0:
            out[i], out[i + 1] = (hi - 1, lo + 1) if kind == "B" else (lo, hi)
        else:
            out[i], out[i + 1] = hi, lo
    return from_quasi_partition(out)


def phi_B2(bp: Bipartition) -> tuple[int, ...]:
    lam = list(duplicate(add_parts(bp.mu, bp.nu)))
    pos = 2 * length(bp.nu)  # 0-based index of the (2 l(nu) + 1)-th part
    lam += [0] * (pos + 1 - len(lam))
    lam[pos] += 1
    return canonical(lam)


def hesselink_B2(bp: Bipartition) -> HesselinkIndex:
    if not is_B2_dist(bp):
        raise ValueError(f"{bp} is not in Q^(B,2)")
    ell = length(bp.nu)
    chi: dict[int, int] = {}

    def put(m, val):
        if m == 0:
            return
        assert chi.get(m, val) == val, f"inconsistent Hesselink index for {bp} at part {m}"
        chi[m] = val

    put(part(bp.mu, ell + 1) + 1, part(bp.mu, ell + 1) + 1)
    for i in range(1, max(len(bp.mu), len(bp.nu)) + 1):
        mi = part(bp.mu, i)
        put(mi + part(bp.nu, i), mi + 1 if i <= ell else mi)
    assert set(chi) == set(phi_B2(bp))
    return HesselinkIndex.from_mapping(chi)


@lru_cache(maxsize=None)
def _jordan_table_C(n: int) -> dict:
    table: dict = {}
    for bp in enumerate_bipartitions(n):
        table.setdefault((phi_C(bp), hesselink_C(bp)), []).append(bp)
    return table


@lru_cache(maxsize=None)
def _jordan_table_B2(n: int) -> dict:
    table: dict = {}
    for bp in enumerate_bipartitions(n):
        if is_B2_dist(bp):
            table.setdefault((phi_B2(bp), hesselink_B2(bp)), []).append(bp)
    return table


class ClassificationError(RuntimeError):
    """(Jordan type, Hesselink index) data matched zero or several labels."""


def _lookup(table: dict, lam, chi) -> Bipartition:
    hits = table.get((canonical(lam), chi), [])
    if len(hits) != 1:
        raise ClassificationError(f"{len(hits)} bipartitions match Jordan type {lam} with index {chi}")
    return hits[0]


def invert_jordan_C(lam: Sequence[int], chi: HesselinkIndex) -> Bipartition:
    if sum(lam) % 2:
        raise ClassificationError(f"odd weight {lam}")
    return _lookup(_jordan_table_C(sum(lam) // 2), lam, chi)


def invert_jordan_B2(lam: Sequence[int], chi: HesselinkIndex) -> Bipartition:
    if sum(lam) % 2 == 0:
        raise ClassificationError(f"even weight {lam}")
    return _lookup(_jordan_table_B2(sum(lam) // 2), lam, chi)


_COLLAPSES = {
    "B": (collapse_B, is_B_dist),
    "C": (collapse_C, is_C_dist),
    "special": (collapse_special, is_special),
    "tilde": (collapse_tilde, is_B2_dist),
}


def collapse(kind: str, bp: Bipartition) -> Bipartition:
    return _COLLAPSES[kind][0](bp)


def in_subposet(kind: str, bp: Bipartition) -> bool:
    if kind == "all":
        return True
    return _COLLAPSES[kind][1](bp)


def fiber(kind: str, target: Bipartition, n: int | None = None) -> tuple[Bipartition, ...]:
    """All bipartitions whose ``kind`` collapse is ``target``."""
    n = target.size if n is None else n
    if kind not in _COLLAPSES:
        raise ValueError(f"unknown collapse kind {kind!r}")
    if target.size != n or not in_subposet(kind, target):
        raise ValueError(f"{target} is not a valid {kind} label for n={n}")
    return _fibers(kind, n)[target]


@lru_cache(maxsize=None)
def _fibers(kind: str, n: int) -> dict:
    out: dict = {}
    for bp in enumerate_bipartitions(n):
        out.setdefault(collapse(kind, bp), []).append(bp)
    return {k: tuple(v) for k, v in out.items()}


def preceq_fiber(target: Bipartition) -> tuple[Bipartition, ...]:
    return tuple(bp for bp in enumerate_bipartitions(target.size) if preceq(bp, target))


# ---------------------------------------------------------------- filtrations


def lambda_filtration_dim(lam: Sequence[int], a: int) -> int:
    """Dimension of ``V_{>=a}`` in a lambda-filtration; ``dim V = 2*(|lam|//2)``."""
    lam = canonical(lam)
    if a >= 1:
        return sum(max(-(-(m - a) // 2), 0) for m in lam)
    return 2 * (sum(lam) // 2) - lambda_filtration_dim(lam, 1 - a)


def grading_dims(lam: Sequence[int]) -> dict[int, int]:
    """Weight-space dimensions of a Jacobson-Morozov grading of Jordan type ``lam``."""
    c: Counter = Counter()
    for m in canonical(lam):
        for w in range(m - 1, -m, -2):
            c[w] += 1
    return dict(sorted(c.items(), reverse=True))


def filtration_grading(lam: Sequence[int]) -> dict[int, int]:
    """``dim V_a = dim V_{>=a} - dim V_{>=a+1}`` for the lambda-filtration of ``V``."""
    lam = canonical(lam)
    top = lam[0] if lam else 1
    out = {}
    for a in range(top, -top - 1, -1):
        d = lambda_filtration_dim(lam, a) - lambda_filtration_dim(lam, a + 1)
        if d:
            out[a] = d
    return out


def _graded_ge(dims: Mapping[int, int], c: int, symmetric: bool) -> int:
    """Dimension of the degree ``>= c`` part of S^2 (or Lambda^2) of a graded space."""
    total = 0
    keys = sorted(dims)
    for i, a in enumerate(keys):
        for b in keys[i:]:
            if a + b < c:
                continue
            if a == b:
                total += comb(dims[a] + (1 if symmetric else 0), 2)
            else:
                total += dims[a] * dims[b]
    return total


def _cross_terms(dims: Mapping[int, int]) -> int:
    return sum(
        dims.get(a, 0) * dims.get(b, 0)
        for a in dims
        if a >= 2
        for b in range(1 - a, a - 1)
    )


def sp_ge2_dim(dims: Mapping[int, int]) -> int:
    return sum(comb(d + 1, 2) for a, d in dims.items() if a >= 1) + _cross_terms(dims)


def s_ge2_dim(dims: Mapping[int, int]) -> int:
    """Same shape for the alternating part; also used for o(V~)_{>=2}."""
    return sum(comb(d, 2) for a, d in dims.items() if a >= 1) + _cross_terms(dims)


@dataclass
class ResolutionDims:
    bp: Bipartition
    kind: str
    lam: tuple[int, ...]
    flag_dim: int
    v_dim: int
    s_dim: int
    expected: int
    checks: dict

    @property
    def total(self) -> int:
        return self.flag_dim + self.v_dim + self.s_dim

    @property
    def ok(self) -> bool:
        return self.total == self.expected and all(self.checks.values())


def resolution_dim_check(bp: Bipartition, kind: str) -> ResolutionDims:
    n = bp.size
    expected = 2 * (n * n - b_stat(bp))
    if kind == "C":
        if not is_C_dist(bp):
            raise ValueError(f"{bp} is not C-distinguished")
        lam = phi_C(bp)
        dims = filtration_grading(lam)
        flag = _graded_ge(dims, 1, symmetric=True)
        v_dim = lambda_filtration_dim(lam, 1)
        s_dim = s_ge2_dim(dims)
        checks = {
            "grading matches Jacobson-Morozov weights": dims == grading_dims(lam),
            "sp_>=2 = V_>=1 + S_>=2": sp_ge2_dim(dims) == v_dim + s_dim,
            "sp_>=2 matches S^2 grading count": sp_ge2_dim(dims) == _graded_ge(dims, 2, True),
            "S_>=2 matches Lambda^2 grading count": s_dim == _graded_ge(dims, 2, False),
        }
    elif kind == "B":
        if not is_B_dist(bp):
            raise ValueError(f"{bp} is not B-distinguished")
        lam = phi_B(bp)
        dims = filtration_grading(lam)
        tilde = grading_dims(lam)
        flag = _graded_ge(dims, 1, symmetric=True)
        v_dim = lambda_filtration_dim(lam, 2)
        s_dim = s_ge2_dim(dims)
        shifted = {a: d + (1 if a == 0 else 0) for a, d in dims.items()}
        shifted.setdefault(0, 1)
        checks = {
            "V~ grading is V grading plus one in degree 0": {a: d for a, d in shifted.items() if d} == tilde,
            "flag varieties of SO(V~) and Sp(V) agree": _graded_ge(tilde, 1, False) == flag,
            "o(V~) side has the same total": _graded_ge(tilde, 1, False) + s_ge2_dim(tilde)
            == flag + v_dim + s_dim,
        }
    else:
        raise ValueError(f"kind must be 'B' or 'C', got {kind!r}")
    return ResolutionDims(bp, kind, lam, flag, v_dim, s_dim, expected, checks)


def minimum_above(bp: Bipartition, members: Iterable[Bipartition]) -> Bipartition | None:
    """Brute-force poset search: the minimum of ``{tau in members : bp <= tau}``."""
    above = [t for t in members if bipartition_leq(bp, t)]
    mins = [t for t in above if all(bipartition_leq(t, u) for u in above)]
    return mins[0] if len(mins) == 1 else None


__all__ = [
    "HesselinkIndex",
    "ClassificationError",
    "phi_C",
    "hat_phi_C",
    "phi_B",
    "hat_phi_B",
    "phi_B2",
    "collapse",
    "collapse_C",
    "collapse_B",
    "collapse_special",
    "collapse_tilde",
    "hesselink_C",
    "hesselink_B2",
    "invert_jordan_C",
    "invert_jordan_B2",
    "fiber",
    "preceq_fiber",
    "lambda_filtration_dim",
    "grading_dims",
    "filtration_grading",
    "resolution_dim_check",
    "minimum_above",
    "INFINITY",
]
