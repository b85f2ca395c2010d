"""Exhaustive point censuses of the nilpotent cones over small fields.

Every census enumerates an index space ``range(q^P)`` of free coordinates,
split into contiguous blocks.  A block produces additive tallies, so blocks
can be processed in any order or in separate processes.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import maps
from ..combinatorics import (
    Bipartition,
    add_parts,
    duplicate,
    enumerate_bipartitions,
    is_B2_dist,
    is_B_dist,
    is_C_dist,
    is_special,
    part,
    preceq,
)
from ..finitefield import Field, get_field
from ..finitefield import batch
from ..polycount import (
    b2_orbit_poly,
    evaluate,
    exotic_point_poly,
    piece_poly,
    typeB_point_poly,
    typeC_point_poly,
)
from . import engine

BUDGET = 2**24
BLOCK = 2**17

CONES = {
    # cone tag -> (characteristic requirement, description)
    "exotic": ("even", "exotic nilpotent cone V x N(o(V))"),
    "C2": ("even", "nilpotent cone of sp(V)"),
    "B2": ("even", "nilpotent cone of o(V~), through the linear parametrization (v, x)"),
    "C-odd": ("odd", "nilpotent cone of sp_2n"),
    "B-odd": ("odd", "nilpotent cone of o_2n+1"),
}


class BudgetExceeded(RuntimeError):
    def __init__(self, cone, n, q, size):
        super().__init__(
            f"census {cone} n={n} q={q} would enumerate about {size:,} points "
            f"(budget {BUDGET:,}); pass override_budget=True to run it anyway"
        )
        self.size = size


class UnsupportedCensus(ValueError):
    pass


@dataclass
class CensusLine:
    section: str
    label: Bipartition | None
    jordan_type: tuple | None
    tally: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.tally == self.expected


@dataclass
class CensusReport:
    cone: str
    n: int
    q: int
    enumerated: int = 0
    nilpotent: int = 0
    orbit_tallies: dict = field(default_factory=dict)
    lines: list[CensusLine] = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(l.ok for l in self.lines) and all(self.checks.values())

    def section(self, name: str) -> list[CensusLine]:
        return [l for l in self.lines if l.section == name]

    def failures(self) -> list:
        return [l for l in self.lines if not l.ok] + [k for k, v in self.checks.items() if not v]


def _param_count(cone: str, n: int) -> int:
    return {
        "C2": n * (2 * n + 1),
        "B2": 2 * n * n + n,
        "C-odd": n * (2 * n + 1),
        "B-odd": n * (2 * n + 1),
        "exotic": n * (2 * n - 1),
    }[cone]


def census_size(cone: str, n: int, q: int) -> int:
    size = q ** _param_count(cone, n)
    if cone == "exotic":
        size += q ** (2 * n * n)  # points after filtering x
    return size


def _check_field(cone: str, F: Field) -> None:
    need = CONES[cone][0]
    if (need == "even") != (F.p == 2):
        raise UnsupportedCensus(f"cone {cone} needs {need} characteristic, got q={F.q}")


# ------------------------------------------------------------------ blocks


def _odd_matrices(F: Field, digits: np.ndarray, d: int, kind: str) -> np.ndarray:
    """``x = G^-1 A`` with ``A`` symmetric (symplectic case) or alternating (orthogonal case)."""
    N = digits.shape[0]
    if kind == "C-odd":
        iu = np.triu_indices(d)
    else:
        iu = np.triu_indices(d, 1)
    A = np.zeros((N, d, d), np.uint8)
    A[:, iu[0], iu[1]] = digits
    A[:, iu[1], iu[0]] = digits if kind == "C-odd" else F.neg_t[digits]
    # G is a signed antidiagonal permutation, so G^-1 A permutes and signs rows.
    n = d // 2
    X = A[:, ::-1, :].copy()
    if kind == "C-odd":
        # G[i, d-1-i] = 1 for i < n, -1 otherwise; G^-1 = -G, i.e. row i of
        # G^-1 A is -G[i, d-1-i] * A[d-1-i].
        signs = np.array([F.neg(1) if i < n else 1 for i in range(d)], np.uint8)
        X = F.mul_t[signs[None, :, None], X]
    return X


def _block(cone: str, n: int, q: int, start: int, stop: int) -> dict:
    F = get_field(q)
    P = _param_count(cone, n)
    digits = engine.decode_digits(start, stop, q, P)
    out: dict = {"enumerated": stop - start}
    if cone == "C2":
        Y = engine.skew_symmetric_stack(digits, 2 * n, strict=False)
        kind = "C2"
    elif cone == "B2":
        V = digits[:, : 2 * n]
        X = engine.skew_symmetric_stack(digits[:, 2 * n :], 2 * n, strict=True)
        Y = engine.psi_tilde_stack(V, X)
        kind = "B2"
        xnil = batch.nilpotent_mask(F, X)
    else:
        Y = _odd_matrices(F, digits, 2 * n + (cone == "B-odd"), cone)
        kind = cone
    nil = batch.nilpotent_mask(F, Y)
    if cone == "B2":
        out["nilpotency_mismatch"] = int((nil != xnil).sum())
    Yn = Y[nil]
    out["nilpotent"] = int(nil.sum())
    labels, jt_idx, jts = engine.classify_stack(F, Yn, kind, n)
    out["labels"] = Counter(labels.tolist())
    out["jordan"] = Counter({jts[t]: int(c) for t, c in zip(*np.unique(jt_idx, return_counts=True))})
    return out


def _merge(parts: list[dict]) -> dict:
    out: dict = {"enumerated": 0, "nilpotent": 0, "labels": Counter(), "jordan": Counter(), "nilpotency_mismatch": 0}
    for p in parts:
        out["enumerated"] += p["enumerated"]
        out["nilpotent"] += p["nilpotent"]
        out["labels"].update(p["labels"])
        out["jordan"].update(p["jordan"])
        out["nilpotency_mismatch"] += p.get("nilpotency_mismatch", 0)
    return out


def _workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("NILPIECES_WORKERS", "1"))
    return max(1, workers)


def _run_blocks(cone: str, n: int, q: int, total: int, workers: int) -> dict:
    spans = [(s, min(s + BLOCK, total)) for s in range(0, total, BLOCK)]
    if workers == 1 or len(spans) == 1:
        return _merge([_block(cone, n, q, a, b) for a, b in spans])
    with ProcessPoolExecutor(workers) as pool:
        futures = [pool.submit(_block, cone, n, q, a, b) for a, b in spans]
        return _merge([f.result() for f in futures])


# ------------------------------------------------------------------ exotic


def nilpotent_o_stack(F: Field, n: int) -> np.ndarray:
    """All nilpotent ``x`` in o(V) over ``F`` (characteristic 2)."""
    P = _param_count("exotic", n)
    total = F.q**P
    keep = []
    for s in range(0, total, BLOCK):
        X = engine.skew_symmetric_stack(engine.decode_digits(s, min(s + BLOCK, total), F.q, P), 2 * n, strict=True)
        keep.append(X[batch.nilpotent_mask(F, X)])
    return np.concatenate(keep) if keep else np.zeros((0, 2 * n, 2 * n), np.uint8)


def exotic_points(F: Field, n: int, X: np.ndarray | None = None):
    """Yield ``(V, X)`` stacks covering the exotic cone, in chunks."""
    X = nilpotent_o_stack(F, n) if X is None else X
    nv = F.q ** (2 * n)
    Vall = engine.decode_digits(0, nv, F.q, 2 * n)
    per = max(1, BLOCK // nv)
    for s in range(0, len(X), per):
        Xc = X[s : s + per]
        V = np.tile(Vall, (len(Xc), 1))
        Xr = np.repeat(Xc, nv, axis=0)
        yield V, Xr


def _bundle_mask(F: Field, V: np.ndarray, X: np.ndarray, target: Bipartition, x_type_ok: np.ndarray, affine: bool) -> np.ndarray:
    """Batched conditions (a) + (b) of the (affine) bundle description."""
    lam = add_parts(target.mu, target.nu)
    ok = x_type_ok.copy()
    if not ok.any() or not lam:
        return ok
    d = X.shape[-1]
    n = d // 2
    pw = batch.bpowers(F, X, max(lam) + 2)
    perm = np.arange(d)[::-1]
    for i in range(1, len(lam) + 1):
        mi = part(target.mu, i)
        K = batch.bnullspace(F, pw[lam[i - 1]])
        Z = batch.bmatmul(F, pw[mi], K)  # columns x^mi u
        GZ = Z[:, perm, :]
        lhs = engine._column_reduce(F, F.mul_t[V[:, :, None], GZ])  # <v, x^mi u>
        if affine:
            Z1 = batch.bmatmul(F, pw[mi + 1], K)
            qv = engine._column_reduce(F, F.mul_t[Z1[:, :n], Z1[:, d - 1 : n - 1 : -1]])
            rhs = F.sqrt_t[qv]
        else:
            rhs = np.zeros_like(lhs)
        ok &= (lhs == rhs).all(axis=1)
    return ok


def _exotic_census(F: Field, n: int, bundles: bool, psi_check: bool) -> dict:
    X = nilpotent_o_stack(F, n)
    labels_all = enumerate_bipartitions(n)
    dup_of = {k: duplicate(add_parts(bp.mu, bp.nu)) for k, bp in enumerate(labels_all)}
    tallies: Counter = Counter()
    e_counts: Counter = Counter()
    se_counts: Counter = Counter()
    e_mismatch = 0
    type_mismatch = 0
    keys = []
    total = 0
    for V, Xr in exotic_points(F, n, X):
        total += len(V)
        Y = engine.psi_stack(F, V, Xr)
        labels, _, _ = engine.classify_stack(F, Y, "C2", n)
        jx, jts = engine.jordan_types(F, Xr)
        for t, lam in enumerate(jts):
            sel = jx == t
            want = np.array([dup_of[int(l)] == lam for l in np.unique(labels[sel])])
            type_mismatch += int((~want).sum())
        tallies.update(labels.tolist())
        if psi_check:
            keys.append(engine.encode_digits(engine.free_entries(Y, strict=False), F.q))
        if bundles:
            for bp in labels_all:
                lam2 = duplicate(add_parts(bp.mu, bp.nu))
                tok = np.array([jts[t] == lam2 for t in range(len(jts))])[jx]
                m = _bundle_mask(F, V, Xr, bp, tok, affine=False)
                e_counts[bp] += int(m.sum())
                below = np.array([preceq(labels_all[k], bp) for k in range(len(labels_all))])
                e_mismatch += int((m != below[labels]).sum())
                if is_B2_dist(bp):
                    se_counts[bp] += int(_bundle_mask(F, V, Xr, bp, tok, affine=True).sum())
    out = {
        "enumerated": F.q ** _param_count("exotic", n) + total,
        "nilpotent": total,
        "x_count": len(X),
        "labels": tallies,
        "type_mismatch": type_mismatch,
    }
    if psi_check:
        allkeys = np.concatenate(keys) if keys else np.zeros(0, np.int64)
        out["psi_distinct"] = int(np.unique(allkeys).size)
        out["psi_total"] = int(allkeys.size)
    if bundles:
        out["E"] = e_counts
        out["script_E"] = se_counts
        out["E_mismatch"] = e_mismatch
    return out


# ------------------------------------------------------------------ reports


def _orbit_lines(report: CensusReport, tallies: dict, members, poly, jt) -> None:
    q = report.q
    for bp in members:
        report.lines.append(CensusLine("orbit", bp, jt(bp), int(tallies.get(bp, 0)), evaluate(poly(bp), q)))


def run_census(
    cone: str,
    n: int,
    q: int,
    override_budget: bool = False,
    workers: int | None = None,
    bundles: bool | None = None,
) -> CensusReport:
    if cone not in CONES:
        raise UnsupportedCensus(f"unknown cone {cone!r}")
    if n < 1:
        raise UnsupportedCensus("n must be at least 1")
    F = get_field(q)
    _check_field(cone, F)
    size = census_size(cone, n, q)
    if size > BUDGET and not override_budget:
        raise BudgetExceeded(cone, n, q, size)
    rep = CensusReport(cone, n, q)
    labels_all = enumerate_bipartitions(n)
    total_expected = q ** (2 * n * n)

    if cone == "exotic":
        if bundles is None:
            bundles = n <= 2
        raw = _exotic_census(F, n, bundles=bundles, psi_check=True)
    else:
        raw = _run_blocks(cone, n, q, q ** _param_count(cone, n), _workers(workers))
    tallies = {labels_all[k]: c for k, c in raw["labels"].items()}
    rep.enumerated = raw["enumerated"]
    rep.nilpotent = raw["nilpotent"]
    rep.orbit_tallies = {bp: tallies.get(bp, 0) for bp in labels_all}
    rep.checks["tallies sum to the number of nilpotent points"] = sum(tallies.values()) == rep.nilpotent
    rep.lines.append(CensusLine("total", None, None, rep.nilpotent, total_expected))

    if cone in ("exotic", "C2"):
        _orbit_lines(rep, tallies, labels_all, exotic_point_poly, maps.phi_C)
        for bp in labels_all:
            if is_C_dist(bp):
                got = sum(tallies.get(r, 0) for r in maps.fiber("C", bp))
                rep.lines.append(CensusLine("piece:C", bp, maps.phi_C(bp), got, evaluate(typeC_point_poly(bp), q)))
            if is_special(bp):
                got = sum(tallies.get(r, 0) for r in maps.fiber("special", bp))
                rep.lines.append(CensusLine("special", bp, None, got, evaluate(piece_poly("special", bp), q)))
            if is_B2_dist(bp):
                got = sum(tallies.get(r, 0) for r in maps.fiber("tilde", bp))
                rep.lines.append(CensusLine("tilde", bp, None, got, evaluate(piece_poly("tilde", bp), q)))
            if is_B_dist(bp):
                got = sum(tallies.get(r, 0) for r in maps.fiber("B", bp))
                rep.lines.append(CensusLine("piece:B", bp, maps.phi_B(bp), got, evaluate(typeB_point_poly(bp), q)))
        if cone == "C2":
            by_type = {lam: c for lam, c in raw["jordan"].items() if c}
            rep.extras["jordan_tallies"] = by_type
            by_collapse = {l.jordan_type: l.tally for l in rep.section("piece:C") if l.tally}
            rep.checks["Jordan-type grouping equals type-C collapse grouping"] = by_type == by_collapse
        else:
            rep.checks["x has Jordan type (mu+nu) doubled for every point"] = raw["type_mismatch"] == 0
            rep.extras["psi_distinct"] = raw["psi_distinct"]
            rep.checks["psi is injective on the enumerated cone"] = raw["psi_distinct"] == raw["psi_total"]
            rep.extras["x_count"] = raw["x_count"]
            if "E" in raw:
                rep.checks["vector-bundle conditions agree with classification"] = raw["E_mismatch"] == 0
                for bp in labels_all:
                    e = raw["E"][bp]
                    base = tallies.get(Bipartition((), add_parts(bp.mu, bp.nu)), 0)
                    rep.lines.append(CensusLine("E", bp, None, e, evaluate(piece_poly("E", bp), q)))
                    rep.lines.append(CensusLine("E=q^2|mu|*base", bp, None, e, q ** (2 * sum(bp.mu)) * base))
                    if is_B2_dist(bp):
                        se = raw["script_E"][bp]
                        rep.lines.append(CensusLine("script-E=E", bp, None, se, e))
                        rep.lines.append(CensusLine("script-E", bp, None, se, evaluate(piece_poly("script-E", bp), q)))
                rep.extras["E"] = dict(raw["E"])
                rep.extras["script_E"] = dict(raw["script_E"])
    elif cone == "B2":
        members = [bp for bp in labels_all if is_B2_dist(bp)]
        stray = [bp for bp, c in tallies.items() if c and not is_B2_dist(bp)]
        rep.checks["labels lie in Q^(B,2)"] = not stray
        _orbit_lines(rep, tallies, members, b2_orbit_poly, maps.phi_B2)
        rep.checks["y is nilpotent exactly when x is"] = raw["nilpotency_mismatch"] == 0
        for bp in labels_all:
            if is_B_dist(bp):
                got = sum(tallies.get(r, 0) for r in members if maps.collapse_B(r) == bp)
                rep.lines.append(CensusLine("piece:B", bp, maps.phi_B(bp), got, evaluate(typeB_point_poly(bp), q)))
            if is_special(bp):
                got = sum(tallies.get(r, 0) for r in members if maps.collapse_special(r) == bp)
                rep.lines.append(CensusLine("special", bp, None, got, evaluate(piece_poly("special", bp), q)))
        for bp in members:
            got = sum(tallies.get(r, 0) for r in members if preceq(r, bp))
            rep.lines.append(CensusLine("script-E", bp, None, got, evaluate(piece_poly("script-E", bp), q)))
    elif cone == "C-odd":
        members = [bp for bp in labels_all if is_C_dist(bp)]
        _orbit_lines(rep, tallies, members, typeC_point_poly, maps.phi_C)
        for bp in labels_all:
            if is_special(bp):
                got = sum(tallies.get(r, 0) for r in members if maps.collapse_special(r) == bp)
                rep.lines.append(CensusLine("special", bp, None, got, evaluate(piece_poly("special", bp), q)))
    else:  # B-odd
        members = [bp for bp in labels_all if is_B_dist(bp)]
        _orbit_lines(rep, tallies, members, typeB_point_poly, maps.phi_B)
        for bp in labels_all:
            if is_special(bp):
                got = sum(tallies.get(r, 0) for r in members if maps.collapse_special(r) == bp)
                rep.lines.append(CensusLine("special", bp, None, got, evaluate(piece_poly("special", bp), q)))
    return rep


__all__ = [
    "BUDGET",
    "BudgetExceeded",
    "CensusLine",
    "CensusReport",
    "UnsupportedCensus",
    "census_size",
    "run_census",
    "nilpotent_o_stack",
    "exotic_points",
]
