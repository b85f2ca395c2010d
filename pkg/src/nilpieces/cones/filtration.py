"""Adapted lambda-filtrations of exotic points, built recursively.

A filtration is stored as the subspaces ``V_{>=a}`` for ``1 - l1 <= a <= l1``
(rows span the subspace); outside that window it is ``V`` below and ``0``
above.  The construction peels off the top subspace ``W``, passes to
``W^perp / W`` and recurses on the shortened Jordan type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import maps
from ..combinatorics import canonical, head_multiplicity, is_P2n1B, is_P2nC
from ..finitefield import Field, form_context, linalg
from ..finitefield.forms import form_eval, gram_matrix, perp, symplectic_basis
from .classify import classify_exotic_char2
from .points import ExoticPoint


class FiltrationError(AssertionError):
    """A property guaranteed by the construction failed."""


@dataclass(frozen=True, eq=False)
class Filtration:
    field: Field
    dim: int
    lam: tuple[int, ...]
    steps: dict  # a -> rows, for 1 - top <= a <= top

    @property
    def top(self) -> int:
        return self.lam[0] if self.lam else 1

    def __getitem__(self, a: int) -> np.ndarray:
        if a >= self.top:
            return np.zeros((0, self.dim), np.uint8)
        if a <= 1 - self.top:
            return linalg.identity(self.dim)
        return self.steps[a]

    def dims(self) -> dict[int, int]:
        return {a: self[a].shape[0] for a in range(1 - self.top, self.top + 1)}

    def transform(self, g: np.ndarray) -> "Filtration":
        """Image under the linear map ``g`` (acting on column vectors)."""
        steps = {a: linalg.row_basis(self.field, linalg.matmul(self.field, rows, g.T)) if len(rows) else rows
                 for a, rows in self.steps.items()}
        return Filtration(self.field, self.dim, self.lam, steps)

    def same_as(self, other: "Filtration") -> bool:
        lo = min(1 - self.top, 1 - other.top)
        hi = max(self.top, other.top)
        return all(linalg.same_span(self.field, self[a], other[a]) if len(self[a]) or len(other[a])
                   else True for a in range(lo, hi + 1))


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise FiltrationError(msg)


def _piece_type(p: ExoticPoint, kind: str) -> tuple[int, ...]:
    if kind not in ("B", "C"):
        raise ValueError(f"kind must be 'B' or 'C', got {kind!r}")
    bp = classify_exotic_char2(p).bp
    return maps.phi_C(maps.collapse_C(bp)) if kind == "C" else maps.phi_B(maps.collapse_B(bp))


def _check_type(lam, n: int, kind: str) -> tuple[int, ...]:
    lam = canonical(lam)
    if kind == "C":
        ok = is_P2nC(lam) and sum(lam) == 2 * n
    elif kind == "B":
        ok = is_P2n1B(lam) and sum(lam) == 2 * n + 1
    else:
        raise ValueError(f"kind must be 'B' or 'C', got {kind!r}")
    if not ok:
        raise ValueError(f"{lam} is not a type-{kind} Jordan type for n={n}")
    return lam


def shorten(lam) -> tuple[int, ...]:
    """Replace every largest part ``l1`` by ``l1 - 2`` and re-sort."""
    lam = canonical(lam)
    return canonical(sorted((m - 2 if m == lam[0] else m for m in lam), reverse=True))


def _w_subspace(p: ExoticPoint, lam, kind: str) -> np.ndarray:
    F = p.field
    lam = canonical(lam)
    l1 = lam[0]
    if l1 < 2:
        raise ValueError("the top subspace needs a part of size at least 2")
    ctx = form_context(F, 2 * p.n)
    gens = list(linalg.image_basis(F, linalg.matrix_power(F, p.x, l1 - 1)))
    if (kind == "C" and l1 % 2 == 0) or (kind == "B" and l1 % 2 == 1):
        gens.append(linalg.matvec(F, linalg.matrix_power(F, p.x, l1 // 2 - 1), p.v))
    W = linalg.row_basis(F, np.array(gens, np.uint8).reshape(-1, 2 * p.n))
    _check(W.shape[0] == head_multiplicity(lam), f"dim W = {W.shape[0]}, expected {head_multiplicity(lam)}")
    _check(not gram_matrix(ctx, W, W).any(), "W is not isotropic")
    _check(not linalg.matmul(F, p.x, W.T).any(), "W is not contained in ker x")
    return W


def w_subspace_C(p: ExoticPoint, lam=None) -> np.ndarray:
    """Top step ``V_{>=l1-1}`` of the C-adapted filtration; rows are a basis."""
    lam = _piece_type(p, "C") if lam is None else _check_type(lam, p.n, "C")
    return _w_subspace(p, lam, "C")


def w_subspace_B(p: ExoticPoint, lam=None) -> np.ndarray:
    """Top step ``V_{>=l1-1}`` of the B-adapted filtration; rows are a basis."""
    lam = _piece_type(p, "B") if lam is None else _check_type(lam, p.n, "B")
    return _w_subspace(p, lam, "B")


def _complement(F: Field, sub: np.ndarray, ambient: np.ndarray) -> np.ndarray:
    """Rows of ``ambient`` extending a basis of ``sub`` to a basis of the ambient span."""
    chosen = list(sub)
    extra = []
    r = len(chosen)
    for w in ambient:
        if linalg.span_dim(F, np.array(chosen + [w])) > r:
            chosen.append(w)
            extra.append(w)
            r += 1
    return np.array(extra, np.uint8).reshape(-1, ambient.shape[1])


def quotient_pair(p: ExoticPoint, W: np.ndarray) -> tuple[ExoticPoint, np.ndarray]:
    """The induced pair on ``W^perp / W`` and the lift of its standard basis into ``W^perp``."""
    F = p.field
    d = 2 * p.n
    ctx = form_context(F, d)
    Wp = perp(ctx, W)
    B = symplectic_basis(ctx, _complement(F, W, Wp)) if Wp.shape[0] > W.shape[0] else np.zeros((0, d), np.uint8)
    full = np.vstack([B, W])
    k = B.shape[0]
    v_new = linalg.solve_coords(F, full, p.v)[0, :k]
    xB = linalg.matmul(F, p.x, B.T).T  # rows x b_i
    x_new = linalg.solve_coords(F, full, xB)[:, :k].T.copy() if k else np.zeros((0, 0), np.uint8)
    return ExoticPoint(F, v_new, x_new), B


def build_filtration(p: ExoticPoint, kind: str, lam=None, check_recursion: bool = True) -> Filtration:
    """The unique lambda-filtration adapted to ``p``.

    ``lam`` defaults to the Jordan type of the type-``kind`` piece containing
    ``p`` (characteristic 2 only, where points can be classified).  With
    ``check_recursion`` the induced pair at each level is classified and its
    piece is compared with the shortened Jordan type.
    """
    F = p.field
    d = 2 * p.n
    lam = _piece_type(p, kind) if lam is None else _check_type(lam, p.n, kind)
    if not lam or lam[0] <= 1:
        _check(not p.v.any() and not p.x.any(), "Jordan type of all ones needs the zero point")
        return Filtration(F, d, lam, {0: linalg.identity(d), 1: np.zeros((0, d), np.uint8)})
    l1 = lam[0]
    W = _w_subspace(p, lam, kind)
    sub, B = quotient_pair(p, W)
    lam2 = shorten(lam)
    if check_recursion and sub.n and F.p == 2:
        _check(_piece_type(sub, kind) == lam2, f"induced pair is not in the piece of {lam2}")
    inner = build_filtration(sub, kind, lam2, check_recursion)
    steps = {}
    for a in range(1 - l1, l1 + 1):
        if a >= l1:
            steps[a] = np.zeros((0, d), np.uint8)
        elif a <= 1 - l1:
            steps[a] = linalg.identity(d)
        else:
            rows = inner[a]
            lifted = linalg.matmul(F, rows, B) if len(rows) else np.zeros((0, d), np.uint8)
            steps[a] = linalg.row_basis(F, np.vstack([W, lifted])) if len(W) + len(lifted) else W
    return Filtration(F, d, lam, steps)


def verify_filtration(p: ExoticPoint, filt: Filtration, kind: str) -> dict[str, bool]:
    """Lambda-filtration axioms plus adaptedness to ``p``."""
    F = p.field
    ctx = form_context(F, filt.dim)
    lam = filt.lam
    top = filt.top
    rng = range(-top - 1, top + 2)
    nested = all(linalg.contains(F, filt[a - 1], filt[a]) for a in rng if len(filt[a]))
    dims = all(filt[a].shape[0] == maps.lambda_filtration_dim(lam, a) for a in rng) if lam else True
    perps = all(linalg.same_span(F, perp(ctx, filt[a]), filt[1 - a]) for a in rng)
    low = 1 if kind == "C" else 2
    v_in = linalg.contains(F, filt[low], p.v) if p.v.any() else True
    x_ok = True
    for a in rng:
        rows = filt[a]
        if len(rows):
            img = linalg.matmul(F, p.x, rows.T).T
            if img.any() and not linalg.contains(F, filt[a + 2], img):
                x_ok = False
                break
    return {
        "nested": nested,
        "dimensions": dims,
        "perpendicular": perps,
        f"v in V_>={low}": v_in,
        "x raises degree by 2": x_ok,
    }


def is_adapted(p: ExoticPoint, filt: Filtration, kind: str) -> bool:
    return all(verify_filtration(p, filt, kind).values())


def random_transvection(F: Field, d: int, rng: np.random.Generator) -> np.ndarray:
    """``w -> w + c <w, u> u``: preserves the symplectic form for any ``u``, ``c``."""
    ctx = form_context(F, d)
    u = rng.integers(0, F.q, d).astype(np.uint8)
    c = int(rng.integers(1, F.q))
    g = linalg.identity(d)
    for j in range(d):
        e = np.zeros(d, np.uint8)
        e[j] = 1
        coef = F.mul(c, form_eval(ctx, e, u))
        g[:, j] = F.add_t[g[:, j], linalg.scale(F, coef, u)]
    return g


def uniqueness_probe(p: ExoticPoint, filt: Filtration, kind: str, rng: np.random.Generator, trials: int = 8) -> dict:
    """Move the filtration by random symplectic transvections.

    The moved filtrations are still lambda-filtrations; any that differ from
    ``filt`` must fail adaptedness.  Returns counts of distinct candidates and
    of candidates that (wrongly) stayed adapted.
    """
    F = p.field
    out = {"distinct": 0, "still_adapted": 0, "not_filtration": 0}
    for _ in range(trials):
        g = random_transvection(F, filt.dim, rng)
        moved = filt.transform(g)
        if moved.same_as(filt):
            continue
        out["distinct"] += 1
        checks = verify_filtration(p, moved, kind)
        if not (checks["nested"] and checks["dimensions"] and checks["perpendicular"]):
            out["not_filtration"] += 1
        elif all(checks.values()):
            out["still_adapted"] += 1
    return out


__all__ = [
    "Filtration",
    "FiltrationError",
    "build_filtration",
    "is_adapted",
    "quotient_pair",
    "random_transvection",
    "shorten",
    "uniqueness_probe",
    "verify_filtration",
    "w_subspace_B",
    "w_subspace_C",
]
