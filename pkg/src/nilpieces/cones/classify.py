"""Per-point orbit classification and the bundle membership tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import maps
from ..combinatorics import Bipartition, add_parts, duplicate, is_B2_dist, part
from ..finitefield import CharacteristicError, Field, form_context, frobenius_sqrt, linalg
from ..finitefield.forms import form_eval, gram_matrix, quad_eval
from .points import ExoticPoint, psi

CONE_TAGS = ("exotic", "C2", "B2", "C-odd", "B-odd")


@dataclass(frozen=True)
class OrbitLabel:
    cone: str
    bp: Bipartition

    def __post_init__(self):
        if self.cone not in CONE_TAGS:
            raise ValueError(f"unknown cone tag {self.cone!r}")

    def __str__(self) -> str:
        return f"{self.cone}:{self.bp}"


def _powers(F: Field, y: np.ndarray, kmax: int) -> list[np.ndarray]:
    out = [linalg.identity(y.shape[0])]
    for _ in range(kmax):
        out.append(linalg.matmul(F, out[-1], y))
    return out


def hesselink_sp(F: Field, y: np.ndarray, lam=None) -> maps.HesselinkIndex:
    """``chi(m) = min{j : <y^(2j+1) w, w> = 0 for w in ker y^m}``.

    For ``y`` in sp(V) in characteristic 2, ``w -> <y^a w, w>`` is additive,
    since the cross terms ``<y^a u, w> + <y^a w, u>`` cancel
    (``<y^a u, w> = <u, y^a w> = <y^a w, u>``).  It is also Frobenius
    semilinear, so vanishing on a basis of the kernel is enough.
    """
    ctx = form_context(F, y.shape[0])
    lam = linalg.jordan_type(F, y) if lam is None else lam
    d = y.shape[0]
    pw = _powers(F, y, 2 * d + 1)
    chi = {}
    for m in sorted(set(lam)):
        K = linalg.kernel_basis(F, pw[m])
        for j in range(m + 1):
            M = pw[min(2 * j + 1, 2 * d + 1)]
            if all(form_eval(ctx, linalg.matvec(F, M, w), w) == 0 for w in K):
                chi[m] = j
                break
        else:
            raise maps.ClassificationError(f"no Hesselink value found for part {m}")
    return maps.HesselinkIndex.from_mapping(chi)


def hesselink_o(F: Field, y: np.ndarray, lam=None) -> maps.HesselinkIndex:
    """``chi~(m) = min{j : Q~(y^j w) = 0 for w in ker y^m}``.

    A quadratic form vanishes on a subspace iff it vanishes on a basis and
    its polar form vanishes on pairs of basis vectors.
    """
    ctx = form_context(F, y.shape[0])
    lam = linalg.jordan_type(F, y) if lam is None else lam
    pw = _powers(F, y, y.shape[0])
    chi = {}
    for m in sorted(set(lam)):
        K = linalg.kernel_basis(F, pw[m])
        for j in range(m + 1):
            Z = linalg.matmul(F, K, pw[j].T)  # rows y^j w
            if all(quad_eval(ctx, z) == 0 for z in Z) and not gram_matrix(ctx, Z, Z).any():
                chi[m] = j
                break
        else:
            raise maps.ClassificationError(f"no Hesselink value found for part {m}")
    return maps.HesselinkIndex.from_mapping(chi)


def classify_sp_char2(F: Field, y) -> OrbitLabel:
    if F.p != 2:
        raise CharacteristicError("characteristic-2 classifier")
    y = np.asarray(y, np.uint8)
    lam = linalg.jordan_type(F, y)
    return OrbitLabel("C2", maps.invert_jordan_C(lam, hesselink_sp(F, y, lam)))


def classify_o_char2(F: Field, y) -> OrbitLabel:
    if F.p != 2:
        raise CharacteristicError("characteristic-2 classifier")
    y = np.asarray(y, np.uint8)
    lam = linalg.jordan_type(F, y)
    return OrbitLabel("B2", maps.invert_jordan_B2(lam, hesselink_o(F, y, lam)))


def classify_exotic_char2(p: ExoticPoint) -> OrbitLabel:
    F = p.field
    bp = classify_sp_char2(F, psi(F, p.v, p.x)).bp
    lam_x = linalg.jordan_type(F, p.x)
    if lam_x != duplicate(add_parts(bp.mu, bp.nu)):
        raise maps.ClassificationError(f"x has Jordan type {lam_x}, inconsistent with label {bp}")
    return OrbitLabel("exotic", bp)


def _odd(F: Field) -> None:
    if F.p == 2:
        raise CharacteristicError("odd-characteristic classifier")


def classify_sp_odd(F: Field, y) -> OrbitLabel:
    _odd(F)
    lam = linalg.jordan_type(F, y)
    try:
        return OrbitLabel("C-odd", maps.hat_phi_C(lam))
    except ValueError as e:
        raise maps.ClassificationError(str(e)) from e


def classify_o_odd(F: Field, y) -> OrbitLabel:
    _odd(F)
    lam = linalg.jordan_type(F, y)
    try:
        return OrbitLabel("B-odd", maps.hat_phi_B(lam))
    except ValueError as e:
        raise maps.ClassificationError(str(e)) from e


def _bundle_conditions(p: ExoticPoint, target: Bipartition, affine: bool) -> bool:
    F = p.field
    ctx = form_context(F, 2 * p.n)
    lam = add_parts(target.mu, target.nu)
    if linalg.jordan_type(F, p.x) != duplicate(lam):
        return False
    pw = _powers(F, p.x, max(lam, default=0) + 2)
    for i in range(1, len(lam) + 1):
        mi = part(target.mu, i)
        K = linalg.kernel_basis(F, pw[lam[i - 1]])
        lhs = [form_eval(ctx, p.v, linalg.matvec(F, pw[mi], u)) for u in K]
        if affine:
            Z = linalg.matmul(F, K, pw[mi + 1].T)
            # u -> Q(x^(mi+1) u) is additive on this kernel: the polar terms
            # <x^(mi+1) u, x^(mi+1) w> = <x^(2mi+2) u, w> vanish because
            # 2mi + 2 >= mi + nu_i there.
            assert not gram_matrix(ctx, Z, Z).any()
            rhs = [frobenius_sqrt(F, quad_eval(ctx, z)) for z in Z]
        else:
            rhs = [0] * len(lhs)
        if lhs != rhs:
            return False
    return True


def e_membership(p: ExoticPoint, target: Bipartition) -> bool:
    """Membership in the vector-bundle piece attached to ``target``."""
    if target.size != p.n:
        raise ValueError("size mismatch")
    return _bundle_conditions(p, target, affine=False)


def script_e_membership(p: ExoticPoint, target: Bipartition) -> bool:
    """Membership in the affine-bundle piece (characteristic 2, target in Q^(B,2))."""
    if p.field.p != 2:
        raise CharacteristicError("the affine-bundle condition uses square roots in characteristic 2")
    if not is_B2_dist(target):
        raise ValueError(f"{target} is not in Q^(B,2)")
    return _bundle_conditions(p, target, affine=True)


def jordan_box_column(p: ExoticPoint) -> int:
    """``min{j >= 1 : <v, x^(j-1) ker x^j> = 0}``."""
    F = p.field
    ctx = form_context(F, 2 * p.n)
    d = 2 * p.n
    pw = _powers(F, p.x, d + 1)
    for j in range(1, d + 2):
        K = linalg.kernel_basis(F, pw[min(j, d)])
        if all(form_eval(ctx, p.v, linalg.matvec(F, pw[j - 1], u)) == 0 for u in K):
            return j
    raise AssertionError("unreachable: x^d = 0")
