"""Exact point-count polynomials and the identities relating them.

All rational-function formulas here have the shape

    t^(2(n^2 - b)) * prod_{i<=n} (1 - t^-2i) / (product of similar factors),

so they are computed in the auxiliary variable ``u = t^-2`` (where everything
is an honest polynomial), divided exactly, and converted back to ``t`` once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .combinatorics import (
    Bipartition,
    add_parts,
    b_stat,
    enumerate_bipartitions,
    is_B2_dist,
    is_B_dist,
    is_C_dist,
    is_special,
    multiplicity,
    part,
)
from . import maps


class IntPolynomial:
    """Integer polynomial in one variable, stored sparsely as exponent -> coefficient."""

    __slots__ = ("_c", "var")

    def __init__(self, coeffs: Mapping[int, int] | None = None, var: str = "t"):
        c = {}
        for e, a in (coeffs or {}).items():
            if e < 0:
                raise ValueError("negative exponent")
            if a:
                c[int(e)] = int(a)
        self._c = c
        self.var = var

    @classmethod
    def monomial(cls, e: int, a: int = 1, var: str = "t") -> "IntPolynomial":
        return cls({e: a}, var)

    @classmethod
    def constant(cls, a: int, var: str = "t") -> "IntPolynomial":
        return cls({0: a}, var)

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return max(self._c, default=-1)

    @property
    def leading(self) -> int:
        return self._c.get(self.degree, 0)

    def __getitem__(self, e: int) -> int:
        return self._c.get(e, 0)

    def _coerce(self, other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            if other.var != self.var:
                raise ValueError(f"mixing variables {self.var} and {other.var}")
            return other
        if isinstance(other, int):
            return IntPolynomial.constant(other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            c[e] = c.get(e, 0) + a
        return IntPolynomial(c, self.var)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial({e: -a for e, a in self._c.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + a1 * a2
        return IntPolynomial(c, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IntPolynomial.constant(1, self.var)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.constant(other, self.var)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.var == other.var and self._c == other._c

    def __hash__(self):
        return hash((self.var, frozenset(self._c.items())))

    def divmod(self, d: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Long division by a polynomial with leading coefficient +-1."""
        d = self._coerce(d)
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead = d.leading
        if lead not in (1, -1):
            raise ValueError("divisor must be monic up to sign")
        rem = dict(self._c)
        quo: dict[int, int] = {}
        dd = d.degree
        while rem and max(rem) >= dd:
            top = max(rem)
            f = rem[top] * lead
            quo[top - dd] = f
            for e, a in d._c.items():
                k = e + top - dd
                v = rem.get(k, 0) - f * a
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return IntPolynomial(quo, self.var), IntPolynomial(rem, self.var)

    def exact_div(self, d: "IntPolynomial") -> "IntPolynomial":
        q, r = self.divmod(d)
        if not r.is_zero():
            raise ArithmeticError(f"inexact division: remainder {r}")
        return q

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def only_even_exponents(self) -> bool:
        return all(e % 2 == 0 for e in self._c)

    def to_json(self) -> dict:
        return {"coeffs": {str(e): a for e, a in sorted(self._c.items())}}

    @classmethod
    def from_json(cls, doc: Mapping) -> "IntPolynomial":
        return cls({int(e): a for e, a in doc["coeffs"].items()})

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for e in sorted(self._c, reverse=True):
            a = self._c[e]
            sign = "-" if a < 0 else "+"
            a = abs(a)
            if e == 0:
                body = str(a)
            else:
                mono = self.var if e == 1 else f"{self.var}^{e}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"IntPolynomial({self})"


def evaluate(p: IntPolynomial, q: int) -> int:
    total = 0
    for e, a in p.coeffs.items():
        total += a * q**e
    return total


T = IntPolynomial.monomial(1)


@lru_cache(maxsize=None)
def poincare_product(k: int) -> IntPolynomial:
    """``prod_{i=1}^k (1 - u^i)`` in the variable ``u``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = IntPolynomial.constant(1, "u")
    for i in range(1, k + 1):
        out = out * IntPolynomial({0: 1, i: -1}, "u")
    return out


def _u_to_t(r: IntPolynomial, top: int) -> IntPolynomial:
    """Interpret ``t^top * r(t^-2)`` as a polynomial in ``t``."""
    if r.degree * 2 > top:
        raise ArithmeticError(f"u-degree {r.degree} exceeds half of t-degree {top}")
    return IntPolynomial({top - 2 * k: a for k, a in r.coeffs.items()})


def _ratio(n: int, b: int, denominator_sizes: Iterable[int]) -> IntPolynomial:
    den = IntPolynomial.constant(1, "u")
    for k in denominator_sizes:
        den = den * poincare_product(k)
    r = poincare_product(n).exact_div(den)
    return _u_to_t(r, 2 * (n * n - b))


def j_set(bp: Bipartition) -> frozenset[int]:
    mu, nu = bp.mu, bp.nu
    L = max(len(mu), len(nu))
    s = [part(mu, i) + part(nu, i) for i in range(L + 2)]  # s[i] = mu_i + nu_i for i >= 1
    drop_mu = {s[i] for i in range(1, L + 1) if part(mu, i + 1) < part(mu, i)}
    drop_nu = {s[j] for j in range(1, L + 1) if j == 1 or part(nu, j - 1) > part(nu, j)}
    return frozenset(a for a in drop_mu & drop_nu if a > 0)


def exotic_point_poly(bp: Bipartition) -> IntPolynomial:
    lam = add_parts(bp.mu, bp.nu)
    J = j_set(bp)
    sizes = [multiplicity(lam, a) - (1 if a in J else 0) for a in set(lam)]
    return _ratio(bp.size, b_stat(bp), sizes)


def typeC_point_poly(bp: Bipartition) -> IntPolynomial:
    if not is_C_dist(bp):
        raise ValueError(f"{bp} is not C-distinguished")
    lam = maps.phi_C(bp)
    return _ratio(bp.size, b_stat(bp), [multiplicity(lam, a) // 2 for a in set(lam)])


def _sum(polys: Iterable[IntPolynomial]) -> IntPolynomial:
    out = IntPolynomial()
    for p in polys:
        out = out + p
    return out


@lru_cache(maxsize=None)
def _exotic_cached(bp: Bipartition) -> IntPolynomial:
    return exotic_point_poly(bp)


def typeB_point_poly(bp: Bipartition) -> IntPolynomial:
    """Defined as the exotic sum over the type-B fiber (no closed form is used)."""
    if not is_B_dist(bp):
        raise ValueError(f"{bp} is not B-distinguished")
    return _sum(_exotic_cached(r) for r in maps.fiber("B", bp))


PIECE_KINDS = ("B", "C", "special", "tilde", "E", "script-E")


def piece_poly(kind: str, target: Bipartition) -> IntPolynomial:
    if kind in ("B", "C", "special", "tilde"):
        return _sum(_exotic_cached(r) for r in maps.fiber(kind, target))
    if kind == "E":
        members = maps.preceq_fiber(target)
    elif kind == "script-E":
        if not is_B2_dist(target):
            raise ValueError(f"{target} is not in Q^(B,2)")
        members = maps.preceq_fiber(target)
    else:
        raise ValueError(f"unknown piece kind {kind!r}")
    return _sum(_exotic_cached(r) for r in members)


def b2_orbit_poly(bp: Bipartition) -> IntPolynomial:
    """Point count of the (B,2) orbit labelled ``bp``: the exotic sum over its tilde fiber."""
    return piece_poly("tilde", bp)


@dataclass
class IdentityCheck:
    name: str
    label: Bipartition
    ok: bool
    detail: str = ""


@dataclass
class IdentityReport:
    n: int
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, name, label, lhs, rhs):
        ok = lhs == rhs
        detail = "" if ok else f"{lhs} != {rhs}"
        self.checks.append(IdentityCheck(name, label, ok, detail))


def _degree_law(report: IdentityReport, name: str, bp: Bipartition, p: IntPolynomial) -> None:
    want = 2 * (bp.size**2 - b_stat(bp))
    ok = p.degree == want and p.leading == 1 and p.only_even_exponents()
    detail = "" if ok else f"degree {p.degree}, leading {p.leading}, expected degree {want}"
    report.checks.append(IdentityCheck(name, bp, ok, detail))


def verify_identities(n: int, overrides: Mapping | None = None) -> IdentityReport:
    """Check the polynomial identities for every label of size ``n``.

    ``overrides`` maps ``(function name, bp)`` to a replacement polynomial, so
    the failure path can be exercised.
    """
    overrides = dict(overrides or {})

    def exo(bp):
        return overrides.get(("exotic", bp), _exotic_cached(bp))

    def pc(bp):
        return overrides.get(("typeC", bp), typeC_point_poly(bp))

    def pb(bp):
        return overrides.get(("typeB", bp), typeB_point_poly(bp))

    report = IdentityReport(n)
    labels = enumerate_bipartitions(n)
    if n == 0:
        report.add("trivial", labels[0], exo(labels[0]), IntPolynomial.constant(1))
    for bp in labels:
        _degree_law(report, "degree law (orbit)", bp, exo(bp))
        if is_C_dist(bp):
            _degree_law(report, "degree law (type C)", bp, pc(bp))
            fib = _sum(exo(r) for r in maps.fiber("C", bp))
            report.add("type-C piece = orbit polynomial", bp, fib, pc(bp))
        if is_B_dist(bp):
            _degree_law(report, "degree law (type B)", bp, pb(bp))
        if is_special(bp):
            lhs = _sum(pb(r) for r in labels if is_B_dist(r) and maps.collapse_special(r) == bp)
            mid = _sum(exo(r) for r in maps.fiber("special", bp))
            rhs = _sum(pc(r) for r in labels if is_C_dist(r) and maps.collapse_special(r) == bp)
            report.add("special: B side = exotic", bp, lhs, mid)
            report.add("special: exotic = C side", bp, mid, rhs)
    total = IntPolynomial.monomial(2 * n * n)
    report.add("orbits exhaust the cone", labels[0], _sum(exo(r) for r in labels), total)
    report.add(
        "type-C orbits exhaust the cone",
        labels[0],
        _sum(pc(r) for r in labels if is_C_dist(r)),
        total,
    )
    return report


def factored_degrees(p: IntPolynomial) -> str:
    """Human-readable ``t^a * (...)`` form: power of t pulled out, plus degree."""
    if p.is_zero():
        return "0"
    low = min(p.coeffs)
    rest = IntPolynomial({e - low: a for e, a in p.coeffs.items()})
    head = "" if low == 0 else (f"t^{low}" if low > 1 else "t")
    if rest == IntPolynomial.constant(1):
        return head or "1"
    body = f"({rest})"
    return f"{head}*{body}" if head else body


__all__ = [
    "IntPolynomial",
    "T",
    "evaluate",
    "poincare_product",
    "j_set",
    "exotic_point_poly",
    "typeC_point_poly",
    "typeB_point_poly",
    "piece_poly",
    "b2_orbit_poly",
    "verify_identities",
    "IdentityReport",
    "factored_degrees",
]
