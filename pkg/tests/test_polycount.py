import pytest
import sympy
from hypothesis import given, strategies as st

from nilpieces import maps
from nilpieces.combinatorics import (
    add_parts,
    b_stat,
    bip,
    enumerate_bipartitions,
    is_B_dist,
    is_C_dist,
    is_special,
    multiplicity,
)
from nilpieces.polycount import (
    IntPolynomial,
    evaluate,
    exotic_point_poly,
    j_set,
    piece_poly,
    poincare_product,
    typeB_point_poly,
    typeC_point_poly,
    verify_identities,
)

t = sympy.Symbol("t")


def to_sympy(p: IntPolynomial):
    return sympy.Poly(sum(a * t**e for e, a in p.coeffs.items()) + 0 * t, t)


def oracle(n, b, sizes):
    """The product formula as a sympy rational function, cancelled to a polynomial."""
    num = t ** (2 * (n * n - b)) * sympy.prod([1 - t ** (-2 * i) for i in range(1, n + 1)])
    den = sympy.prod([1 - t ** (-2 * i) for k in sizes for i in range(1, k + 1)])
    r = sympy.cancel(sympy.together(num / den))
    return sympy.Poly(r, t)


@pytest.mark.parametrize("n", range(5))
def test_exotic_formula_against_sympy(n):
    for bp in enumerate_bipartitions(n):
        lam = add_parts(bp.mu, bp.nu)
        J = j_set(bp)
        sizes = [multiplicity(lam, a) - (a in J) for a in set(lam)]
        assert to_sympy(exotic_point_poly(bp)) == oracle(n, b_stat(bp), sizes), bp


@pytest.mark.parametrize("n", range(5))
def test_typeC_formula_against_sympy(n):
    for bp in enumerate_bipartitions(n):
        if is_C_dist(bp):
            lam = maps.phi_C(bp)
            sizes = [multiplicity(lam, a) // 2 for a in set(lam)]
            assert to_sympy(typeC_point_poly(bp)) == oracle(n, b_stat(bp), sizes), bp


def test_minspecial_example():
    q = t
    top = bip([1], [1, 1])
    fib = maps.fiber("special", top, 3)
    assert len(fib) == 3
    assert exotic_point_poly(bip([1], [1, 1])) == exotic_point_poly(bip([1, 1, 1])) * (
        IntPolynomial({4: 1, 0: -1})
    )
    orbits = sorted(str(to_sympy(exotic_point_poly(r)).as_expr().expand()) for r in fib)
    want = sorted(
        str(sympy.expand(e))
        for e in [(q**4 - 1) * (q**6 - 1), (q**2 + 1) * (q**6 - 1), (q**6 - 1)]
    )
    assert orbits == want

    def as_expr(p):
        return sympy.expand(to_sympy(p).as_expr())

    B = sorted(str(as_expr(typeB_point_poly(r))) for r in fib if is_B_dist(r))
    assert B == sorted(str(sympy.expand(e)) for e in [q**4 * (q**6 - 1), (q**2 + 1) * (q**6 - 1)])
    C = sorted(str(as_expr(typeC_point_poly(r))) for r in fib if is_C_dist(r))
    assert C == sorted(str(sympy.expand(e)) for e in [(q**4 + q**2) * (q**6 - 1), q**6 - 1])
    assert as_expr(piece_poly("special", top)) == sympy.expand((q**4 + q**2 + 1) * (q**6 - 1))


@pytest.mark.parametrize("n", range(7))
def test_identities(n):
    report = verify_identities(n)
    assert report.ok, report.failures[:3]


def test_identity_failure_is_reported():
    bp = bip([1], [1, 1])
    bad = exotic_point_poly(bp) + 1
    report = verify_identities(3, {("exotic", bp): bad})
    assert not report.ok
    assert any(c.label == bp for c in report.failures)


@pytest.mark.parametrize("n", range(7))
def test_piece_sums_cover_cone(n):
    total = IntPolynomial.monomial(2 * n * n)
    labels = enumerate_bipartitions(n)
    for kind, pred in (("B", is_B_dist), ("C", is_C_dist), ("special", is_special)):
        s = IntPolynomial()
        for r in labels:
            if pred(r):
                s = s + piece_poly(kind, r)
        assert s == total


def test_poincare_product():
    assert poincare_product(0) == IntPolynomial.constant(1, "u")
    assert poincare_product(2).coeffs == {0: 1, 1: -1, 2: -1, 3: 1}
    with pytest.raises(ValueError):
        poincare_product(-1)


def test_j_set_examples():
    assert j_set(bip([1], [1, 1])) == frozenset({2})
    assert j_set(bip([3])) == frozenset({3})
    assert j_set(bip([], [1, 1])) == frozenset()
    assert j_set(bip([], [1])) == frozenset()


def test_small_values():
    assert exotic_point_poly(bip([])) == IntPolynomial.constant(1)
    assert exotic_point_poly(bip([1])).coeffs == {2: 1, 0: -1}
    assert exotic_point_poly(bip([], [1])) == IntPolynomial.constant(1)
    with pytest.raises(ValueError):
        typeC_point_poly(bip([], [2]))
    with pytest.raises(ValueError):
        piece_poly("script-E", bip([], [3]))


coeffs = st.dictionaries(st.integers(0, 8), st.integers(-20, 20), max_size=6)


@given(coeffs, coeffs, st.integers(-5, 5))
def test_polynomial_arithmetic(a, b, x):
    p, r = IntPolynomial(a), IntPolynomial(b)
    assert evaluate(p * r, x) == evaluate(p, x) * evaluate(r, x)
    assert evaluate(p + r, x) == evaluate(p, x) + evaluate(r, x)
    assert (p - p).is_zero()
    if not r.is_zero() and r.leading in (1, -1):
        quo, rem = (p * r + p).divmod(r)
        assert quo * r + rem == p * r + p
    assert IntPolynomial.from_json(p.to_json()) == p
