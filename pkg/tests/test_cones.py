import itertools

import numpy as np
import pytest

from nilpieces import maps
from nilpieces.combinatorics import (
    add_parts,
    bip,
    duplicate,
    enumerate_bipartitions,
    is_B2_dist,
    part,
    preceq,
)
from nilpieces.cones import engine
from nilpieces.cones.census import exotic_points, nilpotent_o_stack
from nilpieces.cones.classify import (
    OrbitLabel,
    classify_exotic_char2,
    classify_o_char2,
    classify_o_odd,
    classify_sp_char2,
    classify_sp_odd,
    e_membership,
    hesselink_o,
    hesselink_sp,
    jordan_box_column,
    script_e_membership,
)
from nilpieces.cones.points import (
    ExoticPoint,
    in_exotic_S,
    pi_map,
    psi,
    psi_tilde,
    psi_tilde_inverse,
    random_exotic_point,
    s_section,
)
from oracles import nilpotent_o_tilde

from nilpieces.finitefield import (
    CharacteristicError,
    form_context,
    form_eval,
    get_field,
    in_oVtilde,
    in_sp,
    linalg,
)


def points(q, n):
    F = get_field(q)
    for V, X in exotic_points(F, n):
        for v, x in zip(V, X):
            yield ExoticPoint(F, v, x)


def test_small_examples():
    F = get_field(2)
    v = np.array([1, 0], np.uint8)
    y = s_section(F, v)
    assert in_sp(form_context(F, 2), y)
    assert (pi_map(F, y) == v).all()
    assert not psi_tilde(F, np.zeros(4, np.uint8), np.zeros((4, 4), np.uint8)).any()
    assert str(OrbitLabel("exotic", bip([1], [1]))) == "exotic:((1);(1))"
    with pytest.raises(ValueError):
        OrbitLabel("D", bip([1]))
    with pytest.raises(CharacteristicError):
        psi(get_field(3), v, np.zeros((2, 2), np.uint8))
    with pytest.raises(ValueError):
        ExoticPoint(F, np.zeros(3, np.uint8), np.zeros((3, 3), np.uint8))


@pytest.mark.parametrize("q", (2, 4))
def test_s_section_and_pi(q):
    F = get_field(q)
    for v in itertools.product(range(q), repeat=4):
        v = np.array(v, np.uint8)
        y = s_section(F, v)
        assert (pi_map(F, y) == v).all()
        assert in_sp(form_context(F, 4), y)
        assert linalg.rank(F, y) <= 1
        assert not linalg.matvec(F, y, v).any()


def _brute_sp_nilpotents(F, n):
    """All nilpotent y with <yu, w> = <u, yw>, by running over every matrix."""
    d = 2 * n
    out = set()
    ctx = form_context(F, d)
    for entries in itertools.product(range(F.q), repeat=d * d):
        y = np.array(entries, np.uint8).reshape(d, d)
        if in_sp(ctx, y) and linalg.is_nilpotent(F, y):
            out.add(y.tobytes())
    return out


@pytest.mark.parametrize("q, n", [(2, 1), (4, 1)])
def test_psi_bijective_small(q, n):
    F = get_field(q)
    images = [psi(F, p.v, p.x).tobytes() for p in points(q, n)]
    assert len(set(images)) == len(images)
    assert set(images) == _brute_sp_nilpotents(F, n)


@pytest.mark.parametrize("q, n", [(2, 2), (4, 2)])
def test_psi_bijective_vs_sp_census(q, n, census):
    F = get_field(q)
    ctx = form_context(F, 2 * n)
    total = 0
    seen = set()
    for V, X in exotic_points(F, n):
        Y = engine.psi_stack(F, V, X)
        seen.update(engine.encode_digits(engine.free_entries(Y, strict=False), q).tolist())
        total += len(Y)
        assert all(in_sp(ctx, y) for y in Y[:: max(1, len(Y) // 50)])
    assert len(seen) == total == census("C2", n, q).nilpotent


@pytest.mark.parametrize("q, n", [(2, 1), (4, 1), (2, 2)])
def test_psi_tilde_bijective_onto_nilpotent_o_tilde(q, n):
    F = get_field(q)
    D = 2 * n + 1
    nil = nilpotent_o_tilde(q, n)
    images = set()
    count = 0
    for p in points(q, n):
        y = psi_tilde(F, p.v, p.x)
        assert in_oVtilde(form_context(F, D), y)
        v2, x2 = psi_tilde_inverse(F, y)
        assert (v2 == p.v).all() and (x2 == p.x).all()
        images.add(y.tobytes())
        count += 1
    assert len(images) == count
    assert images == nil


@pytest.mark.parametrize("q, n", [(2, 1), (2, 2), (4, 1)])
def test_psi_tilde_jordan_type_adds_a_box(q, n):
    F = get_field(q)
    for p in points(q, n):
        big = linalg.jordan_type(F, psi_tilde(F, p.v, p.x))
        small = linalg.jordan_type(F, p.x)
        assert sum(big) == sum(small) + 1
        padded = list(small) + [0] * (len(big) - len(small))
        diff = [a - b for a, b in zip(big, padded)]
        assert sorted(diff) == [0] * (len(diff) - 1) + [1]


def test_classify_examples():
    F = get_field(2)
    assert classify_sp_char2(F, np.zeros((4, 4), np.uint8)).bp == bip([], [1, 1])
    x = np.zeros((4, 4), np.uint8)
    x[0, 1] = x[2, 3] = 1  # type (2, 2), the largest for nilpotents of o(V) at n = 2
    for v, want in (([0, 0, 0, 1], bip([2])), ([1, 0, 0, 0], bip([1], [1])), ([0, 0, 0, 0], bip([], [2]))):
        p = ExoticPoint(F, np.array(v, np.uint8), x)
        p.validate()
        assert classify_exotic_char2(p).bp == want
    with pytest.raises(CharacteristicError):
        classify_sp_char2(get_field(3), np.zeros((2, 2), np.uint8))
    with pytest.raises(CharacteristicError):
        classify_sp_odd(F, np.zeros((2, 2), np.uint8))
    assert classify_sp_odd(get_field(3), np.zeros((4, 4), np.uint8)).bp == bip([], [1, 1])
    assert classify_o_odd(get_field(3), np.zeros((5, 5), np.uint8)).bp == bip([], [1, 1])


@pytest.mark.parametrize("q, n", [(2, 1), (2, 2), (4, 1)])
def test_exotic_classification(q, n):
    F = get_field(q)
    seen = set()
    for p in points(q, n):
        bp = classify_exotic_char2(p).bp
        seen.add(bp)
        assert linalg.jordan_type(F, p.x) == duplicate(add_parts(bp.mu, bp.nu))
        assert maps.phi_C(bp) == linalg.jordan_type(F, psi(F, p.v, p.x))
        assert is_B2_dist(classify_o_char2(F, psi_tilde(F, p.v, p.x)).bp)
        assert jordan_box_column(p) == part(bp.mu, len(bp.nu) + 1) + 1
    assert seen == set(enumerate_bipartitions(n))


def test_jordan_box_column_sampled_n3():
    F = get_field(2)
    rng = np.random.default_rng(3)
    for _ in range(300):
        p = random_exotic_point(F, 3, rng)
        bp = classify_exotic_char2(p).bp
        assert jordan_box_column(p) == part(bp.mu, len(bp.nu) + 1) + 1


@pytest.mark.parametrize("q", (2, 4))
def test_engine_matches_per_point(q):
    F = get_field(q)
    n = 2
    index = engine.label_index(n)
    for V, X in exotic_points(F, n):
        Y = engine.psi_stack(F, V, X)
        labels, _, _ = engine.classify_stack(F, Y, "C2", n)
        Yt = engine.psi_tilde_stack(V, X)
        lt, _, _ = engine.classify_stack(F, Yt, "B2", n)
        for k in np.random.default_rng(q).choice(len(Y), min(300, len(Y)), replace=False):
            y = Y[k]
            assert labels[k] == index[classify_sp_char2(F, y).bp]
            assert lt[k] == index[classify_o_char2(F, Yt[k]).bp]
            lam = linalg.jordan_type(F, y)
            parts = sorted(set(lam))
            row = engine.hesselink_sp_stack(F, y[None], lam)[0]
            assert maps.HesselinkIndex.from_mapping(dict(zip(parts, map(int, row)))) == hesselink_sp(F, y, lam)
            lt_lam = linalg.jordan_type(F, Yt[k])
            row = engine.hesselink_o_stack(F, Yt[k][None], lt_lam)[0]
            want = hesselink_o(F, Yt[k], lt_lam)
            assert maps.HesselinkIndex.from_mapping(dict(zip(sorted(set(lt_lam)), map(int, row)))) == want
        break


@pytest.mark.parametrize("q", (3, 5))
def test_odd_engine_matches_per_point(q):
    F = get_field(q)
    rng = np.random.default_rng(q)
    from nilpieces.cones.census import _odd_matrices

    for cone, d, classify in (("C-odd", 4, classify_sp_odd), ("B-odd", 5, classify_o_odd)):
        P = d * (d + 1) // 2 if cone == "C-odd" else d * (d - 1) // 2
        digits = rng.integers(0, q, (4000, P)).astype(np.uint8)
        digits[:2000, P // 2 :] = 0
        Y = _odd_matrices(F, digits, d, cone)
        ctx = form_context(F, d)
        from nilpieces.finitefield import batch
        from nilpieces.finitefield.forms import is_skew_adjoint

        assert all(is_skew_adjoint(ctx, y) for y in Y[:200])
        Yn = Y[batch.nilpotent_mask(F, Y)]
        assert len(Yn) > 20
        labels, _, _ = engine.classify_stack(F, Yn, cone, 2)
        idx = engine.label_index(2)
        for k in range(len(Yn)):
            assert labels[k] == idx[classify(F, Yn[k]).bp]


def test_hesselink_kernel_basis_suffices():
    """w -> <y^(2j+1) w, w> is additive on sp in characteristic 2, so checking a basis is enough."""
    rng = np.random.default_rng(7)
    for q in (2, 4):
        F = get_field(q)
        ctx = form_context(F, 6)
        for _ in range(40):
            p = random_exotic_point(F, 3, rng)
            y = psi(F, p.v, p.x)
            for a in (1, 3, 5):
                ya = linalg.matrix_power(F, y, a)
                u, w = rng.integers(0, q, (2, 6)).astype(np.uint8)
                s = F.add_t[u, w]

                def f(z):
                    return form_eval(ctx, linalg.matvec(F, ya, z), z)

                assert f(s) == F.add(f(u), f(w))


def test_e_membership_matches_preceq_n2():
    F = get_field(2)
    labels = enumerate_bipartitions(2)
    for p in points(2, 2):
        bp = classify_exotic_char2(p).bp
        for t in labels:
            assert e_membership(p, t) == preceq(bp, t)
            if is_B2_dist(t):
                script_e_membership(p, t)
    p = random_exotic_point(F, 3, np.random.default_rng(0))
    assert not is_B2_dist(bip([], [3]))
    with pytest.raises(ValueError):
        script_e_membership(p, bip([], [3]))


def test_exotic_S_membership():
    F = get_field(2)
    ctx = form_context(F, 4)
    X = nilpotent_o_stack(F, 2)
    assert len(X) == 16
    assert all(in_exotic_S(ctx, x) for x in X)
    bad = np.zeros((4, 4), np.uint8)
    bad[0, 3] = 1
    assert not in_exotic_S(ctx, bad)
