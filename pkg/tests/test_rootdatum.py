import random
from fractions import Fraction as Q
from math import factorial

import pytest

from kottwitz.catalog import build, gl, pgl, sl, so_split, sp, standard_catalog, u_quasisplit
from kottwitz.lattice import in_rational_cone, vsub
from kottwitz.oracle import cone_member_bruteforce
from kottwitz.rootdatum import (
    BasedRootDatum,
    GaloisAction,
    RootDatumError,
    apply_word,
    dominant_rep,
    fundamental_weights,
    galois_average,
    is_minuscule,
    leq_dominance,
    relative_data,
    two_rho,
    validate,
    w0_negate_dominant,
    weyl_group_order,
    weyl_orbit,
)


def q(*xs):
    return tuple(Q(x) for x in xs)


def all_catalog():
    for e in standard_catalog():
        rd, g = e.build()
        yield e, rd, g


@pytest.mark.parametrize(
    "name,params,count",
    [("gl", [4], 12), ("sl", [3], 6), ("sp", [3], 18), ("so_split", [7], 18), ("so_split", [8], 24), ("gsp", [2], 8)],
)
def test_root_counts(name, params, count):
    rd, _ = build(name, params)
    assert len(rd.roots) == count


def test_catalog_validates():
    for e, rd, g in all_catalog():
        assert validate(rd, g) == [], e.label


def test_bad_coroot_is_reported():
    rd, _ = gl(2)
    broken = BasedRootDatum(2, rd.roots, ((1, 1), (-1, -1)), rd.simple_indices)
    axioms = [v.axiom for v in validate(broken)]
    assert "<alpha^vee,alpha> != 2" in axioms


def test_flip_on_a2_is_valid():
    rd, g = u_quasisplit(3)
    assert validate(rd, g) == []
    assert len(relative_data(rd, g).orbits) == 1


def test_non_based_galois_is_reported():
    rd, _ = gl(2)
    swap = GaloisAction.from_permutation([1, 0])
    axioms = [v.axiom for v in validate(rd, swap)]
    assert "Galois generator fixes Delta" in axioms
    wrong_order = GaloisAction(u_quasisplit(3)[1].generator, 3)
    assert [v.axiom for v in validate(u_quasisplit(3)[0], wrong_order)] == ["generator^order = identity"]


def test_closure_overflow():
    with pytest.raises(RootDatumError):
        BasedRootDatum.from_simple(2, [(1, 0), (0, 1)], [(2, -3), (-3, 2)], max_roots=200)


def test_dominant_rep_examples():
    rd, _ = gl(3)
    assert dominant_rep(rd, (0, 1, 0)) == ((1, 0, 0), (0,))
    assert dominant_rep(rd, (1, 0, 0)) == ((1, 0, 0), ())
    rd2, _ = gl(2)
    assert dominant_rep(rd2, (-1, 0)) == ((0, -1), (0,))


def test_dominant_rep_is_reduced_and_w_invariant():
    rng = random.Random(7)
    for name, params in [("gl", [4]), ("sp", [3]), ("so_split", [8]), ("gsp", [2])]:
        rd, _ = build(name, params)
        for _ in range(30):
            v = tuple(rng.randint(-3, 3) for _ in range(rd.rank))
            dom, word = dominant_rep(rd, v)
            assert rd.is_dominant(dom)
            assert apply_word(rd, word, v) == dom
            # reduced: the word length equals the number of positive roots made negative
            flipped = sum(1 for r in rd.positive_roots if sum(a * b for a, b in zip(v, r)) < 0)
            assert len(word) == flipped
            w = [rng.randrange(rd.n_simple) for _ in range(6)]
            assert dominant_rep(rd, apply_word(rd, w, v))[0] == dom
            assert dominant_rep(rd, dom)[0] == dom


def test_w0_negate():
    rd, _ = gl(2)
    assert w0_negate_dominant(rd, (1, 0)) == (0, -1)
    assert w0_negate_dominant(rd, q(Q(1, 2), Q(1, 2))) == q(Q(-1, 2), Q(-1, 2))
    rd4, _ = gl(4)
    assert w0_negate_dominant(rd4, (1, 1, 0, 0)) == (0, 0, -1, -1)


def test_w0_negate_is_involution_on_catalog():
    for e, rd, g in all_catalog():
        for mu in e.mus():
            assert w0_negate_dominant(rd, w0_negate_dominant(rd, mu)) == tuple(mu)


def test_two_rho():
    assert two_rho(gl(2)[0]) == (1, -1)
    assert two_rho(gl(4)[0]) == (3, 1, -1, -3)
    # A_2 inside the trace-zero part of GL_3 coordinates
    assert two_rho(gl(3)[0]) == (2, 0, -2)


def test_fundamental_weights():
    (w,) = fundamental_weights(gl(2)[0])
    assert w == q(Q(1, 2), Q(-1, 2))
    w4 = fundamental_weights(gl(4)[0])
    assert w4[1] == q(Q(1, 2), Q(1, 2), Q(-1, 2), Q(-1, 2))
    assert w4[0] == q(Q(3, 4), Q(-1, 4), Q(-1, 4), Q(-1, 4))
    for e, rd, g in all_catalog():
        ws = fundamental_weights(rd)
        for i, c in enumerate(rd.simple_coroots):
            for j, w in enumerate(ws):
                assert sum(a * b for a, b in zip(c, w)) == int(i == j)


def test_galois_average():
    rd, g = gl(4)
    assert galois_average(rd, g, (1, 1, 0, 0)) == q(1, 1, 0, 0)
    rd3, g3 = u_quasisplit(3)
    assert galois_average(rd3, g3, (1, 0, 0)) == q(Q(1, 2), 0, Q(-1, 2))
    v = galois_average(rd3, g3, (2, -1, 5))
    assert galois_average(rd3, g3, v) == v
    assert g3.act_cochar(v) == v


def test_res_gl_average_is_orbit_mean():
    rd, g = build("res_gl", [2, 2])
    assert len(relative_data(rd, g).orbits) == 1
    mu = (1, 0, 0, 0)
    assert galois_average(rd, g, mu) == q(Q(1, 2), 0, Q(1, 2), 0)


def test_relative_data_examples():
    rd, g = gl(4)
    rel = relative_data(rd, g)
    assert rel.orbits == ((0,), (1,), (2,))
    assert rel.omega_tilde == fundamental_weights(rd)
    rd3, g3 = u_quasisplit(3)
    rel3 = relative_data(rd3, g3)
    assert rel3.orbits == ((0, 1),)
    assert rel3.omega_tilde[0] == q(1, 0, -1)
    assert rel3.orbit_name(0) == "a1+a2"
    assert relative_data(*gl(2)).omega_tilde[0] == q(Q(1, 2), Q(-1, 2))


def test_omega_tilde_pairing_identity_and_positivity():
    for e, rd, g in all_catalog():
        rel = relative_data(rd, g)
        for k, orbit in enumerate(rel.orbits):
            for i in range(rd.n_simple):
                avg = galois_average(rd, g, rd.simple_coroots[i])
                paired = sum(a * b for a, b in zip(avg, rel.omega_tilde[k]))
                assert paired == int(i in orbit), e.label
            assert in_rational_cone(rel.omega_tilde[k], rd.positive_roots)


def test_leq_examples():
    rel = relative_data(*gl(2))
    half = q(Q(1, 2), Q(1, 2))
    assert leq_dominance(rel, half, q(1, 0))
    assert not leq_dominance(rel, q(1, 0), half)
    assert not leq_dominance(rel, half, q(1, 1))


def test_leq_fast_path_matches_cone_tests():
    rng = random.Random(3)
    for e, rd, g in all_catalog():
        if rd.rank > 5:
            continue
        rel = relative_data(rd, g)
        pts = []
        for _ in range(12):
            v = tuple(rng.randint(-2, 2) for _ in range(rd.rank))
            pts.append(galois_average(rd, g, dominant_rep(rd, v)[0]))
        for a in pts:
            for b in pts[:6]:
                fast = leq_dominance(rel, a, b)
                assert fast == bool(in_rational_cone(vsub(b, a), rd.positive_coroots)), e.label
                assert fast == cone_member_bruteforce(vsub(b, a), rel.averaged_simple_coroots), e.label


def test_weyl_group_orders():
    for n in range(1, 6):
        assert weyl_group_order(gl(n)[0]) == factorial(n)
    assert weyl_group_order(sp(2)[0]) == 8
    assert weyl_group_order(sp(3)[0]) == 48
    assert weyl_group_order(so_split(7)[0]) == 48
    assert weyl_group_order(so_split(8)[0]) == 192
    assert weyl_group_order(so_split(10)[0]) == 1920
    assert weyl_group_order(pgl(4)[0]) == 24
    assert weyl_group_order(sl(4)[0]) == 24


def test_weyl_orbit_size():
    assert len(weyl_orbit(gl(4)[0], (1, 1, 0, 0))) == 6
    assert len(weyl_orbit(so_split(8)[0], (1, 0, 0, 0))) == 8


def test_is_minuscule():
    assert is_minuscule(gl(4)[0], (1, 1, 0, 0))
    assert not is_minuscule(gl(2)[0], (2, 0))
    for n in range(2, 7):
        assert is_minuscule(gl(n)[0], (1,) + (0,) * (n - 1))
    with pytest.raises(ValueError):
        is_minuscule(gl(2)[0], (0, 1))


def test_catalog_mus_are_minuscule():
    for e, rd, g in all_catalog():
        for mu in e.mus():
            assert is_minuscule(rd, mu), (e.label, mu)
