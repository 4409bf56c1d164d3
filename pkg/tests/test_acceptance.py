"""Acceptance criteria 1-8. Each test prints one summary line at the end of the run.

All comparisons are exact (Fraction arithmetic, set equality); no tolerances apply.
"""
import io
import itertools
import random
import time
from fractions import Fraction as Q
from pathlib import Path

from kottwitz.catalog import gl, inner_form_gl, standard_catalog
from kottwitz.cli import main
from kottwitz.dsl import DSLError, parse, serialize
from kottwitz.lattice import dot
from kottwitz.oracle import gln_polygon_enumerate, hn_decomposable_exhaustive, levi_path_enumerate
from kottwitz.rootdatum import fundamental_weights, galois_average, leq_dominance, w0_negate_dominant
from kottwitz.sets import (
    GroupDatum,
    dualize_to_Jb,
    enumerate_B_dual,
    enumerate_B_mu,
    is_fully_hn_decomposable,
    levi_lemma_counterexamples,
    minute,
    stratification_report,
)

FIXTURES = Path(__file__).parent / "fixtures"
HALF = Q(1, 2)


def catalog():
    for e in standard_catalog():
        rd, g = e.build()
        yield e, GroupDatum.make(rd, g, e.xi, e.label)


def dominant_mus(n, values):
    return [m for m in itertools.product(values, repeat=n) if list(m) == sorted(m, reverse=True)]


def test_criterion_1_gln_polygon_equivalence(criterion):
    t0 = time.perf_counter()
    checked = mismatches = 0
    for n in range(2, 7):
        gd = GroupDatum.make(*gl(n))
        for mu in dominant_mus(n, (0, 1, 2)):
            got = set(enumerate_B_mu(gd, mu).newton_points)
            checked += 1
            mismatches += got != gln_polygon_enumerate(n, mu)
    elapsed = time.perf_counter() - t0
    criterion(f"{checked} mu over GL_2..GL_6, {mismatches} mismatches, {elapsed:.1f}s (limit 60s)")
    assert mismatches == 0 and checked == 80
    assert elapsed < 60


def test_criterion_2_minute_iff_fully_decomposable(criterion):
    checked = disagreements = 0
    for e, gd in catalog():
        for mu in e.mus():
            m = minute(gd, mu).minute
            for ks in (enumerate_B_mu(gd, mu), enumerate_B_dual(gd, mu)):
                checked += 1
                disagreements += m != is_fully_hn_decomposable(ks)
    criterion(f"{checked} (instance, mu, set) triples, {disagreements} disagreements")
    assert disagreements == 0 and checked > 100


def test_criterion_3_three_set_equivalence(criterion):
    checked = disagreements = 0
    for e, gd in catalog():
        for mu in e.mus():
            d = dualize_to_Jb(gd, mu)
            verdicts = {
                is_fully_hn_decomposable(enumerate_B_mu(gd, mu)),
                is_fully_hn_decomposable(d.dual_set),
                is_fully_hn_decomposable(d.jb_set),
            }
            checked += 1
            disagreements += len(verdicts) != 1 or not d.is_bijection
    criterion(f"{checked} (instance, mu) pairs, {disagreements} disagreements")
    assert disagreements == 0 and checked > 50


def test_criterion_4_two_path_enumeration(criterion):
    t0 = time.perf_counter()
    checked = disagreements = 0
    for e, gd in catalog():
        if gd.rd.rank > 5:
            continue
        for mu in e.mus():
            zero = (0,) * gd.rd.rank
            for ks, lift in ((enumerate_B_mu(gd, mu), mu), (enumerate_B_dual(gd, mu), zero)):
                other = levi_path_enumerate(gd, lift, ks.delta, check_stability=True)
                checked += 1
                disagreements += {c.key() for c in ks} != other
    elapsed = time.perf_counter() - t0
    criterion(f"{checked} sets of rank <= 5, {disagreements} disagreements, {elapsed:.1f}s")
    assert disagreements == 0 and checked > 50


def test_criterion_5_landmarks(criterion):
    gl2, gl4, gl5 = (GroupDatum.make(*gl(n)) for n in (2, 4, 5))
    drinfeld = GroupDatum.make(*gl(2), xi=inner_form_gl(2, 1))

    lt = stratification_report(gl2, (1, 0))
    assert [(s.dimension, s.admissible) for s in lt.strata] == [(1, True)]
    assert lt.flag_dimension == 1

    dr = stratification_report(drinfeld, (1, 0))
    assert sorted(s.dimension for s in dr.strata) == [0, 1]
    # the oracle sees the same two Newton points
    assert {nu for nu, _ in levi_path_enumerate(drinfeld, (0, 0), (HALF, -HALF), check_stability=True)} == {
        s.cls.nu for s in dr.strata
    }

    g4 = stratification_report(gl4, (1, 1, 0, 0))
    assert sorted(s.dimension for s in g4.strata) == [0, 4]
    assert g4.fully_hn_decomposable
    ks4 = enumerate_B_mu(gl4, (1, 1, 0, 0))
    assert set(ks4.newton_points) == gln_polygon_enumerate(4, (1, 1, 0, 0))
    assert all(hn_decomposable_exhaustive(gl4, c.nu, ks4.delta).kind != "indecomposable" for c in ks4)

    rep5 = minute(gl5, (1, 1, 0, 0, 0))
    assert rep5.witnesses == [("a2", Q(6, 5))]
    # 6/5 recomputed by hand: <(1,1,0,0,0), omega_2> with omega_2 = (3/5,3/5,-2/5,-2/5,-2/5)
    assert dot((1, 1, 0, 0, 0), fundamental_weights(gl5.rd)[1]) == Q(6, 5)
    ks5 = enumerate_B_mu(gl5, (1, 1, 0, 0, 0))
    assert not is_fully_hn_decomposable(ks5)
    assert set(ks5.newton_points) == gln_polygon_enumerate(5, (1, 1, 0, 0, 0))
    third = Q(1, 3)
    witness = (HALF, HALF, third, third, third)
    assert hn_decomposable_exhaustive(gl5, witness, ks5.delta).kind == "indecomposable"

    for n in range(2, 9):
        gd = GroupDatum.make(*gl(n))
        for mu in ((1,) + (0,) * (n - 1), (1,) * (n - 1) + (0,)):
            assert minute(gd, mu).minute
            assert is_fully_hn_decomposable(enumerate_B_mu(gd, mu))
            assert is_fully_hn_decomposable(enumerate_B_dual(gd, mu))
    criterion("Lubin-Tate {1}, Drinfeld {1,0}, GL_4 w2 {4,0} fully dec., GL_5 w2 witness 6/5, GL_n w1/w_{n-1} n<=8")


def test_criterion_6_structural_invariants(criterion):
    rng = random.Random(20261016)
    sets = 0
    for e, gd in catalog():
        rd, rel = gd.rd, gd.rel
        for mu in e.mus():
            assert w0_negate_dominant(rd, w0_negate_dominant(rd, mu)) == tuple(mu)
            for ks in (enumerate_B_mu(gd, mu), enumerate_B_dual(gd, mu)):
                sets += 1
                keys = [c.key() for c in ks]
                assert len(set(keys)) == len(keys)
                assert sum(c.basic for c in ks) == 1
        # defining pairing of omega_tilde against averaged simple coroots
        for k in range(rel.size):
            for i in range(rd.n_simple):
                avg = galois_average(rd, gd.g, rd.simple_coroots[i])
                assert dot(avg, rel.omega_tilde[k]) == int(i in rel.orbits[k])

    # partial order axioms; triples are drawn from Kottwitz sets of one central degree so that
    # many pairs are comparable (points with different central parts never are)
    gd = GroupDatum.make(*gl(5))
    mus = [mu for mu in dominant_mus(5, (0, 1, 2, 3)) if sum(mu) == 5]
    pool = sorted({nu for mu in mus for nu in enumerate_B_mu(gd, mu).newton_points})
    comparable_chains = 0
    for _ in range(1000):
        a, b, c = (rng.choice(pool) for _ in range(3))
        leq = lambda x, y: leq_dominance(gd.rel, x, y)
        assert leq(a, a)
        if leq(a, b) and leq(b, a):
            assert a == b
        if leq(a, b) and leq(b, c):
            comparable_chains += 1
            assert leq(a, c)
    criterion(f"{sets} sets checked, 1000 random triples from {len(pool)} points ({comparable_chains} chains a<=b<=c), zero tolerance")
    assert comparable_chains > 10


def test_criterion_7_levi_lemma(criterion):
    t0 = time.perf_counter()
    checked = bad = 0
    for e, gd in catalog():
        if gd.rd.rank > 4:
            continue
        for mu in itertools.product((0, 1), repeat=gd.rd.rank):
            if gd.rd.is_dominant(mu):
                checked += 1
                bad += len(levi_lemma_counterexamples(gd, mu))
    elapsed = time.perf_counter() - t0
    criterion(f"{checked} (datum, mu), {bad} counterexamples, {elapsed:.1f}s (limit 30s)")
    assert bad == 0 and checked > 50
    assert elapsed < 30


_ALPHABET = "(){}[];,:/-0123456789 \n#abcdefghijklmnopqrstuvwxyz_."


def _mutate(rng, text):
    for _ in range(rng.randint(1, 4)):
        op, i = rng.randrange(5), rng.randrange(len(text) + 1)
        j = rng.randrange(len(text) + 1)
        a, b = sorted((i, j))
        if op == 0 and text:
            text = text[:i] + text[i + 1 :]
        elif op == 1:
            text = text[:i] + rng.choice(_ALPHABET) + text[i:]
        elif op == 2 and text:
            text = text[:i] + rng.choice(_ALPHABET) + text[i + 1 :]
        elif op == 3:
            text = text[:i] + text[a:b] + text[i:]
        else:
            text = text[:a] + text[b:]
    return text


def test_criterion_8_parser(criterion):
    valid = sorted(FIXTURES.glob("*.kw"))
    for path in valid:
        s = parse(path.read_text())
        assert parse(serialize(s)) == s
        assert serialize(parse(serialize(s))) == serialize(s)
    malformed = sorted((FIXTURES / "malformed").glob("*.kw"))
    for path in malformed:
        try:
            parse(path.read_text())
        except DSLError as err:
            assert err.line >= 1 and err.col >= 1
            assert f"line {err.line}, column {err.col}" in str(err)
        else:
            raise AssertionError(f"{path.name} parsed")

    rng = random.Random(8)
    seeds = [p.read_text() for p in valid]
    codes = {0: 0, 1: 0}
    for _ in range(10_000):
        text = _mutate(rng, rng.choice(seeds))
        out, err = io.StringIO(), io.StringIO()
        code = main(["parse", "--file", "-"], stdin=io.StringIO(text), stdout=out, stderr=err)
        assert code in (0, 1)
        codes[code] += 1
        if code == 1:
            # clean rejection: a positioned message and nothing on stdout
            assert out.getvalue() == "" and "Traceback" not in err.getvalue()
            assert err.getvalue().startswith(("parse error:", "error:"))
        else:
            # a mutant that still parses is a valid scenario and must round-trip
            assert parse(out.getvalue()) == parse(text)
    criterion(
        f"{len(valid)} round-trips, {len(malformed)} positioned errors, "
        f"10000 mutations: {codes[1]} exit 1, {codes[0]} still valid (exit 0), 0 crashes"
    )
