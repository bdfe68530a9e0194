import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coverdual.covers import QuadraticForm, make_cover, weyl_invariant_form
from coverdual.realforms import (
    HALF,
    GenuineCoset,
    RealFormError,
    RealTorusCover,
    cover_from_kappa,
    ds_fiber_report,
    ds_input,
    ds_input_from_cover,
    ds_parameter_orbits,
    dominant_representative,
    genuine_character_coset,
    kappa_from_invariants,
    kappa_value,
    mp2_input,
    synthetic_index_two,
)
from coverdual.rootdata import build_root_datum
from oracles import rank_one_parameters

F = Fraction


def test_kappa_examples():
    even = RealTorusCover(QuadraticForm.from_matrix([[2, 1], [1, 4]]), (0, 0))
    assert kappa_from_invariants(even) == (0, 0)
    assert kappa_from_invariants(RealTorusCover(QuadraticForm.from_matrix([[1]]), (0,))) == (HALF,)
    assert kappa_from_invariants(RealTorusCover(QuadraticForm.from_matrix([[1]]), (HALF,))) == (0,)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from([F(0), HALF]), min_size=1, max_size=4))
def test_kappa_roundtrip(kappa):
    assert kappa_from_invariants(cover_from_kappa(kappa)) == tuple(kappa)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_kappa_linear(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    # even polar form: symmetric off-diagonal halves, arbitrary diagonal
    C = [[0] * r for _ in range(r)]
    for i in range(r):
        C[i][i] = rng.randint(-3, 3)
        for j in range(i):
            C[i][j] = 2 * rng.randint(-2, 2)
    eta = tuple(rng.choice([F(0), HALF]) for _ in range(r))
    cover = RealTorusCover(QuadraticForm.from_matrix(C), eta)
    kappa = kappa_from_invariants(cover)
    y = [rng.randint(-4, 4) for _ in range(r)]
    direct = (sum(e * a for e, a in zip(eta, y)) + F(cover.Q(y), 2)) % 1
    assert kappa_value(kappa, y) == direct


def test_non_sharp_rejected():
    with pytest.raises(RealFormError):
        RealTorusCover(QuadraticForm.from_matrix([[1, 1], [0, 1]]), (0, 0))


def test_coset_membership():
    assert (F(3),) in GenuineCoset.of([0])
    c = genuine_character_coset([HALF])
    assert (F(-1, 2),) in c and (F(3, 2),) in c
    assert (F(1),) not in c
    assert (F(1, 4),) not in c
    assert (F(1, 4),) not in genuine_character_coset([0])
    assert sorted(c.points(2)) == [(F(x, 2),) for x in (-3, -1, 1, 3)]
    with pytest.raises(RealFormError):
        GenuineCoset.of([F(1, 3)])


@pytest.mark.parametrize("R", [F(1, 2), 1, 3, F(9, 2), 5, 8])
def test_rank_one_orbits_match_oracle(R):
    mp2 = [v[0] for v in ds_parameter_orbits(mp2_input(R))]
    assert mp2 == rank_one_parameters(HALF, F(1), F(1), F(R))
    lin = [v[0] for v in ds_parameter_orbits(mp2_input(R, trivial=True))]
    assert lin == rank_one_parameters(F(0), F(1), F(1), F(R))
    assert F(0) not in lin


def test_mp2_fibers_singletons():
    rep = ds_fiber_report(mp2_input(5))
    assert rep.cardinalities == (1,) * 5
    js = rep.to_json(mp2_input(5))
    assert set(js) == {"lattice", "R", "orbits", "fibers"}
    assert js["orbits"][0]["rep"] == ["1/2"]


def test_index_two_fibers_alternate():
    rep = ds_fiber_report(synthetic_index_two(5))
    base = [v[0] for v in rep.base]
    assert base == rank_one_parameters(F(0), F(1), HALF, F(5))
    assert rep.cardinalities == tuple(i % 2 for i in range(len(base)))
    for v, fiber in zip(rep.base, rep.fibers):
        assert bool(fiber) == (v[0].denominator == 1)


def test_empty_and_invalid():
    assert ds_fiber_report(mp2_input(F(1, 4))).base == ()
    with pytest.raises(RealFormError):
        mp2_input(0)
    with pytest.raises(RealFormError):
        mp2_input(-1)


@pytest.mark.parametrize("family, rank, n", [("A", 2, 2), ("B", 2, 2), ("C", 2, 2), ("G", 2, 2), ("A", 2, 3)])
def test_orbits_are_w_stable_and_monotone(family, rank, n):
    rd = build_root_datum(family, rank)
    cs = make_cover(rd, weyl_invariant_form(rd, 1), n)
    kappa = [0] * rd.x_rank
    counts = []
    for R in (2, 3, 4):
        ds = ds_input_from_cover(cs, kappa, R)
        reps = ds_parameter_orbits(ds)
        assert len(set(reps)) == len(reps)
        for v in reps:
            for w in ds.weyl:
                wv = tuple(sum(w[a][b] * v[b] for b in range(len(v))) for a in range(len(v)))
                assert dominant_representative(ds, wv) == v
        counts.append(len(reps))
    assert counts == sorted(counts)


@pytest.mark.parametrize("kappa", [[0, 0], [HALF, 0], [HALF, HALF]])
def test_cross_enumeration_with_coset(kappa):
    # with X_{Q,n} = X, admissible points are exactly rho + (kappa + X), regular, up to W
    rd = build_root_datum("A", 2)
    ds = ds_input(rd, kappa, 4)
    coset = genuine_character_coset(kappa)
    expected = set()
    for pt in coset.points(6):
        xi = tuple(p + r for p, r in zip(pt, ds.rho))
        if ds.norm_sq(xi) <= 16 and all(sum(c * x for c, x in zip(cv, xi)) for cv in ds.coroots):
            expected.add(dominant_representative(ds, xi))
    assert set(ds_parameter_orbits(ds, "X")) == expected
