import itertools
import random

import pytest
from hypothesis import given, settings

from coverdual.localarith import LocalElement, Place, hilbert_n_tame
from coverdual.torus import (
    FiniteModel,
    TorusCover,
    TorusElement,
    TorusError,
    basis_change_twist,
    center_of_cover,
    cocycle_theta,
    commutator,
    composition_defect,
    swap_datum_cover,
    theta_sharp_compare,
    twist_exponents,
    unramified_orbit_transfer,
)
from oracles import center_by_multiplication, twist_by_expansion
from strategies import random_even_polar, random_unimodular, seeds


def el(q, p):
    return LocalElement.from_rational(q, Place(p))


def test_theta_examples():
    cover = TorusCover([[1]], 2, 5)
    five = TorusElement.power(el(5, 5), [1])
    assert cocycle_theta(cover, five, five) == 0
    one = TorusElement.identity(Place(5), 1)
    assert cocycle_theta(cover, one, five) == 0
    units = TorusElement.power(el(2, 5), [1]), TorusElement.power(el(3, 5), [1])
    assert cocycle_theta(cover, *units) == 0


def test_place_mismatch_rejected():
    cover = TorusCover([[1]], 2, 5)
    with pytest.raises(TorusError):
        cocycle_theta(cover, TorusElement.power(el(7, 7), [1]), TorusElement.power(el(5, 5), [1]))
    with pytest.raises(TorusError):
        TorusCover([[1]], 3, 5)


@pytest.mark.parametrize("C, n, p", [([[1]], 3, 7), ([[1, 2], [0, 1]], 2, 5), ([[2, 1], [1, 1]], 3, 13)])
def test_theta_bimultiplicative_on_model(C, n, p):
    cover = TorusCover(C, n, p)
    model = FiniteModel.of(cover)
    pts = list(model.torus_points())
    rng = random.Random(0)
    for _ in range(60):
        a, b, c = rng.choice(pts), rng.choice(pts), rng.choice(pts)
        ab = tuple(((x[0] + y[0]) % n, (x[1] + y[1]) % n) for x, y in zip(a, b))
        assert model.theta(ab, c) == (model.theta(a, c) + model.theta(b, c)) % n
        assert model.theta(c, ab) == (model.theta(c, a) + model.theta(c, b)) % n
        # the model agrees with symbols evaluated on actual field elements
        assert model.theta(a, c) == cocycle_theta(cover, model.element(a), model.element(c))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_commutator_identity(seed):
    rng = random.Random(seed)
    n, p = rng.choice([(2, 5), (3, 7), (3, 13), (4, 13)])
    r = rng.randint(1, 2)
    cover = TorusCover([[rng.randint(-2, 2) for _ in range(r)] for _ in range(r)], n, p)
    y1 = [rng.randint(-3, 3) for _ in range(r)]
    y2 = [rng.randint(-3, 3) for _ in range(r)]
    u = LocalElement.from_parts(Place(p), rng.randint(-2, 2), rng.randint(1, p - 1))
    v = LocalElement.from_parts(Place(p), rng.randint(-2, 2), rng.randint(1, p - 1))
    c12 = commutator(cover, (y1, u), (y2, v))
    c21 = commutator(cover, (y2, v), (y1, u))
    assert (c12 + c21) % n == 0
    assert c12 == cover.form.bilinear(y1, y2) * hilbert_n_tame(u, v, n) % n
    if cover.sharp:
        assert c12 == 0


def test_commutator_examples():
    assert commutator(TorusCover([[1]], 3, 7), ([1], el(7, 7)), ([1], el(7, 7))) == 0
    assert commutator(TorusCover([[1, 0], [0, 1]], 2, 5), ([1, 0], el(5, 5)), ([0, 1], el(2, 5))) == 0


@pytest.mark.parametrize("C, n, p, order", [([[1]], 2, 5, 8), ([[1]], 3, 7, 3), ([[1, 0], [0, 1]], 2, 5, 32),
                                            ([[1, 1], [0, 1]], 3, 7, 27)])
def test_center_against_multiplication_oracle(C, n, p, order):
    rep = center_of_cover(TorusCover(C, n, p))
    assert rep.matches
    assert rep.center_order == center_by_multiplication(C, n, p) == order


def test_sharp_cover_is_abelian():
    cover = TorusCover([[1, 0], [0, 1]], 2, 13)
    assert cover.sharp
    rep = center_of_cover(cover)
    assert rep.center_order == rep.order


def test_center_cap():
    with pytest.raises(TorusError):
        center_of_cover(TorusCover([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 12, 13))


@pytest.mark.parametrize("C, n, p", [([[1]], 2, 5), ([[6]], 3, 7), ([[1, 1], [1, 1]], 2, 13), ([[2, 0], [4, 1]], 2, 13)])
def test_theta_sharp(C, n, p):
    cover = TorusCover(C, n, p)
    assert cover.sharp
    for u, v in itertools.product([p, 2, 3, 2 * p, p * p * 3], repeat=2):
        rep = theta_sharp_compare(cover, el(u, p), el(v, p), g=[[1]] if len(C) == 1 else [[1, 1], [0, 1]])
        assert rep.equal and rep.basis_invariant
        if n % 2:
            assert set(rep.lhs) == {0}


def test_theta_sharp_rejects_nonsharp():
    with pytest.raises(TorusError):
        theta_sharp_compare(TorusCover([[1]], 3, 7), el(7, 7), el(3, 7))


def test_basis_change_examples():
    assert twist_exponents([[1, 2], [0, 3]], [[1, 0], [0, 1]]) == (0, 0)
    for c in range(-3, 4):
        assert twist_exponents([[c]], [[-1]]) == (c % 2,)
    for c1, c2 in itertools.product(range(3), repeat=2):
        C = [[c1, 0], [0, c2]]
        assert twist_exponents(C, [[0, 1], [1, 0]]) == twist_by_expansion(C, [[0, 1], [1, 0]]) == (0, 0)
    rep = basis_change_twist([[1]], [[-1]], el(3, 5), 2)
    # chi(3) = Hilb_2(3, 3) = Hilb_2(3, -1) = 1 at p = 5
    assert rep.exponents == (1,) and rep.chi == 0 and rep.involutive
    with pytest.raises(TorusError):
        twist_exponents([[1]], [[2]])


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_twist_matches_expansion_oracle(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    C = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(r)]
    g = random_unimodular(rng, r)
    assert twist_exponents(C, g) == twist_by_expansion(C, g)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_twist_composition_law(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    C = random_even_polar(rng, r)
    g, h = random_unimodular(rng, r), random_unimodular(rng, r)
    assert composition_defect(C, g, h) == (0,) * r


def test_composition_law_fails_without_even_polar_form():
    # c_12 + c_21 odd: the splitting is not a homomorphism and the law breaks for some pair
    C = [[0, 1], [0, 0]]
    rng = random.Random(1)
    pairs = [(random_unimodular(rng, 2), random_unimodular(rng, 2)) for _ in range(50)]
    assert any(any(composition_defect(C, g, h)) for g, h in pairs)


@pytest.mark.parametrize("kind", ["split-A1", "A1xA1-swap", "A2-swap"])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_orbit_transfer(kind, m):
    rep = unramified_orbit_transfer(swap_datum_cover(kind), m)
    assert rep.bijective and rep.source_orbits == rep.target_orbits


def test_orbit_transfer_trivial_frobenius_is_identity():
    rep = unramified_orbit_transfer(swap_datum_cover("split-A1"), 4)
    # W = {1, -1} on Y_{Q,2} = Y; characters of level 4 up to sign: 0, 1/4, 1/2
    assert rep.source_orbits == rep.target_orbits == 3
