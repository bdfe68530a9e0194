from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coverdual.covers import (
    CoverError,
    QuadraticForm,
    center_and_tau,
    check_mod_n_equivalence,
    dual_group,
    generate_table,
    lattice_YQn,
    levi_embedding,
    make_cover,
    modified_root_datum,
    sc_characterization_check,
    sl_tau_pattern,
    table_csv,
    weyl_equivariance_violation,
    weyl_invariant_form,
)
from coverdual.rootdata import build_root_datum, validate
from oracles import yqn_box

GOLDEN = Path(__file__).parent / "golden"


def sc_cover(letter, ell, n, t=1):
    rd = build_root_datum(letter, ell)
    return make_cover(rd, weyl_invariant_form(rd, t), n)


@pytest.mark.parametrize("family, fname", [("SL", "table1_SL.csv"), ("Sp", "table3_Sp.csv")])
def test_small_tables_match_golden(family, fname):
    assert table_csv(generate_table(family)) == (GOLDEN / fname).read_text()


@pytest.mark.parametrize("letter, ell, n, t", [("A", 2, 3, 1), ("B", 2, 4, 1), ("C", 3, 2, 1), ("G", 2, 3, 1),
                                               ("A", 3, 2, 2), ("B", 3, 6, 1)])
def test_yqn_against_box_oracle(letter, ell, n, t):
    cs = sc_cover(letter, ell, n, t)
    Y_qn, nX = lattice_YQn(cs)
    box = yqn_box(cs.form.C, cs.n, 3)
    for y in box:
        assert y in Y_qn
    assert all(y not in Y_qn for y in __import__("itertools").product(range(-3, 4), repeat=ell) if y not in box)
    # n X_{Q,n} pairs with Y_{Q,n} into n Z
    for x in nX.basis:
        for h in Y_qn.basis:
            assert sum(a * b for a, b in zip(x, h)) % cs.n == 0


@pytest.mark.parametrize("letter, ell", [("A", 2), ("B", 2), ("C", 2), ("G", 2), ("A", 3)])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_modified_datum_is_valid_and_equivariant(letter, ell, n):
    cs = sc_cover(letter, ell, n)
    assert validate(modified_root_datum(cs)).ok
    assert weyl_equivariance_violation(cs) is None


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("letter, ell", [("A", 1), ("C", 3), ("B", 3), ("A", 5)])
def test_tau_trivial_for_odd_degree(letter, ell, n):
    assert center_and_tau(sc_cover(letter, ell, n)).tau_trivial


def test_sl_degree_two_tau_pattern():
    # nontrivial for SL_2, SL_6, SL_10 in degree 2; SL_4 in degree 4
    pat = sl_tau_pattern(10, 4)
    assert [m for m in range(2, 11) if pat[(m, 2)]] == [2, 6, 10]
    assert pat[(4, 4)] and not pat[(2, 4)]


def test_odd_degree_normalization():
    rd = build_root_datum("A", 1)
    cs = make_cover(rd, weyl_invariant_form(rd, 1), 3)
    assert cs.normalized and cs.form.is_even()
    with pytest.raises(CoverError):
        make_cover(rd, weyl_invariant_form(rd, 1), 3, strict=True)


def test_non_invariant_form_rejected():
    rd = build_root_datum("A", 2)
    with pytest.raises(CoverError):
        make_cover(rd, QuadraticForm.from_matrix([[1, 0], [0, 2]]), 2)


def test_summary_text():
    cs = sc_cover("C", 3, 2)
    assert center_and_tau(cs).summary() == "Sp_6, center Z/2, tau: nontrivial"


def test_levi_inherits_tau():
    rep = levi_embedding(sc_cover("C", 3, 2), [1, 2])
    assert rep.report.tau_values == rep.ambient.tau_values
    assert rep.report.name.label.startswith("Sp_4")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("A", 2), ("B", 2), ("C", 3), ("G", 2), ("A", 3)]), st.integers(1, 3),
       st.integers(0, 3), st.integers(1, 6))
def test_mod_n_invariance_property(t, a, b, n):
    rd = build_root_datum(*t)
    Q = weyl_invariant_form(rd, a)
    Q0 = Q.plus(weyl_invariant_form(rd, 1).scaled(n * b))
    assert check_mod_n_equivalence(rd, Q, Q0, n)


def test_gl_and_gsp_named():
    rd = build_root_datum("GL", 3)
    assert dual_group(rd, weyl_invariant_form(rd, gl=(1, 0)), 2).name.label == "GL_3"
    rd = build_root_datum("GSp", 3)
    assert dual_group(rd, weyl_invariant_form(rd, gsp=(0, 1)), 2).name.label == "GSp_6"


def test_sc_characterization_needs_simply_connected():
    rd = build_root_datum("A", 2, "adjoint")
    with pytest.raises(CoverError):
        sc_characterization_check(make_cover(rd, weyl_invariant_form(rd, 3), 2), 2)
