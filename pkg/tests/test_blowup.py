import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detblow.algebra import Form, generic_form
from detblow.blowup import (assemble_ideal, build_B, build_H, build_psi, build_X, check_B, en_betti_table,
                            extract_coefficients, split_quadric)
from detblow.graded import BettiTable, betti_to_hilbert
from detblow.hilburch import analyze
from conftest import cached_bminimal, cached_linear

P = 2**31 - 1
HALF = pow(2, -1, P)


def test_split_quadric_cases():
    q = Form(4, 2, {(1, 1, 0, 0): 1}, P)
    beta = split_quadric(q)
    assert beta[0][1] == beta[1][0] == HALF
    assert sum(map(sum, beta)) % P == 1
    assert split_quadric(Form(4, 2, {(0, 0, 2, 0): 1}, P))[2][2] == 1
    with pytest.raises(ValueError):
        split_quadric(Form(4, 2, {(0, 0, 2, 0): 1}, 2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_split_quadric_roundtrip(seed):
    q = generic_form(4, 2, random.Random(seed), P)
    beta = split_quadric(q)
    w = [Form.variable(4, i, P) for i in range(4)]
    back = Form.zero(4, 2, P)
    for h in range(4):
        for i in range(4):
            back = back + (w[h] * w[i]).scale(beta[h][i])
    assert back == q
    assert all(beta[h][i] == beta[i][h] for h in range(4) for i in range(4))


def test_example_one_parts(c75):
    psi = build_psi(c75, "sigma")
    assert psi.target_degree == 4
    assert len(psi.F) == 3 and len(psi.G) == 0 and psi.nvars == 12
    X = build_X(psi)
    assert (X.rows, X.cols) == (4, 3)
    B = build_B(psi, extract_coefficients(c75, psi))
    assert (B.rows, B.cols) == (1, 4)
    check_B(psi, B, X)
    assert len(build_H(c75, psi)) == 1


def test_trivial_syzygy_maps_to_zero(c75):
    psi = build_psi(c75, "sigma")
    x = lambda h, j: Form.variable(psi.nvars, psi.x_index(h, j), P)
    f = x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0)
    assert psi.apply(f).is_zero()
    # a single variable maps to w_h F_j
    w0 = Form.variable(4, 0, P)
    assert psi.apply(x(0, 0)) == w0 * psi.F[0]


def test_example_one_presentation(c75):
    pres = assemble_ideal(c75)
    assert pres.counts == {"x_minors": 18, "bx_entries": 3, "b_minors": 0, "linear_forms": 1, "total": 22}
    assert (pres.N_prime, pres.N_embed, pres.closed_form_N) == (11, 10, 11)
    assert len(set(pres.ideal.generators)) == len(pres.ideal.generators)


def test_example_two_presentation():
    pres = assemble_ideal(cached_linear(3), "sigma_plus_one")
    assert pres.counts["x_minors"] == 36 and pres.counts["linear_forms"] == 3
    assert (pres.X.rows, pres.X.cols) == (4, 4)
    assert pres.N_embed == 12 == 3 * 3 + 3


@pytest.mark.parametrize("s,k,h", [(8, 2, 0), (11, 1, 2), (12, 2, 0)])
def test_b_shape_and_linear_forms(s, k, h):
    pres = assemble_ideal(cached_bminimal(s))
    assert pres.B.rows == k and pres.B.cols == 4
    assert len(pres.H) == h
    assert pres.N_prime == pres.closed_form_N


def test_all_linear_source_is_minors_of_b():
    pres = assemble_ideal(cached_linear(4))
    assert pres.counts == {"x_minors": 0, "bx_entries": 0, "b_minors": 1, "linear_forms": 0, "total": 1}
    (g,) = pres.ideal.generators
    assert g.degree == 4 and pres.N_embed == 4


@pytest.mark.parametrize("n,sigma,table", [
    (3, 4, [[1, 4, 1]]),
    (3, 5, [[1, 4, 5], [2, 5, 4]]),
    (4, 6, [[1, 5, 6], [2, 6, 5]]),
    (3, 6, [[1, 4, 15], [2, 5, 24], [3, 6, 10]]),
])
def test_en_betti_table(n, sigma, table):
    assert en_betti_table(n, sigma).as_lists() == table


@pytest.mark.parametrize("n,sigma", [(3, 5), (3, 6), (4, 6), (4, 7), (5, 8)])
def test_en_table_has_maximal_minor_hilbert_polynomial(n, sigma):
    # the alternating sum of ranks vanishes and the first term counts the minors
    t = en_betti_table(n, sigma)
    assert t.entries[0] == (1, n + 1, comb(sigma, n + 1))
    assert 1 - sum((-1) ** (i + 1) * m for i, _, m in t.entries) == 0


def test_en_table_rejects_small_sigma():
    with pytest.raises(ValueError):
        en_betti_table(3, 3)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_degree_genus_formula_for_linear_sources(d):
    rep = analyze(cached_linear(d))
    assert rep.genus == comb(d + 1, 2) * (2 * d - 5) // 3 + 1


@settings(max_examples=12, deadline=None)
@given(st.integers(3, 12), st.integers(0, 10**4))
def test_generators_are_annihilated(s, seed):
    from detblow.bminimal import sample_bminimal
    pres = assemble_ideal(sample_bminimal(s, seed=seed))
    assert all(pres.psi.annihilates(g) for g in pres.ideal.generators)
