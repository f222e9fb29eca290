import numpy as np
import pytest

from detblow.graded import CapExceeded
from detblow.hilburch import intersection_length
from detblow.secants import (build_system, find_secant_lines, generic_rank, line_locus, rank_locus,
                             rational_points, search_secant_witnesses, secant_locus, solution_space)
from conftest import cached_linear, linear_matrix


def test_system_shapes_and_duality():
    m = cached_linear(4)
    s = build_system(m)
    assert (s.Z.rows, s.Z.cols, s.Z.nvars) == (4, 5, 4)
    assert (s.N.rows, s.N.cols, s.N.nvars) == (4, 4, 5)
    rng = np.random.default_rng(0)
    z = [int(x) for x in rng.integers(0, m.p, 4)]
    y = [int(x) for x in rng.integers(0, m.p, 5)]
    w = [int(x) for x in rng.integers(0, m.p, 4)]
    # sum_ijk z_i y_j w_k delta = z^T M(w) y = w^T Z(z) y = z^T N(y) w
    mw = np.array(m.entries.evaluate(w), dtype=object)
    zz = np.array(s.Z.evaluate(z), dtype=object)
    ny = np.array(s.N.evaluate(y), dtype=object)
    a = int(np.array(z, dtype=object) @ mw @ np.array(y, dtype=object)) % m.p
    b = int(np.array(w, dtype=object) @ zz @ np.array(y, dtype=object)) % m.p
    c = int(np.array(z, dtype=object) @ ny @ np.array(w, dtype=object)) % m.p
    assert a == b == c


def test_generic_ranks():
    s = build_system(cached_linear(4))
    assert generic_rank(s.Z) == 4 and generic_rank(s.N) == 4


def test_gamma_for_quartic_is_twenty_points():
    s = build_system(cached_linear(4))
    rep = secant_locus(s)
    assert (rep.empty, rep.dimension, rep.degree) == (False, 0, 20)
    assert rep.codimension == 4


@pytest.mark.parametrize("n,sigma,lines,secants", [
    (3, 3, False, True), (3, 4, False, True), (3, 5, False, False), (3, 6, False, False),
    (4, 5, False, True), (4, 7, False, False),
])
def test_thresholds(n, sigma, lines, secants):
    s = build_system(cached_linear(sigma, n))
    assert (line_locus(s).empty is False) == lines
    assert (secant_locus(s).empty is False) == secants


def test_trisecant_of_sextic():
    s = build_system(cached_linear(3))
    rep = secant_locus(s)
    assert (rep.dimension, rep.degree) == (1, 6)


def test_whole_space_when_no_minors_exist():
    s = build_system(cached_linear(2))
    rep = rank_locus(s.Z, 3, "trivial")
    assert rep.empty is False and rep.dimension == s.Z.nvars - 1


def test_undetermined_on_budget_overflow(monkeypatch):
    from detblow import graded
    monkeypatch.setattr(graded.GradedIdeal, "budget", 1000)
    rep = secant_locus(build_system(cached_linear(4)))
    assert rep.empty is None and rep.note.startswith("undetermined")


def test_rational_points_are_on_gamma():
    s = build_system(cached_linear(4))
    rep = secant_locus(s)
    pts = rational_points(rep)
    for y in pts:
        assert all(g.evaluate(list(y)) == 0 for g in rep.ideal.generators)
        assert solution_space(s, y).shape[0] == 2


def test_witness_lines_are_four_secant():
    m = cached_linear(4)
    found = find_secant_lines(build_system(m))
    assert found
    for _, line in found:
        assert intersection_length(m, line) == 4


def test_small_field_search_matches_gamma():
    m = linear_matrix(4, 3, 3, p=13)
    found = search_secant_witnesses(build_system(m))
    assert found and all(w.length == 4 for w in found)
    rep = secant_locus(build_system(m))
    for w in found:
        assert all(g.evaluate(list(w.parameter)) == 0 for g in rep.ideal.generators)


def test_search_refuses_large_fields():
    with pytest.raises(CapExceeded):
        search_secant_witnesses(build_system(cached_linear(4)))
