from math import comb

import numpy as np
import pytest

from detblow.algebra import Form
from detblow.graded import (BettiTable, CapExceeded, GradedIdeal, betti_to_hilbert, differences,
                            fit_by_sections, fit_direct, hilbert_poly_fit, hilbert_table, locus_profile,
                            sigma, thread_count)
from detblow.hilburch import variety_ideal
from conftest import cached_linear

P = 2**31 - 1


def var(n, i):
    return Form.variable(n, i, P)


def test_complete_intersection_of_two_quadrics():
    # (x0^2, x1^2) in 4 variables: H(t) = 4t for t >= 1 (a line counted 4 times, degree 4)
    ideal = GradedIdeal([var(4, 0) ** 2, var(4, 1) ** 2], 4, P)
    table = BettiTable(((1, 2, 2), (2, 4, 1)))
    for t in range(8):
        assert ideal.hilbert(t) == betti_to_hilbert(table, 4, t)
    fit = fit_direct(ideal)
    assert (fit.dimension, fit.degree) == (1, 4)


def test_twisted_cubic_hilbert(twisted_cubic):
    ideal = variety_ideal(twisted_cubic)
    assert [ideal.hilbert(t) for t in range(6)] == [1, 4, 7, 10, 13, 16]
    assert sigma(ideal, 3) == 2
    assert fit_direct(ideal).as_tuple() == (1, 3, 0)


@pytest.mark.parametrize("values,order,want", [
    ([1, 4, 7, 10], 1, [1, 3, 3, 3]),
    ([1, 4, 7, 10], 2, [1, 2, 0, 0]),
    ([1, 3, 6], 0, [1, 3, 6]),
])
def test_differences(values, order, want):
    assert differences(values, order) == want


def test_empty_ideal_and_whole_ring():
    ideal = GradedIdeal([], 3, P)
    assert [ideal.hilbert(t) for t in range(4)] == [1, 3, 6, 10]
    unit = GradedIdeal([var(2, 0), var(2, 1)], 2, P)
    assert unit.hilbert(3) == 0 and unit.filled(2)
    assert locus_profile(unit).empty


def test_sections_agree_with_direct_on_curves():
    for sg in (2, 3, 4):
        ideal = variety_ideal(cached_linear(sg))
        assert fit_by_sections(ideal).as_tuple() == fit_direct(ideal).as_tuple()


def test_linear_elimination_preserves_hilbert():
    extra = Form.linear([1, 2, 3, 4], P)
    base = variety_ideal(cached_linear(2))
    lifted = [Form(5, g.degree, {e + (0,): c for e, c in g.terms.items()}, P) for g in base.generators]
    hyper = Form.linear([1, 2, 3, 4, 5], P)
    ideal = GradedIdeal(lifted + [hyper], 5, P)
    work = ideal.eliminate_linear()
    assert work.nvars == 4
    assert [work.hilbert(t) for t in range(5)] == [ideal.hilbert(t) for t in range(5)]


def test_budget_guard():
    ideal = GradedIdeal([var(10, 0) ** 3], 10, P)
    ideal.budget = 1000
    with pytest.raises(CapExceeded):
        ideal.hilbert(6)


def test_hilbert_table_rows(twisted_cubic):
    rows = hilbert_table(variety_ideal(twisted_cubic), 3, 3)
    assert rows == [[0, 1, 1, 1], [1, 4, 3, 2], [2, 7, 3, 0], [3, 10, 3, 0]]


def test_betti_table_merges_and_validates():
    t = BettiTable(((1, 2, 1), (1, 2, 2), (2, 3, 0)))
    assert t.as_lists() == [[1, 2, 3]]
    with pytest.raises(ValueError):
        BettiTable(((0, 1, 1),))


@pytest.mark.parametrize("raw,ok", [("1", True), ("8", True), ("0", False), ("x", False)])
def test_thread_count_env(monkeypatch, raw, ok):
    monkeypatch.setenv("DETBLOW_THREADS", raw)
    if ok:
        assert thread_count() == int(raw)
    else:
        with pytest.raises(ValueError):
            thread_count()


def test_threaded_hilbert_values_match(monkeypatch):
    ideal = variety_ideal(cached_linear(3))
    monkeypatch.setenv("DETBLOW_THREADS", "4")
    many = GradedIdeal(ideal.generators, 4, P).hilbert_values(range(8))
    monkeypatch.setenv("DETBLOW_THREADS", "1")
    one = GradedIdeal(ideal.generators, 4, P).hilbert_values(range(8))
    assert many == one
