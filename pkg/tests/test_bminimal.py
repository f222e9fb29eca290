import pytest

from detblow.bminimal import (curve_degree_from_twists, genus_minimal, profile_from_degree, split_degree,
                              template)
from detblow.hilburch import DegreeMatrix, genus_from_twists, plane_section_genus
from conftest import cached_bminimal


@pytest.mark.parametrize("s,d,k", [(3, 1, 2), (6, 2, 3), (7, 3, 1), (8, 3, 2), (10, 3, 4), (11, 4, 1),
                                   (12, 4, 2), (16, 5, 1), (17, 5, 2)])
def test_split_degree(s, d, k):
    assert split_degree(s) == (d, k)


@pytest.mark.parametrize("d,k,rows", [
    (3, 1, [[2, 2, 2], [1, 1, 1]]),
    (3, 2, [[1, 2, 2], [1, 2, 2]]),
    (3, 3, [[1, 1, 1, 2]] * 3),
    (3, 4, [[1] * 5] * 4),
    (4, 1, [[2, 2, 2, 2], [1, 1, 1, 1], [1, 1, 1, 1]]),
    (4, 2, [[2, 2, 2], [2, 2, 2]]),
])
def test_templates(d, k, rows):
    assert template(d, k) == DegreeMatrix(rows)


@pytest.mark.parametrize("s,g", [(3, 0), (4, 1), (6, 3), (7, 5), (8, 7), (9, 9), (10, 11), (11, 14), (12, 17)])
def test_genus_minimal_frozen(s, g):
    assert genus_minimal(s) == g


@pytest.mark.parametrize("s", range(3, 31))
def test_genus_agrees_with_twists(s):
    prof = profile_from_degree(s)
    gens, syz = prof.template.twists()
    assert genus_from_twists(syz, gens) == genus_minimal(s) == prof.genus
    assert curve_degree_from_twists(syz, gens) == s
    assert prof.gens_deg_d + prof.gens_deg_d1 == prof.rho + 1


@pytest.mark.parametrize("s", [5, 7, 9])
def test_genus_from_plane_section(s):
    assert plane_section_genus(cached_bminimal(s)) == genus_minimal(s)


def test_small_degree_rejected():
    with pytest.raises(ValueError):
        split_degree(2)
