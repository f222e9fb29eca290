"""Numerology of Betti-minimal space curves: (d, k), rho, the two degree-matrix
templates, their resolutions and the minimal genus."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .algebra import DEFAULT_PRIME
from .graded import BettiTable
from .hilburch import DegreeMatrix, HilbertBurchMatrix, genus_from_twists, sample_nondegenerate


@dataclass(frozen=True)
class BMinimalProfile:
    s: int
    d: int
    k: int
    rho: int
    gens_deg_d: int
    gens_deg_d1: int
    template: DegreeMatrix
    betti: BettiTable
    genus: int

    @property
    def sigma(self) -> int:
        return self.d + 1

    def to_dict(self) -> dict:
        return {
            "s": self.s, "d": self.d, "k": self.k, "rho": self.rho, "sigma": self.sigma,
            "gens_deg_d": self.gens_deg_d, "gens_deg_d1": self.gens_deg_d1,
            "template": self.template.as_lists(), "betti": self.betti.as_lists(),
            "genus": self.genus,
        }


def split_degree(s: int) -> tuple[int, int]:
    """(d, k) with d = min{t : s <= C(t+2, 2)} and s = C(d+1, 2) + k."""
    if s < 3:
        raise ValueError("degree must be at least 3")
    d = 0
    while comb(d + 2, 2) < s:
        d += 1
    return d, s - comb(d + 1, 2)


def template(d: int, k: int) -> DegreeMatrix:
    if d <= 2 * k:
        row = [1] * (2 * k - d) + [2] * (d - k + 1)
        return DegreeMatrix([row] * k)
    cols = d - k + 1
    return DegreeMatrix([[2] * cols] * k + [[1] * cols] * (d - 2 * k))


def genus_minimal(s: int) -> int:
    """Sum over t >= 1 of s - min(C(t+2, 2), s)."""
    if s < 3:
        raise ValueError("degree must be at least 3")
    total, t = 0, 1
    while comb(t + 2, 2) < s:
        total += s - comb(t + 2, 2)
        t += 1
    return total


def profile_from_degree(s: int) -> BMinimalProfile:
    d, k = split_degree(s)
    tpl = template(d, k)
    gens, syz = tpl.twists()
    return BMinimalProfile(
        s=s, d=d, k=k, rho=k if d <= 2 * k else d - k,
        gens_deg_d=d - k + 1, gens_deg_d1=max(0, 2 * k - d), template=tpl,
        betti=BettiTable.from_resolution(gens, syz), genus=genus_from_twists(syz, gens))


def sample_bminimal(s: int, n: int = 3, seed: int = 0, p: int = DEFAULT_PRIME,
                    retries: int = 5) -> HilbertBurchMatrix:
    return sample_nondegenerate(profile_from_degree(s).template, n, seed, p, retries)


def curve_degree_from_twists(n_twists, d_twists) -> int:
    """Degree of an a.C.M. space curve from its resolution twists."""
    return (sum(x * x for x in n_twists) - sum(x * x for x in d_twists)) // 2
