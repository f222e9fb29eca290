"""Graded pieces of homogeneous ideals: dimensions, Hilbert functions, sigma,
Hilbert-polynomial fits and Betti-table bookkeeping."""

from __future__ import annotations

import os
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .algebra import DEFAULT_PRIME, Form, basis, monomials, restrict_dense, ring_dimension
from .linalg import kernel_rows, nullspace_mod, rank_rows


class CapExceeded(RuntimeError):
    """A search ran past its degree cap without reaching a verdict."""


def thread_count() -> int:
    raw = os.environ.get("DETBLOW_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"DETBLOW_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"DETBLOW_THREADS must be a positive integer, got {raw!r}")
    return n


# largest elimination (rows x columns actually reduced) attempted by default
ENTRY_BUDGET = 45_000_000


class GradedIdeal:
    """Homogeneous ideal given by generators, with cached piece dimensions.

    ``budget`` caps the size of a single elimination; larger pieces raise
    CapExceeded instead of running for hours.
    """

    budget = ENTRY_BUDGET

    def __init__(self, generators: Iterable[Form], nvars: int | None = None, p: int | None = None):
        gens = list(generators)
        if nvars is None:
            if not gens:
                raise ValueError("nvars is required for an ideal without generators")
            nvars = gens[0].nvars
        self.nvars = nvars
        self.p = p if p is not None else (gens[0].p if gens else DEFAULT_PRIME)
        for g in gens:
            if g.is_zero():
                raise ValueError("generators must be nonzero")
            if g.nvars != nvars or g.p != self.p:
                raise ValueError("generators must share ring and field")
        self.generators = tuple(gens)
        by_deg: dict[int, list[np.ndarray]] = {}
        for g in gens:
            by_deg.setdefault(g.degree, []).append(g.to_dense())
        self._dense = {d: np.array(v, dtype=np.int64) for d, v in sorted(by_deg.items())}
        self._cache: dict[int, int] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_dense(cls, nvars: int, dense: dict[int, np.ndarray], p: int) -> "GradedIdeal":
        gens = []
        for d, mat in sorted(dense.items()):
            for row in np.atleast_2d(mat):
                if row.any():
                    gens.append(Form.from_dense(nvars, d, row, p))
        return cls(gens, nvars, p)

    # --------------------------------------------------------------- basics
    @property
    def degrees(self) -> list[int]:
        return [g.degree for g in self.generators]

    @property
    def max_degree(self) -> int:
        return max(self._dense) if self._dense else 0

    @property
    def min_degree(self) -> int:
        return min(self._dense) if self._dense else 0

    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return f"GradedIdeal({len(self)} generators, nvars={self.nvars}, degrees={sorted(set(self.degrees))})"

    # --------------------------------------------------------- Macaulay rows
    def _row_blocks(self, t: int):
        """(degree, multiplier exponents) for every generator degree <= t."""
        out = []
        for d in self._dense:
            if d <= t:
                out.append((d, basis(self.nvars, t - d).exps))
        return out

    def macaulay_shape(self, t: int) -> tuple[int, int]:
        nrows = sum(self._dense[d].shape[0] * len(m) for d, m in self._row_blocks(t))
        return nrows, ring_dimension(self.nvars, t)

    def _row_builder(self, t: int):
        blocks = self._row_blocks(t)
        target = basis(self.nvars, t)
        offsets = []
        start = 0
        for d, mults in blocks:
            count = self._dense[d].shape[0] * len(mults)
            offsets.append((start, start + count, d, mults))
            start += count

        def build(indices: Sequence[int]) -> np.ndarray:
            idx = np.asarray(indices, dtype=np.int64)
            out = np.zeros((len(idx), target.size), dtype=np.int64)
            for lo, hi, d, mults in offsets:
                sel = np.nonzero((idx >= lo) & (idx < hi))[0]
                if not len(sel):
                    continue
                gens = self._dense[d]
                src = basis(self.nvars, d).exps
                support = np.nonzero(gens.any(axis=0))[0]
                step = max(1, 2_000_000 // max(1, len(support) * self.nvars))
                for a in range(0, len(sel), step):
                    part = sel[a:a + step]
                    gen_i, mult_i = np.divmod(idx[part] - lo, len(mults))
                    # positions of (multiplier * support monomial) inside degree t
                    pos = target.index(mults[mult_i][:, None, :] + src[support][None, :, :])
                    out[part[:, None], pos] = gens[gen_i][:, support]
            return out

        return build

    def macaulay_matrix(self, t: int) -> np.ndarray:
        nrows, _ = self.macaulay_shape(t)
        return self._row_builder(t)(range(nrows))

    # ------------------------------------------------------------ dimensions
    def piece_dimension(self, t: int) -> int:
        if t < 0:
            raise ValueError("degree must be non-negative")
        with self._lock:
            if t in self._cache:
                return self._cache[t]
        nrows, ncols = self.macaulay_shape(t)
        self._check_budget(nrows, ncols, t)
        if nrows == 0:
            dim = 0
        elif self.min_degree == 0:
            dim = ncols
        else:
            dim = rank_rows(self._row_builder(t), nrows, ncols, self.p, seed=t)
        with self._lock:
            self._cache[t] = dim
        return dim

    def _check_budget(self, nrows: int, ncols: int, t: int) -> None:
        if min(nrows, ncols + 16) * ncols > self.budget:
            raise CapExceeded(f"degree-{t} piece in {self.nvars} variables ({nrows} x {ncols}) "
                              f"exceeds the elimination budget")

    def dual_piece(self, t: int) -> np.ndarray:
        """Rows spanning the annihilator of the degree-t piece inside R_t^*."""
        nrows, ncols = self.macaulay_shape(t)
        self._check_budget(nrows, ncols, t)
        if nrows <= ncols + 16:
            return nullspace_mod(self._row_builder(t)(range(nrows)), self.p)
        return kernel_rows(self._row_builder(t), nrows, ncols, self.p, seed=t)

    def filled(self, t: int) -> bool:
        return self.piece_dimension(t) == ring_dimension(self.nvars, t)

    def hilbert(self, t: int) -> int:
        return ring_dimension(self.nvars, t) - self.piece_dimension(t)

    def hilbert_values(self, ts: Iterable[int]) -> list[int]:
        ts = list(ts)
        threads = thread_count()
        if threads > 1 and len(ts) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(self.piece_dimension, ts))
        return [self.hilbert(t) for t in ts]

    # ---------------------------------------------------------- restriction
    def restrict(self, lin: np.ndarray) -> "GradedIdeal":
        """Pull back along x_i -> sum_j lin[i, j] u_j (a linear subspace)."""
        lin = np.asarray(lin, dtype=np.int64) % self.p
        target = lin.shape[1]
        dense = {}
        for d, mat in self._dense.items():
            if d == 0:
                dense[d] = mat
                continue
            dense[d] = restrict_dense(mat, self.nvars, d, lin, self.p)
        out = GradedIdeal.from_dense(target, dense, self.p) if any(
            m.any() for m in dense.values()) else GradedIdeal([], target, self.p)
        out.budget = self.budget
        return out

    def section(self, cuts: int, seed: int = 0) -> "GradedIdeal":
        """Intersection with ``cuts`` generic hyperplanes, in the coordinates of that subspace."""
        if cuts == 0:
            return self
        if cuts >= self.nvars:
            raise ValueError("too many cuts")
        rng = random.Random(f"section-{seed}-{cuts}-{self.nvars}")
        lin = np.array([[rng.randrange(self.p) for _ in range(self.nvars - cuts)]
                        for _ in range(self.nvars)], dtype=np.int64)
        return self.restrict(lin)

    def eliminate_linear(self) -> "GradedIdeal":
        """Equivalent ideal after solving away the linear generators.

        S/I is unchanged up to isomorphism, so Hilbert data are preserved.
        """
        if 1 not in self._dense:
            return self
        lin_gens = self._dense[1]
        ker = nullspace_mod(lin_gens, self.p)  # rows span the common zero set
        rest = {d: m for d, m in self._dense.items() if d != 1}
        reduced = GradedIdeal.from_dense(self.nvars, rest, self.p) if rest else GradedIdeal([], self.nvars, self.p)
        return reduced.restrict(ker.T)


def ideal_piece_dimension(ideal: GradedIdeal, t: int) -> int:
    return ideal.piece_dimension(t)


def hilbert_function(ideal: GradedIdeal, t: int) -> int:
    return ideal.hilbert(t)


def differences(values: Sequence[int], order: int) -> list[int]:
    """Apply the backward difference ``order`` times, with H(-1) = 0."""
    vals = list(values)
    for _ in range(order):
        vals = [vals[0]] + [vals[i] - vals[i - 1] for i in range(1, len(vals))]
    return vals


def sigma(ideal: GradedIdeal, n: int, cap: int | None = None) -> int:
    """Least t with the (n-1)-st difference of the Hilbert function equal to 0."""
    cap = ideal.max_degree + 4 if cap is None else cap
    vals = []
    for t in range(cap + 1):
        vals.append(ideal.hilbert(t))
        if differences(vals, n - 1)[t] == 0:
            return t
    raise CapExceeded(f"sigma not reached below cap {cap}")


@dataclass
class HilbertFit:
    dimension: int
    degree: int
    sectional_genus: int | None
    method: str
    values: dict[int, int] = field(default_factory=dict)
    window: tuple[int, int] | None = None

    def as_tuple(self) -> tuple[int, int, int | None]:
        return self.dimension, self.degree, self.sectional_genus


def _fit_window(vals: list[int], max_dim: int, start: int):
    """Smallest m whose (m+1)-st difference vanishes at the last two points."""
    t = len(vals) - 1
    if t - 1 < start:
        return None
    if vals[t] == 0 and vals[t - 1] == 0:
        return -1
    for m in range(0, max_dim + 1):
        d = differences(vals, m + 1)
        if d[t] == 0 and d[t - 1] == 0 and differences(vals, m)[t] > 0:
            return m
    return None


def _genus_from_curve_values(vals: list[int], deg: int) -> int:
    t = len(vals) - 1
    return deg * t + 1 - vals[t]


def fit_direct(ideal: GradedIdeal, cap: int | None = None) -> HilbertFit:
    """Fit the Hilbert polynomial from H(t) itself (two agreeing windows)."""
    cap = ideal.max_degree + 8 if cap is None else cap
    vals: list[int] = []
    for t in range(cap + 1):
        vals.append(ideal.hilbert(t))
        m = _fit_window(vals, ideal.nvars - 1, ideal.max_degree)
        if m is None:
            continue
        if m == -1:
            return HilbertFit(-1, 0, None, "direct", dict(enumerate(vals)), (t - 1, t))
        deg = differences(vals, m)[t]
        genus = None
        if m >= 1:
            genus = _genus_from_curve_values(differences(vals, m - 1), deg)
        return HilbertFit(m, deg, genus, "direct", dict(enumerate(vals)), (t - 1, t))
    raise CapExceeded(f"insufficient degree range: no stable window up to t = {cap}")


def artinian_length(ideal: GradedIdeal, cap: int) -> int | None:
    """Sum of H(t) until the ideal fills; None if it has not filled by ``cap``."""
    if not ideal.filled(cap):
        return None
    total = 0
    for t in range(cap + 1):
        h = ideal.hilbert(t)
        if h == 0:
            return total
        total += h
    return total


def curve_genus(ideal: GradedIdeal, deg: int, cap: int) -> int:
    """Arithmetic genus of a one-dimensional ideal of known degree.

    Waits for two consecutive first differences equal to ``deg`` (the h-vector
    of an a.C.M. curve has run out at that point).
    """
    prev = None
    for t in range(cap + 1):
        h = ideal.hilbert(t)
        diff = h - (ideal.hilbert(t - 1) if t else 0)
        if diff == deg and prev == deg and t - 1 >= ideal.max_degree - 1:
            return deg * t + 1 - h
        prev = diff
    raise CapExceeded(f"insufficient degree range for the curve genus up to t = {cap}")


def fill_degree(ideal: GradedIdeal, cap: int) -> int | None:
    """Least t <= cap with the ideal containing every form of degree t, or None."""
    for t in range(ideal.min_degree, cap + 1):
        if ideal.filled(t):
            return t
    return None


@dataclass
class LocusProfile:
    """Outcome of the section ladder: empty flag, dimension, degree."""

    empty: bool
    dimension: int
    degree: int
    cap: int
    fill_degree: int | None = None


def locus_profile(ideal: GradedIdeal, cap: int | None = None, seed: int = 0) -> LocusProfile:
    """Emptiness, dimension and degree of V(I) through generic linear sections.

    Empty means the ideal fills some degree t <= cap.  Sections are tried from
    the most cuts down; the largest number of cuts leaving a nonempty scheme
    is the dimension and the length of the next (Artinian) section is the
    degree, which is exact for a.C.M. schemes.
    """
    work = ideal.eliminate_linear()
    cap = work.max_degree + 4 if cap is None else cap
    v = work.nvars
    if v == 0:
        # the linear generators alone cut out the empty set
        return LocusProfile(True, -1, 0, cap, 1)
    artinian = None
    cuts = v - 1
    while cuts >= 0:
        sec = work.section(cuts, seed)
        f = fill_degree(sec, cap)
        if f is None:
            break
        artinian = (sec, f)
        cuts -= 1
    if cuts < 0:
        return LocusProfile(True, -1, 0, cap, artinian[1])
    if artinian is None:
        # not even a point section fills: every generator vanishes on a line's worth
        return LocusProfile(False, cuts, 1 if not work.generators else 0, cap)
    sec, f = artinian
    return LocusProfile(False, cuts, sum(sec.hilbert(t) for t in range(f)), cap, f)


def fit_by_sections(ideal: GradedIdeal, cap: int | None = None, seed: int = 0) -> HilbertFit:
    """Dimension, degree and sectional genus through generic linear sections.

    Valid for a.C.M. ideals; the sectional genus comes from the curve section.
    """
    work = ideal.eliminate_linear()
    prof = locus_profile(work, cap, seed)
    if prof.empty:
        return HilbertFit(-1, 0, None, "sections")
    if prof.degree == 0:
        return fit_direct(work, cap)
    genus = None
    if prof.dimension >= 1:
        genus = curve_genus(work.section(prof.dimension - 1, seed), prof.degree, prof.cap + 4)
    return HilbertFit(prof.dimension, prof.degree, genus, "sections")


def hilbert_poly_fit(ideal: GradedIdeal, cap: int | None = None, method: str = "sections",
                     seed: int = 0) -> HilbertFit:
    if method == "direct":
        return fit_direct(ideal, cap)
    if method == "sections":
        return fit_by_sections(ideal, cap, seed)
    raise ValueError(f"unknown fit method {method!r}")


# ------------------------------------------------------------------ Betti data


@dataclass(frozen=True)
class BettiTable:
    """Graded Betti numbers as (homological index, twist, multiplicity) triples.

    Index 1 holds the generators, index 2 their syzygies, and so on.
    """

    entries: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        merged: dict[tuple[int, int], int] = {}
        for i, tw, mult in self.entries:
            if i < 1:
                raise ValueError("homological index starts at 1")
            if mult < 0:
                raise ValueError("multiplicities are non-negative")
            if mult:
                merged[(i, tw)] = merged.get((i, tw), 0) + mult
        object.__setattr__(self, "entries", tuple((i, tw, m) for (i, tw), m in sorted(merged.items())))

    @classmethod
    def from_resolution(cls, generator_twists: Iterable[int], syzygy_twists: Iterable[int]) -> "BettiTable":
        ents = [(1, tw, 1) for tw in generator_twists] + [(2, tw, 1) for tw in syzygy_twists]
        return cls(tuple(ents))

    def twists(self, index: int) -> list[int]:
        out = []
        for i, tw, m in self.entries:
            if i == index:
                out.extend([tw] * m)
        return out

    def as_lists(self) -> list[list[int]]:
        return [list(e) for e in self.entries]


def betti_to_hilbert(table: BettiTable, ring_vars: int, t: int) -> int:
    """H_{S/I}(t) from the alternating sum over a free resolution."""
    total = ring_dimension(ring_vars, t)
    for i, tw, mult in table.entries:
        total += (-1) ** i * mult * ring_dimension(ring_vars, t - tw)
    return total


def hilbert_table(ideal: GradedIdeal, n: int, tmax: int) -> list[list[int]]:
    """Rows (t, H, dH, ..., d^(n-1)H) for t = 0..tmax."""
    vals = ideal.hilbert_values(range(tmax + 1))
    cols = [differences(vals, k) for k in range(n)]
    return [[t] + [c[t] for c in cols] for t in range(tmax + 1)]
