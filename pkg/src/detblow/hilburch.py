"""Hilbert-Burch matrices of codimension-2 a.C.M. schemes: degree matrices,
generic sampling, the determinantal ideal, lines and the variety report."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .algebra import (DEFAULT_PRIME, AllZeroError, Form, FormMatrix, binary_gcd, binary_roots,
                      check_prime, generic_form, maximal_minors, monomials)
from .graded import GradedIdeal, HilbertFit, hilbert_poly_fit, hilbert_table, sigma
from .linalg import nullspace_mod, rank_mod


class DegenerateError(ValueError):
    """A sampled matrix is not generic enough (a minor vanished, a kernel has the wrong size)."""


class Contained:
    """Sentinel for a line lying on the variety."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "CONTAINED"


CONTAINED = Contained()


# --------------------------------------------------------------------- degrees


@dataclass(frozen=True)
class DegreeMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries: Sequence[Sequence[int]]):
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in r) for r in entries))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij) -> int:
        return self.entries[ij[0]][ij[1]]

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def splitting(self) -> tuple[list[int], list[int]]:
        """(u, v) with e[i][j] = u_i + v_j and min(u) = 0."""
        col0 = [r[0] for r in self.entries]
        low = min(col0)
        u = [c - low for c in col0]
        v = [x - u[0] for x in self.entries[0]]
        return u, v

    def twists(self) -> tuple[list[int], list[int]]:
        """(generator twists d_j, one per column; syzygy twists n_i, one per row)."""
        u, v = self.splitting()
        s = sum(u) + sum(v)
        return [s - x for x in v], [s + x for x in u]

    def is_linear(self) -> bool:
        return all(x == 1 for r in self.entries for x in r)

    def __str__(self) -> str:
        return " / ".join(",".join(str(x) for x in r) for r in self.entries)


@dataclass
class ValidationReport:
    ok: bool
    cell: tuple[int, int] | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_degree_matrix(d: DegreeMatrix | Sequence[Sequence[int]]) -> ValidationReport:
    """Check shape rho x (rho+1), positivity and additivity; cells are 1-based."""
    if not isinstance(d, DegreeMatrix):
        try:
            d = DegreeMatrix(d)
        except (TypeError, ValueError) as exc:
            return ValidationReport(False, None, f"unreadable degree matrix: {exc}")
    if d.rows == 0:
        return ValidationReport(False, None, "empty degree matrix")
    for i, r in enumerate(d.entries):
        if len(r) != d.cols:
            return ValidationReport(False, (i + 1, len(r)), f"row {i + 1} has {len(r)} entries, expected {d.cols}")
    for i in range(d.rows):
        for j in range(d.cols):
            if d[i, j] < 1:
                return ValidationReport(False, (i + 1, j + 1), f"degree {d[i, j]} at ({i + 1},{j + 1}) is not positive")
            want = d[i, 0] + d[0, j] - d[0, 0]
            if d[i, j] != want:
                return ValidationReport(False, (i + 1, j + 1),
                                        f"additivity fails at ({i + 1},{j + 1}): {d[i, j]} != {want}")
    if d.cols != d.rows + 1:
        return ValidationReport(False, None, f"shape {d.rows}x{d.cols} is not rho x (rho+1)")
    return ValidationReport(True)


def genus_from_twists(n_twists: Sequence[int], d_twists: Sequence[int]) -> int:
    """Arithmetic genus of an a.C.M. space curve from its resolution twists."""

    def c3(x: int) -> int:
        # C(x-1, 3) read as a polynomial in x
        return (x - 1) * (x - 2) * (x - 3) // 6

    return sum(c3(x) for x in n_twists) - sum(c3(x) for x in d_twists)


# -------------------------------------------------------------------- matrices


@dataclass
class HilbertBurchMatrix:
    degree_matrix: DegreeMatrix
    entries: FormMatrix
    n: int
    seed: int | None = None

    def __post_init__(self):
        rep = validate_degree_matrix(self.degree_matrix)
        if not rep:
            raise ValueError(rep.message)
        m, d = self.entries, self.degree_matrix
        if (m.rows, m.cols) != (d.rows, d.cols):
            raise ValueError(f"entries are {m.rows}x{m.cols} but the degree matrix is {d.rows}x{d.cols}")
        if m.nvars != self.n + 1:
            raise ValueError(f"entries live in {m.nvars} variables, expected {self.n + 1}")
        for i in range(m.rows):
            for j in range(m.cols):
                f = m[i, j]
                if f.terms and f.degree != d[i, j]:
                    raise ValueError(f"entry ({i + 1},{j + 1}) has degree {f.degree}, expected {d[i, j]}")

    @property
    def p(self) -> int:
        return self.entries.p

    @property
    def rho(self) -> int:
        return self.entries.rows

    def is_linear(self) -> bool:
        return self.degree_matrix.is_linear()

    def minors(self) -> list[Form]:
        return maximal_minors(self.entries)


def sample_generic(d: DegreeMatrix | Sequence[Sequence[int]], n: int, seed: int,
                   p: int = DEFAULT_PRIME) -> HilbertBurchMatrix:
    """Dense uniform coefficients from random.Random(seed), row-major, graded-lex within an entry."""
    if not isinstance(d, DegreeMatrix):
        d = DegreeMatrix(d)
    rep = validate_degree_matrix(d)
    if not rep:
        raise ValueError(rep.message)
    check_prime(p)
    rng = random.Random(seed)
    rows = [[generic_form(n + 1, d[i, j], rng, p) for j in range(d.cols)] for i in range(d.rows)]
    return HilbertBurchMatrix(d, FormMatrix(rows, n + 1, p), n, seed)


def variety_ideal(m: HilbertBurchMatrix) -> GradedIdeal:
    mins = m.minors()
    for b, f in enumerate(mins, start=1):
        if f.is_zero():
            raise DegenerateError(f"maximal minor F_{b} vanishes identically")
    return GradedIdeal(mins, m.n + 1, m.p)


def sample_nondegenerate(d, n: int, seed: int, p: int = DEFAULT_PRIME, retries: int = 5,
                         check=None) -> HilbertBurchMatrix:
    """sample_generic with bounded reseeding; ``check(m)`` may raise DegenerateError."""
    last = None
    for attempt in range(retries + 1):
        s = seed if attempt == 0 else seed + attempt * 1_000_003
        m = sample_generic(d, n, s, p)
        try:
            variety_ideal(m)
            if check is not None:
                check(m)
            return m
        except DegenerateError as exc:
            last = exc
    raise DegenerateError(f"no generic sample after {retries} retries: {last}")


# ----------------------------------------------------------------------- lines


@dataclass(frozen=True)
class Line:
    """The line through two points; w = s*P + t*Q."""

    points: tuple[tuple[int, ...], tuple[int, ...]]
    p: int = DEFAULT_PRIME

    def __init__(self, first: Sequence[int], second: Sequence[int], p: int = DEFAULT_PRIME):
        a = tuple(int(x) % p for x in first)
        b = tuple(int(x) % p for x in second)
        if len(a) != len(b):
            raise ValueError("points must have the same length")
        if rank_mod(np.array([a, b], dtype=np.int64), p) != 2:
            raise ValueError("points do not span a line")
        object.__setattr__(self, "points", (a, b))
        object.__setattr__(self, "p", p)

    @classmethod
    def from_equations(cls, forms: Sequence[Form]) -> "Line":
        """Common zero set of linear forms, which must be a line."""
        p = forms[0].p
        coeffs = np.array([f.linear_coefficients() for f in forms], dtype=np.int64)
        ker = nullspace_mod(coeffs, p)
        if ker.shape[0] != 2:
            raise ValueError(f"linear forms cut a space of projective dimension {ker.shape[0] - 1}")
        return cls(ker[0], ker[1], p)

    @property
    def ambient(self) -> int:
        return len(self.points[0])

    def parametrization(self) -> list[Form]:
        a, b = self.points
        return [Form.linear([x, y], self.p) for x, y in zip(a, b)]

    def point(self, s: int, t: int) -> tuple[int, ...]:
        a, b = self.points
        return normalize_point([s * x + t * y for x, y in zip(a, b)], self.p)


def normalize_point(coords: Sequence[int], p: int) -> tuple[int, ...]:
    """Scale so the first nonzero coordinate is 1."""
    coords = [int(c) % p for c in coords]
    for c in coords:
        if c:
            inv = pow(c, -1, p)
            return tuple(x * inv % p for x in coords)
    raise ValueError("zero vector is not a projective point")


def restrict_to_line(m: HilbertBurchMatrix | FormMatrix, line: Line) -> FormMatrix:
    fm = m.entries if isinstance(m, HilbertBurchMatrix) else m
    return fm.substitute_linear(line.parametrization())


def _restricted_minors(m, line: Line) -> list[Form]:
    fm = m.entries if isinstance(m, HilbertBurchMatrix) else m
    if line.ambient != fm.nvars:
        raise ValueError("line and matrix live in different spaces")
    return maximal_minors(restrict_to_line(fm, line))


def line_gcd(m, line: Line) -> Form | Contained:
    try:
        return binary_gcd(_restricted_minors(m, line))
    except AllZeroError:
        return CONTAINED


def intersection_length(m, line: Line) -> int | Contained:
    """Length of V cap L: the degree of the gcd of the restricted minors."""
    g = line_gcd(m, line)
    return g if g is CONTAINED else g.degree


@dataclass
class LinePoints:
    points: list[tuple[tuple[int, ...], int]]
    irrational_degree: int

    @property
    def count(self) -> int:
        return sum(k for _, k in self.points)


def points_on_line(m, line: Line) -> LinePoints:
    g = line_gcd(m, line)
    if g is CONTAINED:
        raise ValueError("line is contained in the variety")
    roots, rest = binary_roots(g)
    return LinePoints([(line.point(s, t), k) for (s, t), k in roots], rest)


# ---------------------------------------------------------------------- report


@dataclass
class VarietyReport:
    n: int
    rho: int
    degree_matrix: list[list[int]]
    dimension: int
    degree: int
    sigma: int
    hilbert_table: list[list[int]]
    generator_twists: list[int]
    syzygy_twists: list[int]
    sectional_genus: int | None
    genus: int | None = None
    fit_method: str = ""
    seed: int | None = None
    p: int = DEFAULT_PRIME

    def to_dict(self) -> dict:
        return {
            "n": self.n, "rho": self.rho, "p": self.p, "seed": self.seed,
            "degree_matrix": self.degree_matrix, "dimension": self.dimension,
            "degree": self.degree, "sigma": self.sigma, "genus": self.genus,
            "sectional_genus": self.sectional_genus,
            "generator_twists": self.generator_twists, "syzygy_twists": self.syzygy_twists,
            "fit_method": self.fit_method, "hilbert_table": self.hilbert_table,
        }


def analyze(m: HilbertBurchMatrix, cap: int | None = None, method: str = "auto",
            seed: int = 0) -> VarietyReport:
    ideal = variety_ideal(m)
    gens, syz = m.degree_matrix.twists()
    actual = sorted(f.degree for f in ideal.generators)
    if actual != sorted(gens):
        raise DegenerateError(f"minor degrees {actual} disagree with twists {sorted(gens)}")
    if method == "auto":
        method = "direct" if m.n <= 3 else "sections"
    fit = hilbert_poly_fit(ideal, cap, method=method, seed=seed)
    sig = sigma(ideal, m.n, cap)
    table = hilbert_table(ideal, m.n, max(sig, ideal.max_degree) + 1)
    genus = None
    if m.n == 3 and fit.dimension == 1:
        genus = genus_from_twists(syz, gens)
    return VarietyReport(m.n, m.rho, m.degree_matrix.as_lists(), fit.dimension, fit.degree, sig,
                         table, sorted(gens), sorted(syz), fit.sectional_genus, genus, fit.method,
                         m.seed, m.p)


def plane_section(m: HilbertBurchMatrix, seed: int = 0) -> FormMatrix:
    """Restriction of M to a generic plane (three coordinates)."""
    rng = random.Random(f"plane-{seed}")
    images = [Form.linear([rng.randrange(m.p) for _ in range(3)], m.p) for _ in range(m.n + 1)]
    return m.entries.substitute_linear(images)


def plane_section_genus(m: HilbertBurchMatrix, seed: int = 0, cap: int = 60) -> int:
    """Sum over t >= 1 of (s - H(Z, t)) for Z a generic plane section of a curve."""
    mins = maximal_minors(plane_section(m, seed))
    if any(f.is_zero() for f in mins):
        raise DegenerateError("plane section minor vanished")
    z = GradedIdeal(mins, 3, m.p)
    s = None
    # the section is a set of points: its Hilbert function climbs to s and stays
    vals = [z.hilbert(t) for t in range(z.max_degree + 2)]
    t = len(vals) - 1
    while vals[-1] != vals[-2]:
        t += 1
        if t > cap:
            raise RuntimeError("plane section Hilbert function did not stabilize")
        vals.append(z.hilbert(t))
    s = vals[-1]
    return sum(s - h for h in vals[1:])
