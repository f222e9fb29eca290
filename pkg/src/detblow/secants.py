"""Lines on V and sigma-secant lines through the coefficient matrices Z and N
of an all-linear Hilbert-Burch matrix."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import flint
import numpy as np

from .algebra import Form, FormMatrix, all_minors_list
from .graded import CapExceeded, GradedIdeal, LocusProfile, locus_profile
from .hilburch import HilbertBurchMatrix, Line, intersection_length, normalize_point
from .linalg import nullspace_mod, rank_mod, to_nmod


@dataclass
class SecantSystem:
    """delta[i][j][k] is the coefficient of w_k in the (i, j) entry."""

    source: HilbertBurchMatrix
    delta: list[list[list[int]]]
    Z: FormMatrix
    N: FormMatrix

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def sigma(self) -> int:
        return self.source.rho

    @property
    def p(self) -> int:
        return self.source.p


def build_system(m: HilbertBurchMatrix) -> SecantSystem:
    if not m.is_linear():
        raise ValueError("the secant system needs a matrix of linear forms")
    p, n, s = m.p, m.n, m.rho
    delta = [[m.entries[i, j].linear_coefficients() for j in range(s + 1)] for i in range(s)]
    z = [[Form.linear([delta[i][j][k] for i in range(s)], p) for j in range(s + 1)] for k in range(n + 1)]
    nm = [[Form.linear([delta[i][j][k] for j in range(s + 1)], p) for k in range(n + 1)] for i in range(s)]
    return SecantSystem(m, delta, FormMatrix(z, s, p), FormMatrix(nm, s + 1, p))


def generic_rank(matrix: FormMatrix, trials: int = 3, seed: int = 0) -> int:
    """Largest rank over seeded random evaluations."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(f"rank-{seed}")
    best = 0
    for _ in range(trials):
        pt = [rng.randrange(matrix.p) for _ in range(matrix.nvars)]
        vals = np.array(matrix.evaluate(pt), dtype=np.int64).reshape(matrix.rows, matrix.cols)
        best = max(best, rank_mod(vals, matrix.p) if vals.size else 0)
    return best


@dataclass
class RankLocusReport:
    name: str
    target_rank: int
    nvars: int
    generators: int
    empty: bool | None
    dimension: int | None
    degree: int | None
    cap: int
    note: str = ""
    ideal: GradedIdeal | None = field(default=None, repr=False)

    @property
    def ambient_dimension(self) -> int:
        return self.nvars - 1

    @property
    def codimension(self) -> int | None:
        if self.dimension is None or self.empty:
            return None
        return self.ambient_dimension - self.dimension

    def to_dict(self) -> dict:
        return {
            "name": self.name, "target_rank": self.target_rank,
            "ambient_dimension": self.ambient_dimension, "generators": self.generators,
            "empty": self.empty, "dimension": self.dimension, "degree": self.degree,
            "codimension": self.codimension, "cap": self.cap, "note": self.note,
        }


def rank_locus(matrix: FormMatrix, rank: int, name: str, cap: int | None = None,
               seed: int = 0) -> RankLocusReport:
    """The scheme where ``matrix`` has rank <= ``rank``, cut by its (rank+1)-minors."""
    cap = (rank + 1) + 4 if cap is None else cap
    if rank + 1 > min(matrix.rows, matrix.cols):
        # no minors of that size: the condition holds everywhere
        whole = GradedIdeal([], matrix.nvars, matrix.p)
        return RankLocusReport(name, rank, matrix.nvars, 0, False, matrix.nvars - 1, 1, cap,
                               "rank bound holds identically", whole)
    gens = [f for f in all_minors_list(matrix, rank + 1) if not f.is_zero()]
    ideal = GradedIdeal(gens, matrix.nvars, matrix.p)
    try:
        prof: LocusProfile = locus_profile(ideal, cap, seed)
    except CapExceeded as exc:
        return RankLocusReport(name, rank, matrix.nvars, len(gens), None, None, None, cap,
                               f"undetermined: {exc}", ideal)
    if prof.empty:
        return RankLocusReport(name, rank, matrix.nvars, len(gens), True, None, None, cap,
                               f"fills degree {prof.fill_degree}", ideal)
    return RankLocusReport(name, rank, matrix.nvars, len(gens), False, prof.dimension, prof.degree,
                           cap, "", ideal)


def line_locus(s: SecantSystem, cap: int | None = None, seed: int = 0) -> RankLocusReport:
    """Lines on V: the rank <= n-1 locus of Z in P^(sigma-1)."""
    return rank_locus(s.Z, s.n - 1, "lines", cap, seed)


def secant_locus(s: SecantSystem, cap: int | None = None, seed: int = 0) -> RankLocusReport:
    """Parameters of sigma-secant lines: the rank <= n-1 locus of N in P^sigma."""
    return rank_locus(s.N, s.n - 1, "secants", cap, seed)


def solution_space(s: SecantSystem, y) -> np.ndarray:
    """Rows spanning {w : sum_j y_j L_ij(w) = 0 for all i}, i.e. the kernel of N(y)."""
    vals = np.array(s.N.evaluate(list(y)), dtype=np.int64).reshape(s.N.rows, s.N.cols)
    return nullspace_mod(vals, s.p)


def secant_line_from_parameter(s: SecantSystem, y) -> Line:
    ker = solution_space(s, y)
    if ker.shape[0] != 2:
        raise ValueError(f"N(y) has rank {s.n + 1 - ker.shape[0]}, expected {s.n - 1}")
    return Line(ker[0], ker[1], s.p)


# ------------------------------------------------------------ rational points


def _pivots(rows: np.ndarray) -> list[int]:
    return [int(np.flatnonzero(r)[0]) for r in rows]


def zero_dim_rational_points(ideal: GradedIdeal, t: int, seed: int = 0) -> list[tuple[int, ...]]:
    """F_p-rational points of a reduced zero-dimensional scheme.

    Requires H(t) = H(t+1) = degree.  The dual pieces W_t, W_(t+1) are spanned
    by point evaluations; multiplication by linear forms induces maps between
    them, and a pencil of those maps has the ratios l1(P)/l0(P) as
    eigenvalues.  Simple rational eigenvalues give eigen-functionals from
    which the coordinates are read off.  Every point returned is checked on
    the generators.
    """
    p, v = ideal.p, ideal.nvars
    from .algebra import basis

    w_t = ideal.dual_piece(t)
    w_t1 = ideal.dual_piece(t + 1)
    deg = w_t.shape[0]
    if w_t1.shape[0] != deg or deg == 0:
        raise ValueError("Hilbert function not stable at the requested degree")
    piv = _pivots(w_t)
    bt, bt1 = basis(v, t), basis(v, t + 1)
    rng = random.Random(f"points-{seed}")

    def action(lin):
        # column c: coordinates of (u_c o lin) in the pivot basis of W_t
        out = np.zeros((deg, deg), dtype=np.int64)
        for k, coef in enumerate(lin):
            if not coef:
                continue
            shift = np.zeros(v, dtype=np.int64)
            shift[k] = 1
            idx = bt1.index(bt.exps[piv] + shift)
            out = (out + coef * w_t1[:, idx].T) % p
        return out

    l0 = [rng.randrange(p) for _ in range(v)]
    l1 = [rng.randrange(p) for _ in range(v)]
    a0, a1 = action(l0), action(l1)
    m0 = to_nmod(a0, p)
    if m0.rank() != deg:
        raise ValueError("chosen linear form vanishes at a point")
    op = m0.inv() * to_nmod(a1, p)
    lead, factors = op.charpoly().factor()
    points = []
    for fac, mult in factors:
        if fac.degree() != 1 or mult != 1:
            continue
        c0, c1 = (int(c) for c in fac.coeffs())
        lam = (-c0) * pow(c1, -1, p) % p
        vec = nullspace_mod((a1 - lam * a0) % p, p)
        if vec.shape[0] != 1:
            continue
        func = _combine(vec[0], w_t1, p)
        pt = _read_point(func, bt1, v, t + 1, p)
        if pt is not None and all(g.evaluate(pt) == 0 for g in ideal.generators):
            points.append(pt)
    return sorted(set(points))


def _combine(coeffs: np.ndarray, rows: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros(rows.shape[1], dtype=np.int64)
    for c, r in zip(coeffs, rows):
        if c:
            out = (out + int(c) * r) % p
    return out


def _read_point(func: np.ndarray, b, v: int, deg: int, p: int):
    """Coordinates from an evaluation functional on degree-``deg`` monomials."""
    for j in range(v):
        e = np.zeros(v, dtype=np.int64)
        e[j] = deg
        base = int(func[b.index(e)])
        if base:
            inv = pow(base, -1, p)
            coords = []
            for i in range(v):
                f = e.copy()
                f[j] -= 1
                f[i] += 1
                coords.append(int(func[b.index(f)]) * inv % p)
            return normalize_point(coords, p)
    return None


def rational_points(report: RankLocusReport, seed: int = 0, tmax: int | None = None) -> list[tuple[int, ...]]:
    """F_p-points of a nonempty locus, via a generic slice down to dimension 0."""
    if report.empty is not False or report.ideal is None:
        return []
    ideal = report.ideal
    v, p = ideal.nvars, ideal.p
    dim = report.dimension
    rng = random.Random(f"slice-{seed}")
    lin = np.array([[rng.randrange(p) for _ in range(v - dim)] for _ in range(v)], dtype=np.int64)
    sl = ideal.restrict(lin) if dim else ideal
    tmax = report.cap + 4 if tmax is None else tmax
    prev = None
    for t in range(sl.max_degree, tmax + 1):
        h = sl.hilbert(t)
        if prev is not None and h == prev:
            pts = zero_dim_rational_points(sl, t - 1, seed)
            out = []
            for pt in pts:
                if dim:
                    pt = [int(sum(lin[i][j] * pt[j] for j in range(len(pt))) % p) for i in range(v)]
                out.append(normalize_point(pt, p))
            return sorted(set(out))
        prev = h
    raise CapExceeded("slice Hilbert function did not stabilize")


def find_secant_lines(s: SecantSystem, seeds=range(8), cap: int | None = None) -> list[tuple[tuple[int, ...], Line]]:
    """Witness sigma-secant lines from rational points of Gamma (bounded retries)."""
    rep = secant_locus(s, cap)
    if rep.empty is not False:
        return []
    for seed in seeds:
        pts = rational_points(rep, seed)
        out = []
        for y in pts:
            try:
                out.append((y, secant_line_from_parameter(s, y)))
            except ValueError:
                continue
        if out:
            return out
    return []


def verify_secant(s: SecantSystem, line: Line):
    return intersection_length(s.source, line)


# ------------------------------------------------------ small-field search

SEARCH_LIMIT = 3_000_000


def projective_points(nvars: int, p: int):
    """All points of P^(nvars-1)(F_p), normalized, in batches."""
    for lead in range(nvars):
        tail = nvars - lead - 1
        for chunk in _product_chunks(p, tail, 200_000):
            block = np.zeros((chunk.shape[0], nvars), dtype=np.int64)
            block[:, lead] = 1
            block[:, lead + 1:] = chunk
            yield block


def _product_chunks(p: int, k: int, size: int):
    total = p ** k
    for start in range(0, total, size):
        idx = np.arange(start, min(total, start + size), dtype=np.int64)
        out = np.zeros((idx.size, k), dtype=np.int64)
        for j in range(k - 1, -1, -1):
            out[:, j] = idx % p
            idx = idx // p
        yield out


def _normalize_rows(a: np.ndarray, p: int) -> np.ndarray:
    first = np.argmax(a != 0, axis=1)
    lead = a[np.arange(a.shape[0]), first]
    inv = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    return a * inv[lead][:, None] % p


def _evaluate_forms(forms: list[Form], pts: np.ndarray, p: int) -> np.ndarray:
    """values[k, f] = forms[f](pts[k]) for forms of one degree."""
    from .algebra import basis

    deg = forms[0].degree
    b = basis(pts.shape[1], deg)
    step = max(1, 4_000_000 // b.size)
    if pts.shape[0] > step:
        return np.vstack([_evaluate_forms(forms, pts[i:i + step], p) for i in range(0, pts.shape[0], step)])
    powers = np.ones((deg + 1,) + pts.shape, dtype=np.int64)
    for e in range(1, deg + 1):
        powers[e] = powers[e - 1] * pts % p
    mon = np.ones((pts.shape[0], b.size), dtype=np.int64)
    for i in range(pts.shape[1]):
        mon = mon * powers[b.exps[:, i], :, i].T % p
    coeffs = np.array([f.to_dense() for f in forms], dtype=np.int64).T
    from .linalg import matmul_mod

    return matmul_mod(mon, coeffs, p)


@dataclass
class SecantWitness:
    parameter: tuple[int, ...]
    line: Line
    length: int


def search_secant_witnesses(s: SecantSystem, limit: int = SEARCH_LIMIT) -> list[SecantWitness]:
    """Exhaustive search for F_p-rational sigma-secant lines (small p only).

    Off V the kernel of M(w) is the point y(w) given by the signed maximal
    minors, and the kernel of N(y) is the set of w with M(w) y = 0.  A
    parameter y in Gamma therefore has a whole line of w's mapping to it, so
    candidates are the values of y(w) hit at least twice; each is confirmed
    exactly (rank of N(y), then the length of the line against V).
    """
    m, p, n = s.source, s.p, s.n
    count = sum(p ** k for k in range(n + 1))
    if count > limit:
        raise CapExceeded(f"P^{n}(F_{p}) has {count} points, above the search limit {limit}")
    mins = m.minors()
    hits: dict[tuple, int] = {}
    for pts in projective_points(n + 1, p):
        ys = _evaluate_forms(mins, pts, p)
        ys = ys[ys.any(axis=1)]
        if not ys.size:
            continue
        uniq, cnt = np.unique(_normalize_rows(ys, p), axis=0, return_counts=True)
        for y, c in zip(uniq, cnt):
            key = tuple(int(x) for x in y)
            hits[key] = hits.get(key, 0) + int(c)
    out = []
    for y, c in sorted(hits.items()):
        if c < 2:
            continue
        ker = solution_space(s, y)
        if ker.shape[0] != 2:
            continue
        line = Line(ker[0], ker[1], p)
        length = intersection_length(m, line)
        if length == s.sigma:
            out.append(SecantWitness(y, line, length))
    return out
