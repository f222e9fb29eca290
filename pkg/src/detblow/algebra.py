"""Exact arithmetic on homogeneous forms over a prime field.

Forms are stored sparsely as ``{exponent tuple: coefficient}`` maps.  Heavy
kernels (products inside determinant expansions, Macaulay matrices) work on
dense coefficient vectors indexed by a :class:`MonomialBasis`.
"""

from __future__ import annotations

import functools
import itertools
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

DEFAULT_PRIME = 2**31 - 1


def is_probable_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    """Validate a field characteristic: odd prime below 2**31 (int64 products stay exact)."""
    if not isinstance(p, int) or p <= 2 or p >= 2**31 or not is_probable_prime(p):
        raise ValueError(f"field characteristic must be an odd prime < 2**31, got {p!r}")
    return p


# ---------------------------------------------------------------------------
# Monomial bases
# ---------------------------------------------------------------------------


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total ``degree`` in graded-lex (descending) order."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for head in range(degree, -1, -1):
        for tail in monomials(nvars - 1, degree - head):
            out.append((head,) + tail)
    return out


class MonomialBasis:
    """Indexing of the degree-``degree`` monomials in ``nvars`` variables.

    Index 0 is the largest monomial in lex order, so dense vectors read in the
    same order as canonical printing.
    """

    def __init__(self, nvars: int, degree: int):
        self.nvars = nvars
        self.degree = degree
        self.exps = np.array(monomials(nvars, degree), dtype=np.int64).reshape(-1, nvars)
        self.size = len(self.exps)
        self._radix = degree + 1
        keys = self.keys(self.exps)
        # lex-descending order means keys are strictly decreasing
        self._sorted_keys = keys[::-1].copy()

    def keys(self, exps: np.ndarray) -> np.ndarray:
        k = np.zeros(exps.shape[:-1], dtype=np.int64)
        for i in range(self.nvars):
            k = k * self._radix + exps[..., i]
        return k

    def index(self, exps) -> np.ndarray:
        """Vectorized position lookup; ``exps`` must have total degree ``degree``."""
        exps = np.asarray(exps, dtype=np.int64)
        pos = np.searchsorted(self._sorted_keys, self.keys(exps))
        return self.size - 1 - pos

    def index_of(self, exp: Sequence[int]) -> int:
        return int(self.index(np.array(exp, dtype=np.int64)))


@functools.lru_cache(maxsize=512)
def basis(nvars: int, degree: int) -> MonomialBasis:
    return MonomialBasis(nvars, degree)


def ring_dimension(nvars: int, degree: int) -> int:
    """dim_k of the degree-``degree`` piece of a polynomial ring in ``nvars`` variables."""
    if degree < 0:
        return 0
    return comb(degree + nvars - 1, nvars - 1)


@functools.lru_cache(maxsize=4096)
def _shift_index(nvars: int, degree: int, mono: tuple[int, ...]) -> np.ndarray:
    """Positions in basis(degree + |mono|) of mono * (each monomial of basis(degree))."""
    src = basis(nvars, degree)
    dst = basis(nvars, degree + sum(mono))
    return dst.index(src.exps + np.array(mono, dtype=np.int64))


# ---------------------------------------------------------------------------
# Forms
# ---------------------------------------------------------------------------


class Form:
    """A homogeneous polynomial over F_p.

    ``terms`` maps exponent tuples to nonzero residues.  Instances are treated
    as immutable; every operation returns a new form.
    """

    __slots__ = ("nvars", "degree", "terms", "p")

    def __init__(self, nvars: int, degree: int, terms: Mapping[tuple, int] | None = None,
                 p: int = DEFAULT_PRIME):
        self.nvars = nvars
        self.degree = degree
        self.p = p
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not match {nvars} variables")
            if sum(exp) != degree or min(exp, default=0) < 0:
                raise ValueError(f"monomial {exp} is not of degree {degree}")
            c = int(c) % p
            if c:
                clean[exp] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, degree, terms, p):
        f = cls.__new__(cls)
        f.nvars, f.degree, f.terms, f.p = nvars, degree, terms, p
        return f

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, degree: int = 0, p: int = DEFAULT_PRIME) -> "Form":
        return cls._raw(nvars, degree, {}, p)

    @classmethod
    def constant(cls, nvars: int, c: int, p: int = DEFAULT_PRIME) -> "Form":
        return cls(nvars, 0, {(0,) * nvars: c}, p)

    @classmethod
    def variable(cls, nvars: int, i: int, p: int = DEFAULT_PRIME) -> "Form":
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw(nvars, 1, {tuple(exp): 1}, p)

    @classmethod
    def linear(cls, coeffs: Sequence[int], p: int = DEFAULT_PRIME) -> "Form":
        n = len(coeffs)
        return cls(n, 1, {tuple(int(i == k) for i in range(n)): c for k, c in enumerate(coeffs)}, p)

    @classmethod
    def from_dense(cls, nvars: int, degree: int, vec, p: int = DEFAULT_PRIME) -> "Form":
        b = basis(nvars, degree)
        vec = np.asarray(vec, dtype=np.int64)
        nz = np.nonzero(vec)[0]
        exps = b.exps[nz].tolist()
        return cls._raw(nvars, degree, {tuple(e): int(vec[i]) for e, i in zip(exps, nz)}, p)

    def to_dense(self) -> np.ndarray:
        b = basis(self.nvars, self.degree)
        vec = np.zeros(b.size, dtype=np.int64)
        if self.terms:
            exps = np.array(list(self.terms), dtype=np.int64)
            vec[b.index(exps)] = np.fromiter(self.terms.values(), dtype=np.int64, count=len(self.terms))
        return vec

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.nvars != other.nvars or self.p != other.p:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, self.degree, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Form") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")
        if self.p != other.p:
            raise ValueError(f"field mismatch: p={self.p} vs p={other.p}")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        p = self.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Form._raw(self.nvars, self.degree, out, p)

    def __neg__(self) -> "Form":
        p = self.p
        return Form._raw(self.nvars, self.degree, {e: p - c for e, c in self.terms.items()}, p)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c: int) -> "Form":
        c %= self.p
        if c == 0:
            return Form.zero(self.nvars, self.degree, self.p)
        p = self.p
        return Form._raw(self.nvars, self.degree, {e: v * c % p for e, v in self.terms.items()}, p)

    def __mul__(self, other) -> "Form":
        if isinstance(other, int):
            return self.scale(other)
        return form_multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Form":
        out = Form.constant(self.nvars, 1, self.p)
        for _ in range(k):
            out = out * self
        return out

    # inspection -------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in graded-lex descending order."""
        return sorted(self.terms.items(), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        if not self.terms:
            raise ValueError("zero form has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def monic(self) -> "Form":
        if not self.terms:
            return self
        return self.scale(pow(self.leading_term()[1], -1, self.p))

    def coefficient(self, exp: Sequence[int]) -> int:
        return self.terms.get(tuple(exp), 0)

    def linear_coefficients(self) -> list[int]:
        if self.degree != 1 and self.terms:
            raise ValueError("not a linear form")
        return [self.terms.get(tuple(int(i == k) for i in range(self.nvars)), 0)
                for k in range(self.nvars)]

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.p
        pt = [int(x) % p for x in point]
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * pow(x, k, p) % p
            total += v
        return total % p

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Canonical rendering: graded-lex order, explicit coefficients."""
        if not self.terms:
            return "0"
        names = names or [f"w{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Form({self.to_text()})"


# Two-variable forms are plain Forms with nvars == 2; the alias documents intent.
BinaryForm = Form


def form_multiply(f: Form, g: Form) -> Form:
    f._check(g)
    if not f.terms or not g.terms:
        return Form.zero(f.nvars, f.degree + g.degree, f.p)
    p = f.p
    out: dict = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = (out.get(e, 0) + c1 * c2) % p
    return Form._raw(f.nvars, f.degree + g.degree, {e: c for e, c in out.items() if c}, p)


def substitute(f: Form, images: Sequence[Form]) -> Form:
    """Replace variable i by ``images[i]``; all images share a ring and a degree."""
    if len(images) != f.nvars:
        raise ValueError(f"need {f.nvars} images, got {len(images)}")
    if not images:
        return f
    nv, p = images[0].nvars, images[0].p
    degs = {g.degree for g in images if g.terms}
    if len(degs) > 1:
        raise ValueError("images must share a degree")
    e = degs.pop() if degs else images[0].degree
    out_deg = f.degree * e
    out = np.zeros(basis(nv, out_deg).size, dtype=np.int64)
    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] if k == 1 else power(i, k - 1) * images[i]
        return powers[key]

    for exp, c in f.terms.items():
        term = Form.constant(nv, c, p)
        for i, k in enumerate(exp):
            if k:
                term = term * power(i, k)
        if term.terms:
            out = (out + term.to_dense()) % p
    return Form.from_dense(nv, out_deg, out, p)


def substitute_linear(f: Form, images: Sequence[Form]) -> Form:
    """Restriction along a linear map: each variable goes to a linear form."""
    if len(images) != f.nvars:
        raise ValueError(f"need {f.nvars} images, got {len(images)}")
    for g in images:
        if g.terms and g.degree != 1:
            raise ValueError("substitute_linear expects degree-1 images")
    if not images:
        return f
    nv, p = images[0].nvars, images[0].p
    for g in images:
        if g.nvars != nv:
            raise ValueError("images must live in one ring")
    lin = np.array([g.linear_coefficients() if g.terms else [0] * nv for g in images],
                   dtype=np.int64)
    out = restrict_dense(f.to_dense(), f.nvars, f.degree, lin, p)[0]
    return Form.from_dense(nv, f.degree, out, p)


def substitution_matrix(nvars: int, degree: int, lin: np.ndarray, p: int) -> np.ndarray:
    """Row e holds the dense expansion of prod_i (sum_j lin[i, j] u_j)^e_i.

    ``lin`` is nvars x target; the result is |basis(nvars, degree)| x
    |basis(target, degree)|, so restriction of many forms is one product.
    """
    lin = np.asarray(lin, dtype=np.int64) % p
    target = lin.shape[1]
    table = np.ones((1, 1), dtype=np.int64)
    for d in range(1, degree + 1):
        src = basis(nvars, d)
        prev = basis(nvars, d - 1)
        first = np.argmax(src.exps > 0, axis=1)
        parent_exps = src.exps.copy()
        parent_exps[np.arange(src.size), first] -= 1
        parent = table[prev.index(parent_exps)]
        out = np.zeros((src.size, basis(target, d).size), dtype=np.int64)
        coeff = lin[first]
        for j in range(target):
            mono = tuple(int(k == j) for k in range(target))
            pos = _shift_index(target, d - 1, mono)
            out[:, pos] = (out[:, pos] + parent * coeff[:, j:j + 1]) % p
        table = out
    return table


def restrict_dense(vecs: np.ndarray, nvars: int, degree: int, lin: np.ndarray, p: int) -> np.ndarray:
    """Dense substitute_linear for a stack of forms (rows of ``vecs``)."""
    from .linalg import matmul_mod

    vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
    return matmul_mod(vecs, substitution_matrix(nvars, degree, lin, p), p)


def mul_dense(a: np.ndarray, da: int, b: np.ndarray, db: int, nvars: int, p: int) -> np.ndarray:
    """Product of two dense forms (degrees da, db); iterates over the sparser factor."""
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, da, b, db = b, db, a, da
    out = np.zeros(basis(nvars, da + db).size, dtype=np.int64)
    src = basis(nvars, da)
    for idx in np.nonzero(a)[0]:
        mono = tuple(int(x) for x in src.exps[idx])
        pos = _shift_index(nvars, db, mono)
        out[pos] = (out[pos] + int(a[idx]) * b) % p
    return out


# ---------------------------------------------------------------------------
# Matrices of forms
# ---------------------------------------------------------------------------


class FormMatrix:
    """Row-major matrix of forms sharing one ring."""

    __slots__ = ("rows", "cols", "entries", "nvars", "p")

    def __init__(self, entries: Sequence[Sequence[Form]], nvars: int | None = None,
                 p: int | None = None):
        rows = [tuple(r) for r in entries]
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        if any(len(r) != self.cols for r in rows):
            raise ValueError("ragged matrix")
        first = rows[0][0] if self.rows and self.cols else None
        self.nvars = nvars if nvars is not None else (first.nvars if first else 0)
        self.p = p if p is not None else (first.p if first else DEFAULT_PRIME)
        for r in rows:
            for f in r:
                if f.nvars != self.nvars or f.p != self.p:
                    raise ValueError("matrix entries must share ring and field")
        self.entries = tuple(rows)

    def __getitem__(self, ij) -> Form:
        i, j = ij
        return self.entries[i][j]

    def degree_matrix(self) -> list[list[int | None]]:
        return [[f.degree if f.terms else None for f in r] for r in self.entries]

    def transpose(self) -> "FormMatrix":
        return FormMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
                          self.nvars, self.p)

    def map(self, fn) -> "FormMatrix":
        return FormMatrix([[fn(f) for f in r] for r in self.entries])

    def substitute_linear(self, images: Sequence[Form]) -> "FormMatrix":
        nv = images[0].nvars
        return FormMatrix([[substitute_linear(f, images) for f in r] for r in self.entries], nv, self.p)

    def evaluate(self, point: Sequence[int]) -> list[list[int]]:
        return [[f.evaluate(point) for f in r] for r in self.entries]

    def __eq__(self, other) -> bool:
        return isinstance(other, FormMatrix) and self.entries == other.entries

    def __repr__(self) -> str:
        return f"FormMatrix({self.rows}x{self.cols}, nvars={self.nvars})"


def _dense_entries(m: FormMatrix):
    return [[(f.to_dense(), f.degree, bool(f.terms)) for f in r] for r in m.entries]


def minors(m: FormMatrix, size: int, rows: Sequence[int] | None = None) -> dict:
    """All ``size``-minors of ``m`` keyed by (row tuple, column tuple).

    Laplace expansion along the last chosen row, with every smaller minor
    memoized so shared cofactors are computed once.  When ``rows`` is given only
    minors on subsets of those rows are produced.
    """
    if size < 1 or size > min(m.rows, m.cols):
        raise ValueError(f"no {size}-minors in a {m.rows}x{m.cols} matrix")
    nv, p = m.nvars, m.p
    dense = _dense_entries(m)
    memo: dict = {}

    def det(rs: tuple, cs: tuple):
        key = (rs, cs)
        if key in memo:
            return memo[key]
        if len(rs) == 1:
            vec, deg, nz = dense[rs[0]][cs[0]]
            res = (vec, deg, nz)
        else:
            r = rs[-1]
            acc = None
            acc_deg = None
            for pos, c in enumerate(cs):
                evec, edeg, enz = dense[r][c]
                if not enz:
                    continue
                sub_vec, sub_deg, sub_nz = det(rs[:-1], cs[:pos] + cs[pos + 1:])
                if not sub_nz:
                    continue
                prod = mul_dense(evec, edeg, sub_vec, sub_deg, nv, p)
                # sign of the (last row, pos) cofactor inside the square block
                if (len(rs) - 1 + pos) % 2:
                    prod = (-prod) % p
                if acc is None:
                    acc, acc_deg = prod, edeg + sub_deg
                else:
                    if edeg + sub_deg != acc_deg:
                        raise ValueError("matrix degrees are not additive; minor is not homogeneous")
                    acc = (acc + prod) % p
            if acc is None:
                res = (np.zeros(1, dtype=np.int64), 0, False)
            else:
                res = (acc, acc_deg, bool(acc.any()))
        memo[key] = res
        return res

    row_pool = tuple(rows) if rows is not None else tuple(range(m.rows))
    out = {}
    for rs in itertools.combinations(row_pool, size):
        for cs in itertools.combinations(range(m.cols), size):
            vec, deg, nz = det(rs, cs)
            out[(rs, cs)] = Form.from_dense(nv, deg, vec, p) if nz else Form.zero(nv, deg, p)
    return out


def maximal_minors(m: FormMatrix) -> list[Form]:
    """Signed maximal minors F_b = (-1)^b det(m without column b), b = 1..rows+1."""
    if m.cols != m.rows + 1:
        raise ValueError(f"expected a rho x (rho+1) matrix, got {m.rows}x{m.cols}")
    rho = m.rows
    all_cols = tuple(range(m.cols))
    mins = minors(m, rho)
    out = []
    for b in range(1, m.cols + 1):
        cs = all_cols[:b - 1] + all_cols[b:]
        f = mins[(tuple(range(rho)), cs)]
        out.append(-f if b % 2 else f)
    return out


def all_minors_list(m: FormMatrix, size: int) -> list[Form]:
    return [f for _, f in sorted(minors(m, size).items())]


def generic_form(nvars: int, degree: int, rng, p: int) -> Form:
    """Dense form with uniform coefficients drawn from ``rng`` (a random.Random)."""
    return Form(nvars, degree, {e: rng.randrange(p) for e in monomials(nvars, degree)}, p)


# ---------------------------------------------------------------------------
# Binary forms
# ---------------------------------------------------------------------------


class AllZeroError(ValueError):
    """Every input of a gcd vanished (for restricted minors: the line lies on V)."""


def _dehomogenize(f: Form):
    """(univariate nmod_poly of f(x, 1), exponent of t dividing f)."""
    import flint

    b = min(e[1] for e in f.terms)
    coeffs = [0] * (f.degree + 1)
    for (a, _), c in f.terms.items():
        coeffs[a] = c
    return flint.nmod_poly(coeffs, f.p), b


def _homogenize(poly, t_power: int, p: int) -> Form:
    e = poly.degree()
    coeffs = [int(c) for c in poly.coeffs()]
    return Form(2, e + t_power, {(a, e - a + t_power): c for a, c in enumerate(coeffs) if c}, p)


def binary_gcd(forms: Iterable[Form]) -> Form:
    """Monic gcd of binary forms; the leading monomial is the highest power of s."""
    nz = [f for f in forms if f.terms]
    for f in nz:
        if f.nvars != 2:
            raise ValueError("binary_gcd needs forms in two variables")
    if not nz:
        raise AllZeroError("all inputs are zero")
    g, b = _dehomogenize(nz[0])
    for f in nz[1:]:
        h, c = _dehomogenize(f)
        g = g.gcd(h)
        b = min(b, c)
    lead = int(g.leading_coefficient())
    if lead != 1:
        g = g * pow(lead, -1, nz[0].p)
    return _homogenize(g, b, nz[0].p)


def binary_divides(g: Form, f: Form) -> bool:
    """True when the binary form g divides f."""
    if not f.terms:
        return True
    if not g.terms:
        return False
    pg, bg = _dehomogenize(g)
    pf, bf = _dehomogenize(f)
    return bg <= bf and (pf % pg).is_zero()


def binary_roots(f: Form) -> tuple[list[tuple[tuple[int, int], int]], int]:
    """F_p-rational zeros of a binary form.

    Returns ([((s, t), multiplicity), ...], irrational_degree) with points
    normalized so the last nonzero coordinate is 1, sorted.
    """
    if not f.terms:
        raise AllZeroError("zero form vanishes everywhere")
    poly, b = _dehomogenize(f)
    out = []
    if b:
        out.append(((1, 0), b))
    rational = b
    if poly.degree() > 0:
        _, factors = poly.factor()
        for fac, mult in factors:
            if fac.degree() == 1:
                c0, c1 = (int(c) for c in fac.coeffs())
                root = (-c0) * pow(c1, -1, f.p) % f.p
                out.append(((root, 1), mult))
                rational += mult
    return sorted(out), f.degree - rational
