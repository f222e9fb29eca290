"""Presentation of the image Y of the blow-up of P^n along V under the linear
system of degree-D forms through V (D = sigma or sigma + 1)."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .algebra import Form, FormMatrix, all_minors_list, basis, mul_dense
from .bminimal import curve_degree_from_twists, profile_from_degree
from .graded import (BettiTable, CapExceeded, GradedIdeal, betti_to_hilbert, fit_by_sections,
                     sigma as sigma_of)
from .hilburch import DegenerateError, HilbertBurchMatrix, variety_ideal
from .linalg import matmul_mod, nullspace_mod

MODES = ("sigma", "sigma_plus_one")


class AnnihilationError(RuntimeError):
    """A proposed generator does not map to zero."""


@dataclass
class PsiMap:
    """x_{hj} -> w_h F_j and y_l -> G_l; all images have degree ``target_degree``."""

    n: int
    target_degree: int
    F: list[Form]
    G: list[Form]
    f_columns: list[int]
    g_columns: list[int]
    names: list[str]
    images: np.ndarray  # dense images, one row per variable
    p: int

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def target_nvars(self) -> int:
        return self.n + 1

    def x_index(self, h: int, j: int) -> int:
        """Variable index of x_{h j}, j counted from 0."""
        return h * len(self.F) + j

    def y_index(self, l: int) -> int:
        return (self.n + 1) * len(self.F) + l

    def _dense(self, f: Form) -> tuple[np.ndarray, int]:
        """Dense image of f, of degree f.degree * target_degree."""
        nv, p, D = self.target_nvars, self.p, self.target_degree
        if not f.terms:
            return np.zeros(basis(nv, f.degree * D).size, dtype=np.int64), f.degree * D
        if f.degree == 0:
            return np.array([f.terms[(0,) * f.nvars]], dtype=np.int64), 0
        if f.degree == 1:
            coeffs = np.array(f.linear_coefficients(), dtype=np.int64)
            return matmul_mod(coeffs[None, :], self.images, p)[0], D
        # split off the first variable of each term: f = sum_a v_a f_a
        groups: dict[int, dict] = {}
        for e, c in f.terms.items():
            a = next(i for i, k in enumerate(e) if k)
            rest = list(e)
            rest[a] -= 1
            groups.setdefault(a, {})[tuple(rest)] = c
        out = np.zeros(basis(nv, f.degree * D).size, dtype=np.int64)
        for a, terms in sorted(groups.items()):
            sub, sdeg = self._dense(Form(f.nvars, f.degree - 1, terms, p))
            out = (out + mul_dense(self.images[a], D, sub, sdeg, nv, p)) % p
        return out, f.degree * D

    def apply(self, f: Form) -> Form:
        if f.nvars != self.nvars:
            raise ValueError(f"form lives in {f.nvars} variables, the source ring has {self.nvars}")
        vec, deg = self._dense(f)
        return Form.from_dense(self.target_nvars, deg, vec, self.p)

    def annihilates(self, f: Form) -> bool:
        vec, _ = self._dense(f)
        return not vec.any()


def target_degree(m: HilbertBurchMatrix, mode: str, sig: int | None = None) -> int:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if sig is None:
        sig = sigma_of(variety_ideal(m), m.n)
    return sig if mode == "sigma" else sig + 1


def build_psi(m: HilbertBurchMatrix, mode: str = "sigma", sig: int | None = None) -> PsiMap:
    D = target_degree(m, mode, sig)
    mins = variety_ideal(m).generators
    f_cols = [j for j, f in enumerate(mins) if f.degree == D - 1]
    g_cols = [j for j, f in enumerate(mins) if f.degree == D]
    if len(f_cols) + len(g_cols) != len(mins):
        raise ValueError(f"minor degrees {sorted(f.degree for f in mins)} do not split into {D - 1} and {D}")
    F = [mins[j] for j in f_cols]
    G = [mins[j] for j in g_cols]
    n, p = m.n, m.p
    w = [Form.variable(n + 1, h, p) for h in range(n + 1)]
    names, imgs = [], []
    for h in range(n + 1):
        for j, f in enumerate(F):
            names.append(f"x_{h}_{j + 1}")
            imgs.append((w[h] * f).to_dense())
    for l, g in enumerate(G):
        names.append(f"y_{l + 1}")
        imgs.append(g.to_dense())
    images = np.array(imgs, dtype=np.int64).reshape(len(names), basis(n + 1, D).size)
    return PsiMap(n, D, F, G, f_cols, g_cols, names, images, p)


def build_X(psi: PsiMap) -> FormMatrix:
    nv, p = psi.nvars, psi.p
    rows = [[Form.variable(nv, psi.x_index(h, j), p) for j in range(len(psi.F))] for h in range(psi.n + 1)]
    return FormMatrix(rows, nv, p)


@dataclass
class Coefficients:
    """delta[u][l][i] from the linear entries, beta[u][j][h][i] from the quadric entries."""

    rows: list[int]
    delta: list[list[list[int]]]
    beta: list[list[list[list[int]]]]


def split_quadric(q: Form) -> list[list[int]]:
    """Symmetric beta with sum_{h,i} beta[h][i] w_h w_i = q; needs odd p."""
    p = q.p
    if p == 2:
        raise ValueError("symmetric splitting needs an odd characteristic")
    n1 = q.nvars
    half = pow(2, -1, p)
    beta = [[0] * n1 for _ in range(n1)]
    for e, c in q.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        h, i = idx
        if h == i:
            beta[h][h] = c
        else:
            beta[h][i] = beta[i][h] = c * half % p
    return beta


def _row_twists(m: HilbertBurchMatrix) -> list[int]:
    return m.degree_matrix.twists()[1]


def extract_coefficients(m: HilbertBurchMatrix, psi: PsiMap) -> Coefficients:
    """Coefficients of the rows whose relation has degree D + 1 (the rows of B)."""
    D = psi.target_degree
    rows = [u for u, tw in enumerate(_row_twists(m)) if tw == D + 1]
    delta, beta = [], []
    for u in rows:
        du = []
        for col in psi.g_columns:
            e = m.entries[u, col]
            if e.terms and e.degree != 1:
                raise ValueError(f"entry ({u + 1},{col + 1}) should be linear")
            du.append(e.linear_coefficients() if e.terms else [0] * (m.n + 1))
        bu = []
        for col in psi.f_columns:
            e = m.entries[u, col]
            if e.terms and e.degree != 2:
                raise ValueError(f"entry ({u + 1},{col + 1}) should be a quadric")
            bu.append(split_quadric(e) if e.terms else [[0] * (m.n + 1) for _ in range(m.n + 1)])
        delta.append(du)
        beta.append(bu)
    return Coefficients(rows, delta, beta)


def build_B(psi: PsiMap, coeffs: Coefficients) -> FormMatrix | None:
    """B[u][i] = sum_l delta^{ul}_i y_l + sum_{j,h} beta^{uij}_h x_{hj}; k x (n+1)."""
    nv, p, n = psi.nvars, psi.p, psi.n
    if not coeffs.rows:
        return None
    out = []
    for du, bu in zip(coeffs.delta, coeffs.beta):
        row = []
        for i in range(n + 1):
            c = [0] * nv
            for l, dl in enumerate(du):
                c[psi.y_index(l)] = dl[i] % p
            for j, bj in enumerate(bu):
                for h in range(n + 1):
                    c[psi.x_index(h, j)] = (c[psi.x_index(h, j)] + bj[h][i]) % p
            row.append(Form.linear(c, p))
        out.append(row)
    return FormMatrix(out, nv, p)


def check_B(psi: PsiMap, B: FormMatrix, X: FormMatrix) -> None:
    """psi(sum_i x_{i nu} B_{u i}) = 0 for every u and nu."""
    for u in range(B.rows):
        for nu in range(X.cols):
            f = Form.zero(psi.nvars, 2, psi.p)
            for i in range(psi.n + 1):
                f = f + X[i, nu] * B[u, i]
            if not psi.annihilates(f):
                raise AnnihilationError(f"row {u + 1} of B fails against column {nu + 1} of X")


def build_H(m: HilbertBurchMatrix, psi: PsiMap) -> list[Form]:
    """Basis of the degree-1 kernel of psi; its size must match the rows with twist D."""
    ker = nullspace_mod(psi.images.T, psi.p)
    expected = sum(1 for tw in _row_twists(m) if tw == psi.target_degree)
    if ker.shape[0] != expected:
        raise DegenerateError(f"non-generic instance: {ker.shape[0]} linear forms in the kernel, expected {expected}")
    return [Form.linear(list(r), psi.p) for r in ker]


def _matrix_product(B: FormMatrix, X: FormMatrix) -> list[Form]:
    out = []
    for u in range(B.rows):
        for nu in range(X.cols):
            f = Form.zero(B.nvars, 2, B.p)
            for i in range(B.cols):
                f = f + B[u, i] * X[i, nu]
            out.append(f)
    return out


@dataclass
class BlowupPresentation:
    source: HilbertBurchMatrix
    mode: str
    sigma: int
    psi: PsiMap
    X: FormMatrix
    B: FormMatrix | None
    H: list[Form]
    ideal: GradedIdeal
    counts: dict
    N_prime: int
    N_embed: int
    closed_form_N: int | None = None

    @property
    def names(self) -> list[str]:
        return self.psi.names

    def to_dict(self) -> dict:
        names = self.psi.names
        return {
            "mode": self.mode, "sigma": self.sigma, "target_degree": self.psi.target_degree,
            "variables": names, "X_shape": [self.X.rows, self.X.cols],
            "B_shape": [self.B.rows, self.B.cols] if self.B is not None else [0, self.source.n + 1],
            "counts": self.counts, "N_prime": self.N_prime, "N_embed": self.N_embed,
            "closed_form_N": self.closed_form_N,
            "generators": [g.to_text(names) for g in self.ideal.generators],
        }


def closed_form_N(m: HilbertBurchMatrix, mode: str) -> int | None:
    """Ambient dimension predicted by the closed forms (space curves only)."""
    if m.n != 3:
        return None
    if mode == "sigma_plus_one":
        return 3 * m.rho + 3 if m.is_linear() else None
    gens, syz = m.degree_matrix.twists()
    s = curve_degree_from_twists(syz, gens)
    if s < 3:
        return None
    prof = profile_from_degree(s)
    if prof.template != m.degree_matrix:
        return None
    return 3 * prof.d - 3 * prof.k + prof.rho + 3


def assemble_ideal(m: HilbertBurchMatrix, mode: str = "sigma", sig: int | None = None,
                   check: bool = True) -> BlowupPresentation:
    vi = variety_ideal(m)
    if sig is None:
        sig = sigma_of(vi, m.n)
    psi = build_psi(m, mode, sig)
    X = build_X(psi)
    coeffs = extract_coefficients(m, psi)
    B = build_B(psi, coeffs)
    H = build_H(m, psi)
    gens: list[Form] = []
    x_minors = all_minors_list(X, 2) if X.rows >= 2 and X.cols >= 2 else []
    gens += x_minors
    bx = _matrix_product(B, X) if B is not None and X.cols else []
    bx = [f for f in bx if f.terms]
    gens += bx
    b_minors = []
    if B is not None and B.rows >= m.n + 1:
        b_minors = [f for f in all_minors_list(B, m.n + 1) if f.terms]
    gens += b_minors
    gens += H
    counts = {"x_minors": len(x_minors), "bx_entries": len(bx), "b_minors": len(b_minors),
              "linear_forms": len(H), "total": len(gens)}
    if check:
        if B is not None and X.cols:
            check_B(psi, B, X)
        for g in gens:
            if not psi.annihilates(g):
                raise AnnihilationError(f"generator {g.to_text(psi.names)} is not in the kernel")
    n_prime = psi.nvars - 1
    n_embed = n_prime - len(H)
    system = vi.piece_dimension(psi.target_degree) - 1
    if system != n_embed:
        raise DegenerateError(f"N mismatch: the linear system has projective dimension {system}, "
                              f"the presentation gives {n_embed}")
    ideal = GradedIdeal(gens, psi.nvars, m.p)
    return BlowupPresentation(m, mode, sig, psi, X, B, H, ideal, counts, n_prime, n_embed,
                              closed_form_N(m, mode))


def en_betti_table(n: int, sig: int) -> BettiTable:
    """Eagon-Northcott resolution of the maximal minors of a sigma x (n+1) linear matrix."""
    if sig <= n:
        raise ValueError("need sigma > n")
    return BettiTable(tuple((i, n + i, comb(n + i - 1, n) * comb(sig, n + i))
                            for i in range(1, sig - n + 1)))


@dataclass
class YReport:
    N_prime: int
    N_embed: int
    dimension: int
    degree: int
    sectional_genus: int | None
    hilbert: dict[int, int]
    betti_consistent: bool | None
    betti: list[list[int]] | None = None

    def as_tuple(self) -> tuple[int, int, int | None]:
        return self.N_embed, self.degree, self.sectional_genus

    def to_dict(self) -> dict:
        return {
            "N_prime": self.N_prime, "N_embed": self.N_embed, "dimension": self.dimension,
            "degree": self.degree, "sectional_genus": self.sectional_genus,
            "hilbert": {str(t): h for t, h in sorted(self.hilbert.items())},
            "betti_consistent": self.betti_consistent, "betti": self.betti,
        }


def analyze_Y(pres: BlowupPresentation, cap: int = 10, hilbert_tmax: int = 3,
              seed: int = 0) -> YReport:
    """Invariants of Y; for linear sources the Hilbert function is checked against the
    Eagon-Northcott table for every t <= cap."""
    work = pres.ideal.eliminate_linear()
    fit = fit_by_sections(work, seed=seed)
    consistent, table = None, None
    m = pres.source
    if m.is_linear() and pres.mode == "sigma" and m.rho > m.n:
        en = en_betti_table(m.n, m.rho)
        table = en.as_lists()
        consistent = all(betti_to_hilbert(en, work.nvars, t) == work.hilbert(t) for t in range(cap + 1))
        hilbert_tmax = max(hilbert_tmax, cap)
    hil = {}
    for t in range(hilbert_tmax + 1):
        try:
            hil[t] = work.hilbert(t)
        except CapExceeded:
            break
    return YReport(pres.N_prime, pres.N_embed, fit.dimension, fit.degree, fit.sectional_genus,
                   hil, consistent, table)
