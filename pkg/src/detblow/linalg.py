"""Exact linear algebra over F_p on top of FLINT's nmod_mat.

Matrices travel as numpy int64 arrays with entries in [0, p).  Conversion to
FLINT goes through Python ints, so large inputs are processed in row chunks.
"""

from __future__ import annotations

import random

import flint
import numpy as np

# entries per conversion chunk; bounds transient Python-int memory
CHUNK_ENTRIES = 4_000_000


def to_nmod(a: np.ndarray, p: int) -> flint.nmod_mat:
    a = np.asarray(a, dtype=np.int64)
    r, c = a.shape
    return flint.nmod_mat(r, c, (a % p).ravel().tolist(), p)


def from_nmod(m: flint.nmod_mat) -> np.ndarray:
    r, c = m.nrows(), m.ncols()
    return np.array([int(x) for x in m.entries()], dtype=np.int64).reshape(r, c)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p, exact.

    Both factors are split into 16-bit halves so every float64 product and
    partial sum stays below 2**53; the four BLAS products are recombined mod p.
    """
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if a.shape[1] >= 2**21:
        raise ValueError("inner dimension too large for the split product")
    a0, a1 = (a & 0xFFFF).astype(np.float64), (a >> 16).astype(np.float64)
    b0, b1 = (b & 0xFFFF).astype(np.float64), (b >> 16).astype(np.float64)
    p00 = (a0 @ b0).astype(np.int64) % p
    mid = ((a0 @ b1).astype(np.int64) + (a1 @ b0).astype(np.int64)) % p
    p11 = (a1 @ b1).astype(np.int64) % p
    out = p11 * (pow(2, 32, p)) % p
    out = (out + mid * 65536) % p
    return (out + p00) % p


def rank_mod(a: np.ndarray, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    r, c = a.shape
    if r == 0 or c == 0:
        return 0
    if r * c <= CHUNK_ENTRIES:
        return to_nmod(a, p).rank()
    if r < c:
        # rank of the transpose: columns of a become the rows of a tall matrix
        return r - kernel_rows(lambda idx: a[:, list(idx)].T, c, r, p).shape[0]
    return c - kernel_rows(lambda idx: a[list(idx)], r, c, p).shape[0]


def rank_rows(build_rows, nrows: int, ncols: int, p: int, seed: int = 0) -> int:
    """Exact rank of a matrix given by ``build_rows(indices) -> array``."""
    if nrows == 0 or ncols == 0:
        return 0
    if nrows <= ncols + 16:
        return rank_mod(build_rows(range(nrows)), p)
    return ncols - kernel_rows(build_rows, nrows, ncols, p, seed).shape[0]


def kernel_rows(build_rows, nrows: int, ncols: int, p: int, seed: int = 0) -> np.ndarray:
    """Reduced basis (as rows) of the right kernel of a tall implicit matrix.

    A seeded batch of ncols + 16 rows is eliminated first.  Its kernel K is
    then checked against every remaining row with fast products; rows not
    killed by K join the batch and K is recomputed.  At the end every row is
    orthogonal to K while the batch rows span its complement, so K is the
    exact kernel.
    """
    if nrows == 0:
        return np.eye(ncols, dtype=np.int64)
    order = list(range(nrows))
    random.Random(seed).shuffle(order)
    first = min(nrows, ncols + 16)
    batch = build_rows(order[:first])
    ker = nullspace_mod(batch, p)
    chunk = max(1, CHUNK_ENTRIES // ncols)
    pos = first
    while pos < nrows and ker.shape[0]:
        block = build_rows(order[pos:pos + chunk])
        pos += chunk
        hits = matmul_mod(block, ker.T, p).any(axis=1)
        if hits.any():
            batch = np.vstack([_echelon(batch, p), block[hits]])
            ker = nullspace_mod(batch, p)
    return ker


def _echelon(a: np.ndarray, p: int) -> np.ndarray:
    red, rk = rref_mod(a, p)
    return red[:rk]


def rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, int]:
    red, rk = to_nmod(a, p).rref()
    return from_nmod(red), rk


def nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning the right kernel {x : a x = 0}, in reduced form."""
    a = np.asarray(a, dtype=np.int64)
    r, c = a.shape
    if c == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if r == 0:
        return np.eye(c, dtype=np.int64)
    x, nullity = to_nmod(a, p).nullspace()
    ker = from_nmod(x)[:, :nullity].T.copy()
    if nullity == 0:
        return ker
    red, rk = rref_mod(ker, p)
    return red[:rk]


def solve_point(a: np.ndarray, p: int) -> np.ndarray:
    """A nonzero kernel vector of ``a`` (raises if the kernel is trivial)."""
    ker = nullspace_mod(a, p)
    if ker.shape[0] == 0:
        raise ValueError("trivial kernel")
    return ker[0]
