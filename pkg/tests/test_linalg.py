import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detblow import linalg
from detblow.linalg import kernel_rows, matmul_mod, nullspace_mod, rank_mod, rank_rows
from oracles import rank_oracle

P = 2**31 - 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 30), st.integers(1, 30), st.integers(1, 30))
def test_matmul_mod_is_exact(seed, r, k, c):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, P, (r, k))
    b = rng.integers(0, P, (k, c))
    want = [[sum(int(a[i, t]) * int(b[t, j]) for t in range(k)) % P for j in range(c)] for i in range(r)]
    assert matmul_mod(a, b, P).tolist() == want


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12), st.integers(1, 12), st.integers(0, 12))
def test_rank_against_oracle(seed, r, c, k):
    # product of r x k and k x c has rank <= k
    rng = np.random.default_rng(seed)
    a = matmul_mod(rng.integers(0, 7, (r, k)), rng.integers(0, 7, (k, c)), 7) if k else np.zeros((r, c), int)
    assert rank_mod(a, 7) == rank_oracle(a.tolist(), 7)


def test_nullspace_is_kernel():
    rng = np.random.default_rng(3)
    a = matmul_mod(rng.integers(0, P, (6, 3)), rng.integers(0, P, (3, 9)), P)
    ker = nullspace_mod(a, P)
    assert ker.shape == (6, 9)
    assert not matmul_mod(a, ker.T, P).any()


@pytest.mark.parametrize("nrows,ncols,rank", [(300, 40, 25), (90, 60, 60), (500, 30, 0)])
def test_kernel_rows_on_tall_matrix(nrows, ncols, rank):
    rng = np.random.default_rng(nrows)
    if rank:
        a = matmul_mod(rng.integers(0, P, (nrows, rank)), rng.integers(0, P, (rank, ncols)), P)
    else:
        a = np.zeros((nrows, ncols), dtype=np.int64)
    build = lambda idx: a[list(idx)]
    assert kernel_rows(build, nrows, ncols, P).shape[0] == ncols - rank
    assert rank_rows(build, nrows, ncols, P) == rank


def test_large_wide_matrix_uses_kernel_path(monkeypatch):
    monkeypatch.setattr(linalg, "CHUNK_ENTRIES", 1000)
    rng = np.random.default_rng(9)
    a = matmul_mod(rng.integers(0, P, (40, 17)), rng.integers(0, P, (17, 120)), P)
    assert rank_mod(a, P) == 17
    assert rank_mod(a.T.copy(), P) == 17
