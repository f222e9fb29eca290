"""Slow, obviously-correct reference implementations used by the tests."""

from itertools import product


def rank_oracle(rows, p):
    m = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [(x - c * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def det_oracle(mat, p):
    """Leibniz expansion of a numeric determinant."""
    n = len(mat)
    if n == 0:
        return 1
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in mat[1:]]
        total += (-1) ** j * mat[0][j] * det_oracle(minor, p)
    return total % p


def monomial_count(nvars, degree):
    return sum(1 for e in product(range(degree + 1), repeat=nvars) if sum(e) == degree)
