"""Dense exact linear algebra over GF(p), vectorized with numpy.

Entries are int64 residues; we reduce after every row operation, so the
largest intermediate is p^2 + p, far below 2^63 for word-sized p."""
from __future__ import annotations

import numpy as np


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over GF(p); destroys a working copy."""
    a = np.array(matrix, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = a[r, c:] * inv % p
        below = a[r + 1:, c]
        nzb = np.nonzero(below)[0]
        if nzb.size:
            idx = r + 1 + nzb
            a[idx, c:] = (a[idx, c:] - np.outer(a[idx, c], a[r, c:])) % p
        r += 1
    return r


def sparse_rank_mod_p(columns, p: int) -> int:
    """Rank over GF(p) of a matrix given as sparse columns ({row: coeff}).

    Columns are eliminated against a growing set of normalized pivot
    columns; intended for the very sparse, very large matrices where a
    dense array would not fit in memory."""
    pivots = {}  # pivot row -> normalized column
    rank = 0
    for col in columns:
        col = {r: c % p for r, c in col.items() if c % p}
        while col:
            r = max(col)
            piv = pivots.get(r)
            if piv is None:
                inv = pow(col[r], p - 2, p)
                pivots[r] = {rr: cc * inv % p for rr, cc in col.items()}
                rank += 1
                break
            c = col[r]
            for rr, cc in piv.items():
                v = (col.get(rr, 0) - c * cc) % p
                if v:
                    col[rr] = v
                elif rr in col:
                    del col[rr]
    return rank


def nullspace_mod_p(matrix: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right nullspace over GF(p), rows = basis vectors."""
    a = np.array(matrix, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = a[r, c:] * inv % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others, c:] = (a[others, c:] - np.outer(a[others, c], a[r, c:])) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-a[i, fc]) % p
    return basis
