"""Batched matrix arithmetic modulo a small prime, on int64 numpy arrays of shape (N, n, n)."""

from __future__ import annotations

import numpy as np


def inverse_table(p):
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = pow(a, -1, p)
    return t


def matmul(A, B, p):
    return np.matmul(A, B) % p


def transpose(A):
    return np.swapaxes(A, -1, -2)


def det(A, p):
    """Determinants of a batch, reduced mod p."""
    A = np.array(A, dtype=np.int64) % p
    N, n, _ = A.shape
    inv = inverse_table(p)
    d = np.ones(N, dtype=np.int64)
    idx = np.arange(N)
    for c in range(n):
        nz = A[:, c:, c] != 0
        has = nz.any(axis=1)
        piv = np.argmax(nz, axis=1) + c
        d = np.where(has, d, 0)
        swap = has & (piv != c)
        if swap.any():
            rows_c = A[idx, c, :].copy()
            rows_p = A[idx, piv, :].copy()
            A[idx, c, :] = np.where(swap[:, None], rows_p, rows_c)
            A[idx, piv, :] = np.where(swap[:, None], rows_c, rows_p)
            d = np.where(swap, -d % p, d)
        pv = A[:, c, c]
        d = d * pv % p
        if c + 1 < n:
            f = A[:, c + 1 :, c] * inv[pv][:, None] % p
            A[:, c + 1 :, :] = (A[:, c + 1 :, :] - f[:, :, None] * A[:, c, None, :]) % p
    return d % p


def combos(basis, coeffs, p):
    """sum_k coeffs[:, k] * basis[k] for a (d, n, m) basis and (N, d) coefficients."""
    return np.tensordot(coeffs, basis, axes=(1, 0)) % p


def coefficient_chunks(p, d, chunk=1 << 16):
    """All vectors of (Z/p)^d in lexicographic order, as (N, d) int64 chunks."""
    total = p**d
    start = 0
    while start < total:
        stop = min(total, start + chunk)
        idx = np.arange(start, stop, dtype=np.int64)
        out = np.empty((stop - start, d), dtype=np.int64)
        for k in range(d - 1, -1, -1):
            out[:, k] = idx % p
            idx //= p
        yield out
        start = stop


def is_identity(A, p):
    n = A.shape[-1]
    return (A % p == np.eye(n, dtype=np.int64)).all(axis=(1, 2))


def preserves_form(A, G, p):
    """Mask of batch members with A^T G A == G, filtering entry by entry."""
    G = np.asarray(G, dtype=np.int64) % p
    n = A.shape[-1]
    alive = np.arange(A.shape[0])
    for i in range(n):
        for j in range(i, n) if _is_sym_or_skew(G) else range(n):
            if not alive.size:
                break
            sub = A[alive]
            gj = np.einsum("ab,nb->na", G, sub[:, :, j]) % p
            val = np.einsum("na,na->n", sub[:, :, i], gj) % p
            alive = alive[val == G[i, j]]
    mask = np.zeros(A.shape[0], dtype=bool)
    mask[alive] = True
    return mask


def _is_sym_or_skew(G):
    return bool((G == G.T).all() or (G == (-G.T)).all())


def encode(A, p):
    """Integer keys for a batch of matrices (base-p digits of the row-major entries)."""
    flat = A.reshape(A.shape[0], -1)
    w = np.int64(1)
    key = np.zeros(A.shape[0], dtype=np.int64)
    for j in range(flat.shape[1] - 1, -1, -1):
        key += flat[:, j] * w
        w *= p
    return key


def decode(keys, p, n):
    keys = np.array(keys, dtype=np.int64)
    out = np.empty((keys.shape[0], n * n), dtype=np.int64)
    for j in range(n * n - 1, -1, -1):
        out[:, j] = keys % p
        keys = keys // p
    return out.reshape(-1, n, n)


def inverse(A, p):
    """Inverses of a batch of invertible matrices mod p (Gauss-Jordan with row swaps)."""
    A = np.array(A, dtype=np.int64) % p
    N, n, _ = A.shape
    inv = inverse_table(p)
    M = np.concatenate([A, np.broadcast_to(np.eye(n, dtype=np.int64), (N, n, n))], axis=2).copy()
    idx = np.arange(N)
    for c in range(n):
        nz = M[:, c:, c] != 0
        if not nz.any(axis=1).all():
            raise ValueError("singular matrix in batch")
        piv = np.argmax(nz, axis=1) + c
        rows_c = M[idx, c, :].copy()
        rows_p = M[idx, piv, :].copy()
        M[idx, c, :] = rows_p
        M[idx, piv, :] = rows_c
        M[:, c, :] = M[:, c, :] * inv[M[:, c, c]][:, None] % p
        f = M[:, :, c].copy()
        f[:, c] = 0
        M = (M - f[:, :, None] * M[:, c, None, :]) % p
    return M[:, :, n:]


def form_combos(basis, coeffs, G, p):
    """Members of the span preserving G: columns are built lazily and filtered as they appear."""
    G = np.asarray(G, dtype=np.int64) % p
    d, n, _ = basis.shape
    Bf = [basis[:, :, j].astype(np.float64) for j in range(n)]
    sym = _is_sym_or_skew(G)
    c = coeffs
    cols = []
    for j in range(n):
        cj = (c.astype(np.float64) @ Bf[j]).astype(np.int64) % p
        keep = np.ones(c.shape[0], dtype=bool)
        gj = (cj @ G.T) % p  # rows: G applied to column j
        for i in range(j + 1):
            ci = cj if i == j else cols[i]
            val = np.einsum("na,na->n", ci, gj) % p
            keep &= val == G[i, j]
            if not sym and i != j:
                gi = (ci @ G.T) % p
                keep &= np.einsum("na,na->n", cj, gi) % p == G[j, i]
        c = c[keep]
        cols = [x[keep] for x in cols] + [cj[keep]]
        if not c.shape[0]:
            return np.zeros((0, n, n), dtype=np.int64)
    return np.stack(cols, axis=2)
