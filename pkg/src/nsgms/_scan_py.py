"""Pure-numpy subset scan over per-block Gram matrices.

For a candidate set T the residual statistic needs, per block, the squared
norm of the target row after projecting out the rows indexed by T.  All of
that is a function of the block Gram matrix G = X X^T alone:

    r_b(T) = G[i,i] - g^T S^+ g,   S = G[T,T],  g = G[T,i],

so the scan never touches the length-L data again.  Full-rank subsets go
through one batched Cholesky solve per subset size; subsets where that
fails fall back to a scalar Cholesky that drops near-dependent columns
(pivot below rank_tol^2 times the column's squared norm), mirroring
Gram-Schmidt with a relative rank threshold.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def residual_from_gram(G: np.ndarray, idx, target: int, rank_tol: float) -> float:
    """Squared residual norm of row ``target`` given rows ``idx``, with column drops."""
    t = len(idx)
    gii = G[target, target]
    if t == 0:
        return float(gii)
    L = np.zeros((t, t))
    kept = np.zeros(t, dtype=bool)
    for k in range(t):
        akk = G[idx[k], idx[k]]
        d = akk - np.dot(L[k, :k], L[k, :k])
        if akk <= 0.0 or d <= rank_tol * rank_tol * akk:
            continue
        kept[k] = True
        L[k, k] = math.sqrt(d)
        for r in range(k + 1, t):
            L[r, k] = (G[idx[r], idx[k]] - np.dot(L[r, :k], L[k, :k])) / L[k, k]
    y = np.zeros(t)
    for k in range(t):
        if kept[k]:
            y[k] = (G[idx[k], target] - np.dot(L[k, :k], y[:k])) / L[k, k]
    return float(max(gii - np.dot(y, y), 0.0))


def _batched_residuals(grams: np.ndarray, target: int, subs: np.ndarray) -> np.ndarray:
    """Sum over blocks of residuals for same-size subsets via batched Cholesky.

    ``subs`` has shape (m, t) with t >= 1.  Raises LinAlgError if any subset
    is numerically rank deficient, in which case the caller retries with the
    drop-capable scalar path.
    """
    m, t = subs.shape
    # S: (B, m, t, t); g: (B, m, t) via broadcast indexing into each block.
    S = grams[:, subs[:, :, np.newaxis], subs[:, np.newaxis, :]]
    g = grams[:, subs, target]
    F = np.linalg.cholesky(S)
    # Forward substitution unrolled over t; subset sizes are tiny.
    y = np.empty_like(g)
    for k in range(t):
        acc = g[..., k] - np.einsum("bmj,bmj->bm", F[..., k, :k], y[..., :k])
        y[..., k] = acc / F[..., k, k]
    res = grams[:, target, target][:, np.newaxis] - np.einsum("bmj,bmj->bm", y, y)
    return np.maximum(res, 0.0).sum(axis=0)


def subset_objectives(
    grams: np.ndarray,
    target: int,
    subsets: np.ndarray,
    sizes: np.ndarray,
    n_total: int,
    lam: float,
    rank_tol: float,
) -> np.ndarray:
    """Penalized residual objective for every candidate subset.

    grams: (B, p, p) per-block Gram matrices.
    subsets: (n, s_max) int array, row k listing subset k padded with -1.
    sizes: (n,) subset cardinalities.
    Returns (n,) array of (1/N) * sum_b residual + lam * |T|.
    """
    n = subsets.shape[0]
    out = np.empty(n)
    B = grams.shape[0]
    gii_total = float(grams[:, target, target].sum())
    for t in np.unique(sizes):
        mask = sizes == t
        if t == 0:
            out[mask] = gii_total
            continue
        subs = subsets[mask, :t]
        try:
            out[mask] = _batched_residuals(grams, target, subs)
        except np.linalg.LinAlgError:
            rows = np.flatnonzero(mask)
            for r in rows:
                idx = subsets[r, :t]
                out[r] = sum(
                    residual_from_gram(grams[b], idx, target, rank_tol) for b in range(B)
                )
    return out / n_total + lam * sizes
