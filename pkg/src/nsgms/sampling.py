"""Seeded Gaussian sampling of block models.

Each block b contributes L i.i.d. zero-mean columns with the block's
covariance, drawn as G @ z with G the Cholesky factor and z standard
normal.  Every block gets its own PRNG stream keyed by (master seed,
block index), so blocks can be generated in any order or in parallel and
the output never depends on scheduling.  Normal variates come from
numpy's ziggurat via a per-block PCG64 generator; the transform is fixed,
so identical seeds give bit-identical samples across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NotPositiveDefiniteError
from .model import BlockModel

#: relative tolerance on the Cholesky reconstruction ||G G^T - C||_inf
CHOLESKY_TOL = 1e-10


@dataclass(frozen=True)
class SampleBlocks:
    """B matrices of shape p x L; column n of block b is sample (b-1)*L + n."""

    p: int
    B: int
    L: int
    data: tuple  # tuple of B arrays, each p x L

    def __post_init__(self):
        if len(self.data) != self.B:
            raise InvalidParameterError("need exactly B data blocks")
        for X in self.data:
            if X.shape != (self.p, self.L):
                raise InvalidParameterError(f"block shape {X.shape} != ({self.p}, {self.L})")
            if not np.all(np.isfinite(X)):
                raise InvalidParameterError("samples contain non-finite values")

    @property
    def n_samples(self) -> int:
        return self.B * self.L


def cholesky_factor(C: np.ndarray) -> np.ndarray:
    """Lower-triangular G with G @ G.T == C, for symmetric positive-definite C."""
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise InvalidParameterError(f"expected a square matrix, got shape {C.shape}")
    if not np.allclose(C, C.T, rtol=0, atol=1e-12 * max(1.0, np.abs(C).max())):
        raise InvalidParameterError("matrix is not symmetric")
    try:
        G = np.linalg.cholesky(C)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError("matrix is not positive definite") from None
    err = np.abs(G @ G.T - C).max()
    if err > CHOLESKY_TOL * max(np.abs(C).max(), 1e-300):
        raise NotPositiveDefiniteError(f"Cholesky reconstruction error {err:.3e} too large")
    return G


def block_seed_sequence(seed, block_index: int) -> np.random.SeedSequence:
    """Seed stream for one block, keyed by (master seed, block index)."""
    return np.random.SeedSequence(entropy=seed, spawn_key=(block_index,))


def sample_process(model: BlockModel, seed) -> SampleBlocks:
    """Draw B blocks of L i.i.d. columns, block b with covariance C^(b)."""
    factors = [cholesky_factor(C) for C in model.covariances]
    blocks = []
    for b, G in enumerate(factors):
        rng = np.random.default_rng(block_seed_sequence(seed, b))
        Z = rng.standard_normal((model.p, model.L))
        blocks.append(G @ Z)
    return SampleBlocks(p=model.p, B=model.B, L=model.L, data=tuple(blocks))


def empirical_block_covariance(samples: SampleBlocks, b: int) -> np.ndarray:
    """(1/L) X_b X_b^T for block index b (0-based)."""
    X = samples.data[b]
    return (X @ X.T) / samples.L


def block_grams(samples: SampleBlocks) -> np.ndarray:
    """Stacked per-block Gram matrices X_b X_b^T, shape (B, p, p)."""
    out = np.empty((samples.B, samples.p, samples.p))
    for b, X in enumerate(samples.data):
        out[b] = X @ X.T
    return out
