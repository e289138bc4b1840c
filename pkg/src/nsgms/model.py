"""Block-wise Gaussian model families with a prescribed sparsity pattern.

A model is a sequence of B precision/covariance pairs sharing one graph:
off-diagonal precision entries are nonzero exactly on the graph's edges,
and every covariance matrix has its eigenvalues inside a band [1, beta].

Construction recipe: per block, start from K = I + W where W is symmetric
with support on the edges and entries drawn uniformly from
+-[coupling/(2*s_max), coupling/s_max] (sign and magnitude redrawn per
block, so the family genuinely varies across blocks).  The spectrum of K
is then mapped affinely, K <- alpha*(K + gamma*I), with alpha and gamma
chosen from the extreme eigenvalues so the covariance eigenvalues land on
[1, beta] exactly.  An affine map of the precision matrix preserves its
off-diagonal zero pattern, which an affine map of the covariance would
not, and the pattern is what encodes the graph.

Edge strength is measured by the block-averaged squared ratio of the
off-diagonal precision entry to the diagonal one; it is reported, never
targeted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstructionFailure, InvalidParameterError
from .graph import Cig

#: relative tolerance on ||C @ K - I||_inf, scaled by p
INVERSION_TOL = 1e-8

#: slack allowed on the covariance eigenvalue band [1, beta]
EIG_BAND_TOL = 1e-9


@dataclass(frozen=True)
class BlockModel:
    """B symmetric positive-definite precision/covariance pairs of size p."""

    p: int
    B: int
    L: int
    beta: float
    precisions: tuple
    covariances: tuple

    def __post_init__(self):
        if len(self.precisions) != self.B or len(self.covariances) != self.B:
            raise InvalidParameterError("need exactly B precision and covariance matrices")
        for K, C in zip(self.precisions, self.covariances):
            if K.shape != (self.p, self.p) or C.shape != (self.p, self.p):
                raise InvalidParameterError("matrix shape does not match p")

    @property
    def n_samples(self) -> int:
        return self.B * self.L


@dataclass(frozen=True)
class ModelReport:
    """Literal evaluation of the three model assumptions."""

    rho_min_achieved: float
    max_degree: int
    eig_min: float
    eig_max: float
    assumptions_ok: tuple  # (min edge strength, sparsity, eigenvalue band)


def _spectrum_to_band(K: np.ndarray, beta: float):
    """Affine map of the precision spectrum so covariance eigenvalues hit [1, beta].

    Returns (K_new, C_new) computed from one symmetric eigendecomposition,
    so the pair is consistent to machine precision.
    """
    evals, vecs = np.linalg.eigh(K)
    kmin, kmax = evals[0], evals[-1]
    if kmin <= 0:
        raise ConstructionFailure("precision matrix not positive definite; reduce coupling")
    if kmax - kmin <= 1e-12 * kmax:
        # Flat spectrum (e.g. empty graph): plain scaling puts all eigenvalues at 1.
        alpha, gamma = 1.0 / kmax, 0.0
    else:
        alpha = (1.0 - 1.0 / beta) / (kmax - kmin)
        gamma = 1.0 / alpha - kmax
    new_evals = alpha * (evals + gamma)
    K_new = alpha * K + (alpha * gamma) * np.eye(K.shape[0])
    K_new = 0.5 * (K_new + K_new.T)
    C_new = (vecs / new_evals) @ vecs.T
    C_new = 0.5 * (C_new + C_new.T)
    return K_new, C_new


def build_block_model(cig: Cig, B: int, L: int, beta: float, coupling: float, seed) -> BlockModel:
    """Build a B-block model whose precision support equals the graph's edges."""
    if B < 1 or L < 1:
        raise InvalidParameterError(f"need B >= 1 and L >= 1, got B={B}, L={L}")
    if not beta > 1:
        raise InvalidParameterError(f"need beta > 1, got {beta}")
    if not (0 < coupling < 1):
        raise InvalidParameterError(f"need 0 < coupling < 1, got {coupling}")
    rng = np.random.default_rng(seed)
    p = cig.p
    s_max = max(cig.max_degree, 1)
    lo, hi = coupling / (2 * s_max), coupling / s_max
    edge_pairs = cig.edge_list()

    precisions, covariances = [], []
    for _ in range(B):
        W = np.zeros((p, p))
        for (i, j) in edge_pairs:
            w = rng.uniform(lo, hi) * rng.choice((-1.0, 1.0))
            W[i - 1, j - 1] = W[j - 1, i - 1] = w
        K = np.eye(p) + W
        try:
            np.linalg.cholesky(K)
        except np.linalg.LinAlgError:
            raise ConstructionFailure(
                f"I + W not positive definite (coupling={coupling}, s_max={s_max})"
            ) from None
        K_new, C_new = _spectrum_to_band(K, beta)
        precisions.append(K_new)
        covariances.append(C_new)

    model = BlockModel(
        p=p, B=B, L=L, beta=float(beta),
        precisions=tuple(precisions), covariances=tuple(covariances),
    )
    for K, C in zip(model.precisions, model.covariances):
        err = np.abs(C @ K - np.eye(p)).max()
        if err > INVERSION_TOL * p:
            raise ConstructionFailure(f"inversion residual {err:.3e} exceeds tolerance")
    return model


def partial_correlation(model: BlockModel, i: int, j: int) -> float:
    """Block-averaged squared ratio K_ij/K_ii; zero iff K_ij = 0 in all blocks."""
    for v in (i, j):
        if not (1 <= v <= model.p):
            raise InvalidParameterError(f"node {v} outside 1..{model.p}")
    if i == j:
        raise InvalidParameterError("need two distinct nodes")
    a, b = i - 1, j - 1
    vals = [(K[a, b] / K[a, a]) ** 2 for K in model.precisions]
    return float(np.mean(vals))


def min_edge_strength(model: BlockModel, cig: Cig) -> float:
    """Minimum average partial correlation over the graph's edges (inf if edgeless)."""
    pairs = cig.edge_list()
    if not pairs:
        return float("inf")
    return min(partial_correlation(model, i, j) for (i, j) in pairs)


def covariance_eig_range(model: BlockModel):
    """Extreme covariance eigenvalues over all blocks."""
    lo, hi = float("inf"), float("-inf")
    for C in model.covariances:
        evals = np.linalg.eigvalsh(C)
        lo, hi = min(lo, evals[0]), max(hi, evals[-1])
    return lo, hi


def verify_assumptions(model: BlockModel, cig: Cig, rho_min: float, s: int) -> ModelReport:
    """Check the three structural assumptions and report the measured quantities.

    The checks are, in order: every edge's average partial correlation is at
    least ``rho_min``; the maximum degree is at most ``s`` with
    ``s < min(p, L)/3``; all covariance eigenvalues lie in [1, beta].
    """
    if model.p != cig.p:
        raise InvalidParameterError("model and graph disagree on p")
    rho_achieved = min_edge_strength(model, cig)
    max_deg = cig.max_degree
    eig_lo, eig_hi = covariance_eig_range(model)
    ok_rho = rho_achieved >= rho_min
    ok_sparse = (max_deg <= s) and (s < min(model.p / 3, model.L / 3))
    ok_eigs = (eig_lo >= 1.0 - EIG_BAND_TOL) and (eig_hi <= model.beta + EIG_BAND_TOL)
    return ModelReport(
        rho_min_achieved=rho_achieved,
        max_degree=max_deg,
        eig_min=eig_lo,
        eig_max=eig_hi,
        assumptions_ok=(ok_rho, ok_sparse, ok_eigs),
    )
