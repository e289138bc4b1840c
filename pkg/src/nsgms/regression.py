"""Sparse neighborhood regression by exhaustive penalized subset search.

Per node i, every candidate set T of at most s other nodes is scored by

    Z(T) + lambda * |T|,   Z(T) = (1/N) sum_b || proj_complement(x_i, T, b) ||^2,

where the projection removes, within each block, the span of the candidate
rows.  The global minimizer is returned, ties broken by smaller |T| and
then lexicographically.  Z(T) is evaluated from per-block Gram matrices by
the scan kernel (Cython when built, numpy otherwise); the explicit
projection route below is the slow reference the tests check it against.

Also here: the lambda default (one sixth of the minimum edge strength),
the sufficient sample-size bound used to place experiment grids, and the
block-length condition for that bound to apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatchError,
    InfeasibleConfigError,
    InvalidParameterError,
)
from .graph import Cig
from .kernels import subset_objectives
from .sampling import SampleBlocks, block_grams

DEFAULT_RANK_TOL = 1e-10


@dataclass(frozen=True)
class EstimatorConfig:
    """Search budget s, penalty weight, and the numerical rank threshold."""

    s: int
    lam: float
    rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        if self.s < 0:
            raise InvalidParameterError(f"need s >= 0, got {self.s}")
        if self.lam < 0:
            raise InvalidParameterError(f"need lambda >= 0, got {self.lam}")
        if not (0 < self.rank_tol < 1):
            raise InvalidParameterError(f"need 0 < rank_tol < 1, got {self.rank_tol}")


@dataclass(frozen=True)
class NeighborhoodEstimate:
    """Selected index set for one node plus search diagnostics."""

    node: int
    selected: frozenset
    objective: float
    evaluated: int


def project_complement(block_data: np.ndarray, T, x: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Remove from ``x`` its projection onto the span of rows ``T`` of the block.

    Rows are orthogonalized by modified Gram-Schmidt with one
    reorthogonalization pass; a row whose norm falls below ``rank_tol``
    times its original norm is treated as dependent and dropped.
    ``T`` holds 1-based node indices.
    """
    block_data = np.asarray(block_data, dtype=float)
    x = np.asarray(x, dtype=float)
    if block_data.ndim != 2 or x.ndim != 1 or block_data.shape[1] != x.shape[0]:
        raise DimensionMismatchError(
            f"block {block_data.shape} incompatible with vector {x.shape}"
        )
    T = sorted(set(T))
    L = x.shape[0]
    if len(T) >= L:
        raise InvalidParameterError(f"need |T| < L, got |T|={len(T)}, L={L}")
    for j in T:
        if not (1 <= j <= block_data.shape[0]):
            raise InvalidParameterError(f"index {j} outside 1..{block_data.shape[0]}")
    basis = []
    for j in T:
        v = block_data[j - 1].copy()
        norm0 = np.linalg.norm(v)
        if norm0 == 0.0:
            continue
        for _ in range(2):  # MGS + one reorthogonalization pass
            for u in basis:
                v -= (u @ v) * u
        norm = np.linalg.norm(v)
        if norm <= rank_tol * norm0:
            continue
        basis.append(v / norm)
    r = x.copy()
    for u in basis:
        r -= (u @ r) * u
    return r


def residual_statistic(samples: SampleBlocks, i: int, T, rank_tol: float = DEFAULT_RANK_TOL) -> float:
    """Average squared residual of node i's samples after projecting out T, per block."""
    if not (1 <= i <= samples.p):
        raise InvalidParameterError(f"node {i} outside 1..{samples.p}")
    T = sorted(set(T))
    if i in T:
        raise InvalidParameterError(f"candidate set must not contain the target node {i}")
    total = 0.0
    for X in samples.data:
        r = project_complement(X, T, X[i - 1], rank_tol)
        total += float(r @ r)
    return total / samples.n_samples


def candidate_sets(p: int, i: int, s: int):
    """All subsets of {1..p}\\{i} with at most s elements, by (size, lex) order."""
    others = [j for j in range(1, p + 1) if j != i]
    for t in range(s + 1):
        yield from combinations(others, t)


def n_candidate_sets(p: int, s: int) -> int:
    return sum(math.comb(p - 1, t) for t in range(s + 1))


def estimate_neighborhood(samples: SampleBlocks, i: int, config: EstimatorConfig) -> NeighborhoodEstimate:
    """Exhaustive penalized search for the best explaining set for node i."""
    if not (1 <= i <= samples.p):
        raise InvalidParameterError(f"node {i} outside 1..{samples.p}")
    if config.s >= samples.L:
        raise InfeasibleConfigError(
            f"budget s={config.s} >= block length L={samples.L}: "
            "a candidate set could span a whole block"
        )
    if config.s >= samples.p:
        raise InvalidParameterError(f"need s < p, got s={config.s}, p={samples.p}")
    grams = block_grams(samples)
    return _scan_from_grams(grams, samples.n_samples, i, config)


def _scan_from_grams(grams: np.ndarray, n_total: int, i: int, config: EstimatorConfig) -> NeighborhoodEstimate:
    p = grams.shape[1]
    sets = list(candidate_sets(p, i, config.s))
    width = max(config.s, 1)
    subsets = np.full((len(sets), width), -1, dtype=np.int32)
    sizes = np.empty(len(sets), dtype=np.int32)
    for k, T in enumerate(sets):
        sizes[k] = len(T)
        for m, j in enumerate(T):
            subsets[k, m] = j - 1
    objectives = subset_objectives(
        np.ascontiguousarray(grams), i - 1, subsets, sizes, n_total,
        config.lam, config.rank_tol,
    )
    # Enumeration is already (size, lex)-sorted, so the first strict minimum
    # implements the tie-break: smaller set first, then lexicographic.
    best = int(np.argmin(objectives))
    return NeighborhoodEstimate(
        node=i,
        selected=frozenset(sets[best]),
        objective=float(objectives[best]),
        evaluated=len(sets),
    )


def estimate_graph(samples: SampleBlocks, config: EstimatorConfig, combine: str = "OR") -> Cig:
    """Assemble a graph estimate from all per-node neighborhood estimates."""
    if combine not in ("OR", "AND"):
        raise InvalidParameterError(f"combine rule must be OR or AND, got {combine!r}")
    if config.s >= samples.L:
        raise InfeasibleConfigError(f"budget s={config.s} >= block length L={samples.L}")
    if config.s >= samples.p:
        raise InvalidParameterError(f"need s < p, got s={config.s}, p={samples.p}")
    grams = np.ascontiguousarray(block_grams(samples))
    selected = {
        i: _scan_from_grams(grams, samples.n_samples, i, config).selected
        for i in range(1, samples.p + 1)
    }
    edges = set()
    for i in range(1, samples.p + 1):
        for j in range(i + 1, samples.p + 1):
            hit_i, hit_j = j in selected[i], i in selected[j]
            if (hit_i or hit_j) if combine == "OR" else (hit_i and hit_j):
                edges.add(frozenset((i, j)))
    return Cig(p=samples.p, edges=frozenset(edges))


def default_lambda(rho_min: float) -> float:
    """Penalty weight that makes the recovery guarantee go through: rho_min/6."""
    if rho_min <= 0:
        raise InvalidParameterError(f"need rho_min > 0, got {rho_min}")
    return rho_min / 6.0


def sample_size_bound(beta: float, rho_min: float, p: int, s: int, eta: float) -> float:
    """Sample size above which per-node recovery fails with probability <= eta.

    Evaluates 864 * (beta/rho_min) * log(6*p*s^2/eta).
    """
    for name, v in (("beta", beta), ("rho_min", rho_min), ("p", p), ("s", s), ("eta", eta)):
        if v <= 0:
            raise InvalidParameterError(f"need {name} > 0, got {v}")
    return 864.0 * (beta / rho_min) * math.log(6.0 * p * s * s / eta)


def rho_condition_holds(rho_min: float, beta: float, L: int) -> bool:
    """Whether the minimum edge strength clears 24*beta/L, as the bound requires."""
    for name, v in (("rho_min", rho_min), ("beta", beta), ("L", L)):
        if v <= 0:
            raise InvalidParameterError(f"need {name} > 0, got {v}")
    return rho_min >= 24.0 * beta / L
