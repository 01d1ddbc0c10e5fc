"""Monte Carlo and exact-enumeration percolation estimators.

Estimates the spanning probability theta(p), the fraction of edges in
spanning clusters, the mean spanning-cluster count <k>, and the finite-size
critical probability p_c.  Sampling is counter-based (see rng.py): identical
(lattice, probs, samples, seed) always reproduce the same estimates, at any
worker count, and one draw of uniforms can be shared across a whole p grid
for exactly monotone coupled sweeps.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .lattice import (
    BondConfiguration,
    ClusterLabeling,
    LatticeError,
    LatticeSpec,
    count_spanning_clusters,
    direction_code,
    label_clusters,
)
from .rng import edge_uniforms

# Samples per work unit.  Fixed independently of the thread count so that
# partial sums are always formed over the same chunk boundaries; combined
# with integer accumulators this makes results bit-identical for any number
# of workers.
CHUNK_SAMPLES = 1024

ENUMERATION_EDGE_LIMIT = 20


class EnumerationLimitError(ValueError):
    """Raised when exact enumeration is asked for an intractable lattice."""


@dataclass
class PercolationEstimate:
    """Monte Carlo estimates for one edge-probability assignment."""

    p: object  # scalar probability or the string "per-edge"
    theta_hat: float
    theta_stderr: float
    p_infinity_hat: float
    p_infinity_stderr: float
    k_hat: float
    k_stderr: float
    samples: int


@dataclass
class CriticalEstimate:
    """Finite-size critical probability from a coupled grid sweep."""

    p_c_hat: float
    threshold: float
    trace: list  # [(p, theta_hat), ...] ascending in p
    samples: int


def _as_probs(lattice: LatticeSpec, probs) -> np.ndarray:
    if np.isscalar(probs):
        probs = np.full(lattice.n_edges, float(probs))
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (lattice.n_edges,):
        raise LatticeError("probs must have one entry per lattice edge")
    if np.any((probs < 0.0) | (probs > 1.0)):
        raise LatticeError("edge probabilities must lie in [0, 1]")
    return probs


def _chunk_ranges(n_samples: int):
    return [
        (start, min(CHUNK_SAMPLES, n_samples - start))
        for start in range(0, n_samples, CHUNK_SAMPLES)
    ]


def _map_chunks(task, chunks, threads: int):
    if threads <= 1:
        return [task(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(task, chunks))


def _grid_totals(
    lattice: LatticeSpec,
    prob_grid: np.ndarray,  # (grid, edges)
    n_samples: int,
    seed: int,
    direction: str,
    threads: int,
) -> np.ndarray:
    """Integer stat totals per grid row, with uniforms shared across rows."""
    dir_code = direction_code(direction)
    edge_a, edge_b, touch = lattice.edge_a, lattice.edge_b, lattice.touch
    n_vertices = lattice.n_vertices

    def task(chunk):
        start, count = chunk
        uniforms = edge_uniforms(seed, start, count, lattice.n_edges)
        out = np.zeros((len(prob_grid), 4), dtype=np.int64)
        for g, probs in enumerate(prob_grid):
            open_mask = uniforms < probs[None, :]
            out[g] = _kernels.chunk_stats(
                open_mask, edge_a, edge_b, touch, n_vertices, dir_code
            )
        return out

    totals = np.zeros((len(prob_grid), 4), dtype=np.int64)
    for partial in _map_chunks(task, _chunk_ranges(n_samples), threads):
        totals += partial
    return totals


def _estimate_from_totals(p, totals, n_samples: int, n_edges: int) -> PercolationEstimate:
    n_span, sum_k, sum_k_sq, sum_edges = (int(x) for x in totals)
    theta = n_span / n_samples
    p_inf = sum_edges / (n_samples * n_edges) if n_edges else 0.0
    k_hat = sum_k / n_samples
    theta_se = math.sqrt(theta * (1.0 - theta) / n_samples)
    p_inf_se = math.sqrt(p_inf * (1.0 - p_inf) / n_samples)
    if n_samples > 1:
        var = (sum_k_sq - n_samples * k_hat * k_hat) / (n_samples - 1)
        k_se = math.sqrt(max(var, 0.0) / n_samples)
    else:
        k_se = 0.0
    return PercolationEstimate(p, theta, theta_se, p_inf, p_inf_se, k_hat, k_se, n_samples)


def estimate_theta(
    lattice: LatticeSpec,
    probs,
    n_samples: int,
    seed: int,
    direction: str = "either",
    threads: int = 1,
) -> PercolationEstimate:
    """Monte Carlo spanning statistics for one edge-probability assignment.

    Fills theta_hat (fraction of samples with a spanning cluster),
    p_infinity_hat, and k_hat from the same sample set.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    probs = _as_probs(lattice, probs)
    scalar = float(probs[0]) if probs.size and np.all(probs == probs[0]) else "per-edge"
    totals = _grid_totals(lattice, probs[None, :], n_samples, seed, direction, threads)
    return _estimate_from_totals(scalar, totals[0], n_samples, lattice.n_edges)


def estimate_p_infinity(
    lattice: LatticeSpec,
    probs,
    n_samples: int,
    seed: int,
    direction: str = "either",
    threads: int = 1,
) -> float:
    """Mean fraction of edges belonging to a spanning cluster."""
    return estimate_theta(lattice, probs, n_samples, seed, direction, threads).p_infinity_hat


def average_spanning_clusters(
    lattice: LatticeSpec,
    probs,
    n_samples: int,
    seed: int,
    direction: str = "either",
    threads: int = 1,
) -> float:
    """Sample mean of the spanning-cluster count, <k>."""
    return estimate_theta(lattice, probs, n_samples, seed, direction, threads).k_hat


def sweep_grid(
    lattice: LatticeSpec,
    p_grid,
    n_samples: int,
    seed: int,
    direction: str = "either",
    threads: int = 1,
) -> list:
    """Coupled estimates across a homogeneous p grid.

    One uniform draw is shared by every grid point, so theta_hat is exactly
    non-decreasing along an ascending grid.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.size == 0:
        raise ValueError("p grid must be non-empty")
    prob_grid = np.repeat(p_grid[:, None], lattice.n_edges, axis=1)
    totals = _grid_totals(lattice, prob_grid, n_samples, seed, direction, threads)
    return [
        _estimate_from_totals(float(p), totals[g], n_samples, lattice.n_edges)
        for g, p in enumerate(p_grid)
    ]


def config_probability(config: BondConfiguration, probs) -> float:
    """Probability of one configuration: prod over edges of p_k or 1 - p_k."""
    probs = _as_probs(config.lattice, probs)
    factors = np.where(config.open, probs, 1.0 - probs)
    return float(np.prod(factors))


def spanning_edge_set(
    config: BondConfiguration, labeling: ClusterLabeling, direction: str = "either"
) -> set:
    """Open edges whose endpoints lie in a spanning cluster."""
    lat = config.lattice
    result = set()
    for k in range(lat.n_edges):
        if not config.open[k]:
            continue
        cid = labeling.cluster_of[int(lat.edge_a[k])]
        if labeling.clusters[cid].spans(direction):
            result.add(k)
    return result


def literal_theta_product(spanning_edges: set, probs) -> float:
    """Product of open probabilities over a spanning edge set; 0 when empty.

    Kept alongside the standard spanning-probability estimator because the
    two disagree in general; rewards use estimate_theta, not this.
    """
    if not spanning_edges:
        return 0.0
    probs = np.asarray(probs, dtype=float)
    return float(np.prod([probs[k] for k in sorted(spanning_edges)]))


def exhaustive_enumerate(lattice: LatticeSpec, probs, direction: str = "either") -> tuple:
    """Exact (theta, p_infinity, k_mean) by summing over all configurations.

    Independent oracle for the Monte Carlo estimators; pure Python on
    purpose.  Refuses lattices with more than ENUMERATION_EDGE_LIMIT edges.
    """
    n_edges = lattice.n_edges
    if n_edges > ENUMERATION_EDGE_LIMIT:
        raise EnumerationLimitError(
            f"{n_edges} edges exceeds the enumeration limit of {ENUMERATION_EDGE_LIMIT}"
        )
    probs = _as_probs(lattice, probs)
    theta = 0.0
    p_inf = 0.0
    k_mean = 0.0
    for mask in range(1 << n_edges):
        open_bits = np.array([(mask >> k) & 1 for k in range(n_edges)], dtype=bool)
        config = BondConfiguration(lattice, open_bits)
        weight = config_probability(config, probs)
        if weight == 0.0:
            continue
        labeling = label_clusters(config)
        k = count_spanning_clusters(labeling, direction)
        if k > 0:
            theta += weight
        k_mean += weight * k
        if n_edges:
            p_inf += weight * len(spanning_edge_set(config, labeling, direction)) / n_edges
    return theta, p_inf, k_mean


def _thresholds(
    lattice: LatticeSpec, n_samples: int, seed: int, direction: str, threads: int
) -> np.ndarray:
    dir_code = direction_code(direction)
    edge_a, edge_b, touch = lattice.edge_a, lattice.edge_b, lattice.touch

    def task(chunk):
        start, count = chunk
        uniforms = edge_uniforms(seed, start, count, lattice.n_edges)
        order = np.argsort(uniforms, axis=1).astype(np.int64)
        out = np.empty(count)
        _kernels.spanning_thresholds(
            uniforms, order, edge_a, edge_b, touch, lattice.n_vertices, dir_code, out
        )
        return out

    parts = _map_chunks(task, _chunk_ranges(n_samples), threads)
    return np.concatenate(parts)


def estimate_pc(
    lattice: LatticeSpec,
    n_samples: int,
    seed: int,
    threshold: float,
    p_grid,
    direction: str = "either",
    threads: int = 1,
) -> CriticalEstimate:
    """Finite-size critical probability from a coupled homogeneous sweep.

    p_c_hat is the largest grid p whose estimated theta is <= threshold, a
    finite-lattice surrogate for the supremum of {p : theta(p) = 0}.  The
    per-sample spanning threshold is computed once (edges inserted in
    increasing uniform order), so the whole grid shares one sample draw and
    the trace is exactly monotone.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.size == 0:
        raise ValueError("p grid must be non-empty")
    if np.any(np.diff(p_grid) < 0):
        raise ValueError("p grid must be sorted ascending")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    crossing = _thresholds(lattice, n_samples, seed, direction, threads)
    trace = []
    p_c_hat = float(p_grid[0])
    for p in p_grid:
        theta = float(np.count_nonzero(crossing < p)) / n_samples
        trace.append((float(p), theta))
        if theta <= threshold:
            p_c_hat = float(p)
    return CriticalEstimate(p_c_hat, float(threshold), trace, n_samples)


def theoretical_k_limit(l: int, y: float = 0.5) -> float:
    """Scaling limit l**(2 - 3y) for the mean spanning-cluster count.

    The exponent bound y <= 2/3 is enforced; the default y = 1/2 gives
    sqrt(l).
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if not 0.0 <= y <= 2.0 / 3.0:
        raise ValueError("exponent y must lie in [0, 2/3]")
    return float(l) ** (2.0 - 3.0 * y)
