"""Walkthrough: lattices, bond configurations, clusters, and p_c.

Run with: python3 demos/percolation_basics.py
"""
import numpy as np

from percoregret import (
    estimate_pc,
    estimate_theta,
    exhaustive_enumerate,
    label_clusters,
    lattice_for_count,
    sample_configuration,
    square_lattice,
)
from percoregret.rng import edge_uniforms

# A design with 9 notions lives on a 3x3 lattice with 12 edges.
lat = lattice_for_count(9)
print(f"lattice: {lat.rows}x{lat.cols}, {lat.n_vertices} vertices, {lat.n_edges} edges")

# One bond configuration at p = 0.5, from counter-based uniforms.
uniforms = edge_uniforms(seed=42, sample_start=0, n_samples=1, n_edges=lat.n_edges)[0]
config = sample_configuration(lat, np.full(lat.n_edges, 0.5), uniforms)
labeling = label_clusters(config)
print(f"open edges: {int(config.open.sum())}, clusters: {len(labeling.clusters)}")
for rec in labeling.clusters:
    if rec.spans("either"):
        print(f"  spanning cluster of size {rec.size}")

# Monte Carlo vs exact enumeration on the same lattice.
est = estimate_theta(lat, 0.5, n_samples=100_000, seed=7)
theta, p_inf, k_mean = exhaustive_enumerate(lat, 0.5)
print(f"theta: MC {est.theta_hat:.4f} +/- {est.theta_stderr:.4f}, exact {theta:.4f}")
print(f"<k>:   MC {est.k_hat:.4f} +/- {est.k_stderr:.4f}, exact {k_mean:.4f}")

# Finite-size critical probability on a larger lattice; the infinite
# square-lattice bond value is exactly 1/2.
big = square_lattice(48, 48)
grid = np.round(np.arange(0.0, 1.0001, 0.01), 12)
crit = estimate_pc(big, n_samples=1000, seed=3, threshold=0.05, p_grid=grid)
print(f"48x48 p_c estimate (epsilon=0.05): {crit.p_c_hat:.2f}")
