"""Numba kernels for the Monte Carlo hot loops.

These mirror the pure-Python labeling in lattice.py; the exhaustive
enumeration oracle deliberately does not use them, so the two routes stay
independent.  All kernels are nogil so sample chunks can run on a thread
pool; they accumulate integer statistics only, which makes reductions exact
and order-insensitive.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_HORIZONTAL = 3  # TOUCH_LEFT | TOUCH_RIGHT
_VERTICAL = 12  # TOUCH_TOP | TOUCH_BOTTOM


@njit(cache=True, nogil=True, inline="always")
def _find(parent, v):
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


@njit(cache=True, nogil=True, inline="always")
def _spans(flags, direction):
    if direction == 0:
        return flags & _HORIZONTAL == _HORIZONTAL
    if direction == 1:
        return flags & _VERTICAL == _VERTICAL
    return (flags & _HORIZONTAL == _HORIZONTAL) or (flags & _VERTICAL == _VERTICAL)


@njit(cache=True, nogil=True)
def chunk_stats(open_mask, edge_a, edge_b, touch, n_vertices, direction):
    """Integer statistics over a chunk of bond configurations.

    open_mask: (samples, edges) bool.  Returns
    (spanning_samples, sum_k, sum_k_sq, sum_spanning_edges) where k is the
    per-sample spanning-cluster count and spanning edges are open edges
    whose cluster spans.
    """
    n_samples, n_edges = open_mask.shape
    parent = np.empty(n_vertices, np.int32)
    size = np.empty(n_vertices, np.int32)
    flags = np.empty(n_vertices, np.uint8)
    n_span = 0
    sum_k = 0
    sum_k_sq = 0
    sum_edges = 0
    for s in range(n_samples):
        for v in range(n_vertices):
            parent[v] = v
            size[v] = 1
            flags[v] = touch[v]
        for k in range(n_edges):
            if open_mask[s, k]:
                ra = _find(parent, edge_a[k])
                rb = _find(parent, edge_b[k])
                if ra != rb:
                    if size[ra] < size[rb]:
                        ra, rb = rb, ra
                    parent[rb] = ra
                    size[ra] += size[rb]
                    flags[ra] |= flags[rb]
        k_count = 0
        for v in range(n_vertices):
            if parent[v] == v and _spans(flags[v], direction):
                k_count += 1
        e_count = 0
        for k in range(n_edges):
            if open_mask[s, k]:
                root = _find(parent, edge_a[k])
                if _spans(flags[root], direction):
                    e_count += 1
        if k_count > 0:
            n_span += 1
        sum_k += k_count
        sum_k_sq += k_count * k_count
        sum_edges += e_count
    return n_span, sum_k, sum_k_sq, sum_edges


@njit(cache=True, nogil=True)
def spanning_counts(open_mask, edge_a, edge_b, touch, n_vertices, direction, out):
    """Per-sample spanning-cluster counts; out is int64 of length samples."""
    n_samples, n_edges = open_mask.shape
    parent = np.empty(n_vertices, np.int32)
    size = np.empty(n_vertices, np.int32)
    flags = np.empty(n_vertices, np.uint8)
    for s in range(n_samples):
        for v in range(n_vertices):
            parent[v] = v
            size[v] = 1
            flags[v] = touch[v]
        for k in range(n_edges):
            if open_mask[s, k]:
                ra = _find(parent, edge_a[k])
                rb = _find(parent, edge_b[k])
                if ra != rb:
                    if size[ra] < size[rb]:
                        ra, rb = rb, ra
                    parent[rb] = ra
                    size[ra] += size[rb]
                    flags[ra] |= flags[rb]
        k_count = 0
        for v in range(n_vertices):
            if parent[v] == v and _spans(flags[v], direction):
                k_count += 1
        out[s] = k_count


@njit(cache=True, nogil=True)
def spanning_thresholds(uniforms, order, edge_a, edge_b, touch, n_vertices, direction, out):
    """Per-sample critical uniform at which a spanning cluster first appears.

    Edges are inserted in increasing uniform order; with the open rule
    u < p, a sample spans at probability p iff its threshold is < p.
    Sentinels: -1.0 when a lone vertex already spans (so spanning holds at
    p = 0), 2.0 when even the full edge set never spans.
    """
    n_samples, n_edges = uniforms.shape
    parent = np.empty(n_vertices, np.int32)
    size = np.empty(n_vertices, np.int32)
    flags = np.empty(n_vertices, np.uint8)
    for s in range(n_samples):
        spanned = False
        for v in range(n_vertices):
            parent[v] = v
            size[v] = 1
            flags[v] = touch[v]
            if _spans(touch[v], direction):
                spanned = True
        if spanned:
            out[s] = -1.0
            continue
        out[s] = 2.0
        for i in range(n_edges):
            k = order[s, i]
            ra = _find(parent, edge_a[k])
            rb = _find(parent, edge_b[k])
            if ra == rb:
                continue
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]
            flags[ra] |= flags[rb]
            if _spans(flags[ra], direction):
                out[s] = uniforms[s, k]
                break
