"""2D bond lattices for design resilience scoring.

A design with l notions is placed on the squarest m x n lattice that holds
them (row-major fill, vacant trailing cells carry no vertex).  Bond
configurations assign open/closed to each lattice edge; clusters of open
edges are labeled with union-find, tracking which lattice boundaries each
cluster touches so spanning can be tested per direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .designs import Design

# Boundary-contact bits per vertex/cluster.
TOUCH_LEFT = 1
TOUCH_RIGHT = 2
TOUCH_TOP = 4
TOUCH_BOTTOM = 8

DIRECTIONS = ("horizontal", "vertical", "either")


class LatticeError(ValueError):
    """Invalid lattice construction or configuration input."""


def direction_code(direction: str) -> int:
    try:
        return DIRECTIONS.index(direction)
    except ValueError:
        raise LatticeError(f"unknown direction {direction!r}; expected one of {DIRECTIONS}")


@dataclass
class LatticeSpec:
    """An m x n lattice with one vertex per occupied cell.

    Edges join lattice-adjacent occupied cells only, listed row-major with
    the horizontal edge before the vertical edge of each cell.  Instances
    are immutable by convention and safe to share across threads.
    """

    rows: int
    cols: int
    occupied: list  # [(r, c), ...] row-major, one per notion
    edges: list  # [((r, c), (r, c)), ...]
    notion_index: dict  # (r, c) -> notion index 0..l-1
    # Derived arrays for the numeric kernels.
    edge_a: np.ndarray = field(init=False, repr=False)
    edge_b: np.ndarray = field(init=False, repr=False)
    touch: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        idx = self.notion_index
        self.edge_a = np.array([idx[a] for a, _ in self.edges], dtype=np.int32)
        self.edge_b = np.array([idx[b] for _, b in self.edges], dtype=np.int32)
        touch = np.zeros(len(self.occupied), dtype=np.uint8)
        for v, (r, c) in enumerate(self.occupied):
            if c == 0:
                touch[v] |= TOUCH_LEFT
            if c == self.cols - 1:
                touch[v] |= TOUCH_RIGHT
            if r == 0:
                touch[v] |= TOUCH_TOP
            if r == self.rows - 1:
                touch[v] |= TOUCH_BOTTOM
        self.touch = touch

    @property
    def n_vertices(self) -> int:
        return len(self.occupied)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def _build_lattice(rows: int, cols: int, cells: list) -> LatticeSpec:
    occupied_set = set(cells)
    notion_index = {cell: i for i, cell in enumerate(cells)}
    edges = []
    for r, c in cells:
        if (r, c + 1) in occupied_set:
            edges.append(((r, c), (r, c + 1)))
        if (r + 1, c) in occupied_set:
            edges.append(((r, c), (r + 1, c)))
    return LatticeSpec(rows, cols, list(cells), edges, notion_index)


def lattice_for_count(l: int) -> LatticeSpec:
    """Squarest lattice housing l notions: m = ceil(sqrt(l)), n = ceil(l/m)."""
    if l < 1:
        raise LatticeError("design must contain at least one notion")
    m = math.isqrt(l)
    if m * m < l:
        m += 1
    n = -(-l // m)
    cells = [(i // n, i % n) for i in range(l)]
    return _build_lattice(m, n, cells)


def place_notions(design: "Design") -> LatticeSpec:
    """Place a design's notions on the lattice, row-major in notion order."""
    return lattice_for_count(len(design.notions))


def square_lattice(rows: int, cols: int) -> LatticeSpec:
    """Fully occupied rows x cols lattice (no design attached)."""
    if rows < 1 or cols < 1:
        raise LatticeError("lattice dimensions must be positive")
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    return _build_lattice(rows, cols, cells)


def edge_probabilities(design: "Design", lattice: LatticeSpec) -> np.ndarray:
    """Per-edge open probability from the design's connectivity lambda.

    A scalar lambda broadcasts to every edge; a matrix assigns each edge the
    entry for the notion pair housed at its endpoints.
    """
    lam = design.lam
    if np.isscalar(lam):
        if not 0.0 <= lam <= 1.0:
            raise LatticeError(f"lambda {lam} outside [0, 1]")
        return np.full(lattice.n_edges, float(lam))
    lam = np.asarray(lam, dtype=float)
    l = len(design.notions)
    if lam.shape != (l, l):
        raise LatticeError(f"lambda matrix shape {lam.shape} does not match l={l}")
    if np.any((lam < 0.0) | (lam > 1.0)):
        raise LatticeError("lambda matrix entries must lie in [0, 1]")
    if not np.array_equal(lam, lam.T):
        raise LatticeError("lambda matrix must be symmetric")
    probs = np.empty(lattice.n_edges)
    for k, (cell_a, cell_b) in enumerate(lattice.edges):
        i = lattice.notion_index[cell_a]
        j = lattice.notion_index[cell_b]
        probs[k] = lam[i, j]
    return probs


@dataclass
class BondConfiguration:
    """One open/closed assignment over a lattice's edges."""

    lattice: LatticeSpec
    open: np.ndarray  # bool, indexed by edge position

    def __post_init__(self):
        self.open = np.asarray(self.open, dtype=bool)
        if self.open.shape != (self.lattice.n_edges,):
            raise LatticeError(
                f"open vector length {self.open.shape} does not match "
                f"edge count {self.lattice.n_edges}"
            )


def sample_configuration(
    lattice: LatticeSpec, probs: np.ndarray, uniforms: np.ndarray
) -> BondConfiguration:
    """Open edge k iff uniforms[k] < probs[k].

    Uniforms are caller-supplied, which keeps sampling deterministic and lets
    coupled sweeps reuse one draw across many probability vectors.
    """
    probs = np.asarray(probs, dtype=float)
    uniforms = np.asarray(uniforms, dtype=float)
    if probs.shape != (lattice.n_edges,) or uniforms.shape != (lattice.n_edges,):
        raise LatticeError("probs and uniforms must each have one entry per edge")
    return BondConfiguration(lattice, uniforms < probs)


@dataclass
class ClusterRecord:
    size: int
    touches_left: bool
    touches_right: bool
    touches_top: bool
    touches_bottom: bool

    def spans(self, direction: str = "either") -> bool:
        horizontal = self.touches_left and self.touches_right
        vertical = self.touches_top and self.touches_bottom
        if direction == "horizontal":
            return horizontal
        if direction == "vertical":
            return vertical
        if direction == "either":
            return horizontal or vertical
        raise LatticeError(f"unknown direction {direction!r}")


@dataclass
class ClusterLabeling:
    """Partition of occupied vertices into open-edge-connected clusters."""

    cluster_of: dict  # vertex index -> cluster id
    clusters: list  # [ClusterRecord, ...] indexed by cluster id


class _DisjointSet:
    """Union-find with path halving; scratch state private to one labeling."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, v: int) -> int:
        parent = self.parent
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def label_clusters(config: BondConfiguration) -> ClusterLabeling:
    """Label connected clusters of the open subgraph, with boundary flags."""
    lat = config.lattice
    dsu = _DisjointSet(lat.n_vertices)
    for k in range(lat.n_edges):
        if config.open[k]:
            dsu.union(int(lat.edge_a[k]), int(lat.edge_b[k]))
    cluster_of = {}
    root_to_id = {}
    clusters = []
    for v in range(lat.n_vertices):
        root = dsu.find(v)
        if root not in root_to_id:
            root_to_id[root] = len(clusters)
            clusters.append(ClusterRecord(0, False, False, False, False))
        cid = root_to_id[root]
        cluster_of[v] = cid
        rec = clusters[cid]
        rec.size += 1
        flags = int(lat.touch[v])
        rec.touches_left |= bool(flags & TOUCH_LEFT)
        rec.touches_right |= bool(flags & TOUCH_RIGHT)
        rec.touches_top |= bool(flags & TOUCH_TOP)
        rec.touches_bottom |= bool(flags & TOUCH_BOTTOM)
    return ClusterLabeling(cluster_of, clusters)


def count_spanning_clusters(labeling: ClusterLabeling, direction: str = "either") -> int:
    """Number of clusters bridging opposite boundaries in the direction."""
    if direction not in DIRECTIONS:
        raise LatticeError(f"unknown direction {direction!r}")
    return sum(1 for rec in labeling.clusters if rec.spans(direction))
