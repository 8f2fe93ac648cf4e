"""Weighted digraphs whose short source-to-target paths encode leader sets.

The k-leader selection problem on a path or ring reduces to a hop-bounded
minimum-weight path problem. Payload nodes of the digraph are graph nodes; a
source-to-target path visiting payload nodes ``v1, .., vh`` stands for the
leader set ``{v1, .., vh}`` (rings add the fixed initial leader), and its
weight is exactly the total steady-state variance of that leader set.

Path variant: payload nodes 1..n, an edge from the source to every node, an
edge ``u -> v`` for every ``u < v``, and an edge from every node to the
target. Each weight is half the trace of the inverse of the tridiagonal
grounded block strictly between the two endpoints (the source and target
stand for the open ends of the path), so edges between adjacent nodes and the
boundary edges ``source -> 1`` and ``n -> target`` weigh 0.

Ring variant, one digraph per initial leader ``i``: payload nodes are all
nodes except ``i``, the source and target stand for ``i`` on the outgoing and
incoming side, and an edge ``u -> v`` weighs half the trace of the inverse of
the block covering the clockwise arc interior from ``u`` to ``v``. A direct
source -> target edge covering the whole remaining ring represents the
singleton set ``{i}``. Pair weights are shared across all ``n`` digraphs
through a precomputed table, so each additional digraph costs only the fill.

The half factor folds the variance normalization into the weights; dropping
it would scale every path weight by two without changing any argmin, but the
reported variances would be wrong.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .graphs import GraphSpec, Topology
from .tridiag import TridiagonalMatrix, _trace_of_inverse_range, trace_of_inverse
from .variance import _gather_arc, _graph_arrays

__all__ = [
    "ReductionDigraph",
    "build_path_digraph",
    "build_ring_digraph",
    "ring_pair_weights",
    "edge_weight_oracle",
    "write_edges_csv",
]


@dataclass(frozen=True)
class ReductionDigraph:
    """Dense hop-search digraph over indices ``0..n+1``.

    Index 0 is the source, ``n + 1`` the target, and ``1..n`` are graph node
    IDs. ``weights[u, v]`` is the edge weight, ``inf`` where no edge exists.
    For ring digraphs the row and column of the initial leader are absent
    (all ``inf``); that node is represented by the source/target pair.
    """

    weights: np.ndarray
    topology: Topology
    initial_leader: int | None = None

    def __post_init__(self) -> None:
        w = self.weights
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 3:
            raise ValueError(f"weight matrix has invalid shape {w.shape}")
        finite = w[np.isfinite(w)]
        if finite.size and finite.min() < 0.0:
            raise ValueError("digraph weights must be nonnegative")
        w.flags.writeable = False

    @property
    def n(self) -> int:
        return self.weights.shape[0] - 2

    @property
    def source(self) -> int:
        return 0

    @property
    def target(self) -> int:
        return self.n + 1

    def payload_nodes(self) -> tuple[int, ...]:
        if self.initial_leader is None:
            return tuple(range(1, self.n + 1))
        return tuple(v for v in range(1, self.n + 1) if v != self.initial_leader)

    def edge_count(self) -> int:
        return int(np.isfinite(self.weights).sum())

    def in_neighbors(self, v: int) -> Iterator[tuple[int, float]]:
        """Yield ``(u, weight)`` for every edge entering ``v``."""
        col = self.weights[:, v]
        for u in np.flatnonzero(np.isfinite(col)):
            yield int(u), float(col[u])

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield all ``(u, v, weight)`` edges in index order."""
        rows, cols = np.nonzero(np.isfinite(self.weights))
        for u, v in zip(rows, cols):
            yield int(u), int(v), float(self.weights[u, v])

    def label(self, index: int) -> str:
        if index == self.source:
            return "s"
        if index == self.target:
            return "t"
        return str(index)


def build_path_digraph(g: GraphSpec) -> ReductionDigraph:
    """Construct the reduction digraph for a path instance.

    All ``Theta(n^2)`` edges are weighted with the O(m) tridiagonal kernel,
    so construction is O(n^3) overall.
    """
    if g.topology is not Topology.PATH:
        raise ValueError(f"expected a path graph, got {g.topology.value}")
    n = g.n
    cond, deg = _graph_arrays(g)
    scratch = [0.0] * n
    w = np.full((n + 2, n + 2), np.inf)
    # Block between endpoints a < b covers 0-based rows a..b-2 of the
    # Laplacian, i.e. the kernel range (a, b-1); endpoint 0 is the source
    # side and endpoint n+1 the target side.
    for v in range(1, n + 1):
        w[0, v] = 0.5 * _trace_of_inverse_range(deg, cond, 0, v - 1, scratch)
        w[v, n + 1] = 0.5 * _trace_of_inverse_range(deg, cond, v, n, scratch)
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            w[u, v] = 0.5 * _trace_of_inverse_range(deg, cond, u, v - 1, scratch)
    return ReductionDigraph(weights=w, topology=Topology.PATH)


@lru_cache(maxsize=8)
def ring_pair_weights(g: GraphSpec) -> tuple[np.ndarray, np.ndarray]:
    """Weights of all ordered node pairs of a ring, plus whole-arc weights.

    Returns ``(pair, full_arc)`` where ``pair[u, v]`` is the weight of the
    clockwise segment from ``u`` to ``v`` (``inf`` on the diagonal; row and
    column 0 unused) and ``full_arc[u]`` covers the whole ring with ``u`` as
    the only boundary. Computed once per graph and shared by every
    per-initial-leader digraph.
    """
    if g.topology is not Topology.RING:
        raise ValueError(f"expected a ring graph, got {g.topology.value}")
    n = g.n
    cond, deg = _graph_arrays(g)
    pair = np.full((n + 1, n + 1), np.inf)
    full_arc = np.zeros(n + 1)
    scratch = [0.0] * n
    diag_arc = [0.0] * (n - 1)
    off_arc = [0.0] * (n - 2)
    for u in range(1, n + 1):
        # Unrolled clockwise walk starting after u; reading the arc in this
        # order is what makes every block tridiagonal.
        idx = u % n
        for t in range(n - 1):
            diag_arc[t] = deg[idx]
            if t < n - 2:
                off_arc[t] = cond[idx]
            idx += 1
            if idx == n:
                idx = 0
        for t in range(n - 1):
            v = (u + t) % n + 1
            pair[u, v] = 0.5 * _trace_of_inverse_range(diag_arc, off_arc, 0, t, scratch)
        full_arc[u] = 0.5 * _trace_of_inverse_range(diag_arc, off_arc, 0, n - 1, scratch)
    pair.flags.writeable = False
    full_arc.flags.writeable = False
    return pair, full_arc


def build_ring_digraph(g: GraphSpec, i: int) -> ReductionDigraph:
    """Construct the ring reduction digraph for initial leader ``i``."""
    if g.topology is not Topology.RING:
        raise ValueError(f"expected a ring graph, got {g.topology.value}")
    n = g.n
    if not 1 <= i <= n:
        raise ValueError(f"initial leader {i} out of range 1..{n}")
    pair, full_arc = ring_pair_weights(g)
    w = np.full((n + 2, n + 2), np.inf)
    w[1 : n + 1, 1 : n + 1] = pair[1:, 1:]
    w[0, 1 : n + 1] = pair[i, 1:]
    w[1 : n + 1, n + 1] = pair[1:, i]
    w[0, n + 1] = full_arc[i]
    w[i, :] = np.inf
    w[:, i] = np.inf
    return ReductionDigraph(weights=w, topology=Topology.RING, initial_leader=i)


def edge_weight_oracle(g: GraphSpec, u: int, v: int) -> float:
    """Recompute a single digraph edge weight from its grounded block.

    For paths, ``u`` may be 0 for the source side and ``v`` may be ``n + 1``
    for the target side, with ``u < v``. For rings, ``u`` and ``v`` are node
    IDs and the weight covers the clockwise arc from ``u`` to ``v``; ``u ==
    v`` gives the whole-ring weight used by the direct source-target edge.

    Assembles the block explicitly and calls :func:`trace_of_inverse`, so
    tests can cross-check digraph construction against an independently
    assembled block (and both against the dense oracle).
    """
    cond, deg = _graph_arrays(g)
    n = g.n
    if g.topology is Topology.PATH:
        if not (0 <= u <= n and 1 <= v <= n + 1 and u < v):
            raise ValueError(f"invalid path boundary pair ({u}, {v}) for n={n}")
        if u == 0 and v == n + 1:
            raise ValueError("a path digraph has no direct source-target edge")
        lo, hi = u, v - 1
        block = TridiagonalMatrix(
            diag=deg[lo:hi], off=tuple(-c for c in cond[lo : max(hi - 1, lo)])
        )
    else:
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"invalid ring node pair ({u}, {v}) for n={n}")
        length = (v - u - 1) % n if u != v else n - 1
        _, diag, off = _gather_arc(cond, deg, u % n, length, n)
        block = TridiagonalMatrix(diag=tuple(diag), off=tuple(off))
    return 0.5 * trace_of_inverse(block)


def write_edges_csv(d: ReductionDigraph, path: str | os.PathLike | io.TextIOBase) -> None:
    """Dump all edges as ``from,to,weight`` CSV rows in index order."""

    def _write(fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["from", "to", "weight"])
        for u, v, weight in d.edges():
            writer.writerow([d.label(u), d.label(v), repr(weight)])

    if isinstance(path, io.TextIOBase):
        _write(path)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _write(fh)
