"""Steady-state deviation variances for a leader set via grounded Laplacian blocks.

Fixing a leader set grounds the Laplacian: leader rows and columns are
removed, and the follower-follower submatrix splits into independent
tridiagonal blocks. On a path the blocks are the runs of followers between
consecutive leaders (plus the runs before the first and after the last). On a
ring each clockwise inter-leader arc becomes a tridiagonal block once its
nodes are read in clockwise order.

Each follower's variance is half the matching diagonal entry of the block
inverse, and the total is half the summed trace, so everything here reduces
to the O(m) tridiagonal kernels in :mod:`leadersel.tridiag`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .graphs import GraphSpec, Topology, conductances, degrees
from .tridiag import (
    TridiagonalMatrix,
    _inverse_diagonal_range,
    _trace_of_inverse_range,
)

__all__ = [
    "LeaderSet",
    "VarianceReport",
    "follower_blocks",
    "total_variance",
    "total_variance_value",
]


@dataclass(frozen=True)
class LeaderSet:
    """Nonempty set of leader node IDs, stored strictly increasing."""

    ids: tuple[int, ...]

    def __post_init__(self) -> None:
        ids = tuple(sorted(int(i) for i in self.ids))
        if not ids:
            raise ValueError("leader set must be nonempty")
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise ValueError(f"leader IDs must be distinct, got {ids}")
        if ids[0] < 1:
            raise ValueError(f"leader IDs must be >= 1, got {ids}")
        object.__setattr__(self, "ids", ids)

    @classmethod
    def of(cls, ids: Iterable[int]) -> "LeaderSet":
        return cls(tuple(ids))

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids)

    def __contains__(self, node: object) -> bool:
        return node in self.ids


@dataclass(frozen=True)
class VarianceReport:
    """Per-follower steady-state deviation variances and their sum."""

    per_follower: dict[int, float]
    total: float


def _check_leaders(g: GraphSpec, ids: tuple[int, ...]) -> None:
    if ids[-1] > g.n:
        raise ValueError(f"leader ID {ids[-1]} exceeds node count {g.n}")


@lru_cache(maxsize=64)
def _graph_arrays(g: GraphSpec) -> tuple[tuple[float, ...], tuple[float, ...]]:
    # (conductances, degrees), both 0-indexed; cached since GraphSpec is frozen.
    return conductances(g), degrees(g)


def _path_ranges(n: int, ids: tuple[int, ...]) -> list[tuple[int, int]]:
    # Half-open 0-based index ranges of the follower runs, in node order.
    # Nodes a..b (1-based) map to indices a-1..b-1.
    ranges = [(0, ids[0] - 1)]
    for u, v in zip(ids, ids[1:]):
        ranges.append((u, v - 1))
    ranges.append((ids[-1], n))
    return ranges


def _ring_arcs(n: int, ids: tuple[int, ...]) -> list[tuple[int, int]]:
    # (start node 0-based, interior length) of each clockwise inter-leader arc.
    arcs = []
    k = len(ids)
    for j in range(k):
        u = ids[j]
        v = ids[(j + 1) % k]
        length = (v - u - 1) % n
        arcs.append((u % n, length))
    return arcs


def _gather_arc(cond, deg, start: int, length: int, n: int) -> tuple[list[int], list[float], list[float]]:
    # Interior of a clockwise arc as a contiguous tridiagonal block: node IDs,
    # block diagonal (full ring degrees), couplings between consecutive arc nodes.
    nodes = [0] * length
    diag = [0.0] * length
    off = [0.0] * max(length - 1, 0)
    idx = start
    for t in range(length):
        nodes[t] = idx + 1
        diag[t] = deg[idx]
        if t < length - 1:
            off[t] = -cond[idx]
        idx += 1
        if idx == n:
            idx = 0
    return nodes, diag, off


def follower_blocks(g: GraphSpec, s: LeaderSet) -> list[TridiagonalMatrix]:
    """Tridiagonal blocks of the grounded Laplacian, in node/clockwise order.

    Paths yield ``k + 1`` blocks (adjacent leaders contribute empty ones);
    rings yield ``k`` blocks, one per clockwise inter-leader arc.
    """
    _check_leaders(g, s.ids)
    cond, deg = _graph_arrays(g)
    blocks = []
    if g.topology is Topology.PATH:
        for lo, hi in _path_ranges(g.n, s.ids):
            blocks.append(
                TridiagonalMatrix(
                    diag=deg[lo:hi],
                    off=tuple(-c for c in cond[lo : max(hi - 1, lo)]),
                )
            )
    else:
        for start, length in _ring_arcs(g.n, s.ids):
            _, diag, off = _gather_arc(cond, deg, start, length, g.n)
            blocks.append(TridiagonalMatrix(diag=tuple(diag), off=tuple(off)))
    return blocks


def total_variance(g: GraphSpec, s: LeaderSet) -> VarianceReport:
    """Exact steady-state deviation variances for leader set ``s``.

    Every follower's variance is half its diagonal entry in the inverse of
    its block; the total is their sum. Leaders do not appear in the
    per-follower map, and a graph with no followers has total 0.
    """
    _check_leaders(g, s.ids)
    cond, deg = _graph_arrays(g)
    per: dict[int, float] = {}
    if g.topology is Topology.PATH:
        for lo, hi in _path_ranges(g.n, s.ids):
            entries = _inverse_diagonal_range(deg, cond, lo, hi)
            for offset, value in enumerate(entries):
                per[lo + offset + 1] = 0.5 * value
    else:
        for start, length in _ring_arcs(g.n, s.ids):
            nodes, diag, off = _gather_arc(cond, deg, start, length, g.n)
            entries = _inverse_diagonal_range(diag, off, 0, length)
            for node, value in zip(nodes, entries):
                per[node] = 0.5 * value
    per = dict(sorted(per.items()))
    return VarianceReport(per_follower=per, total=sum(per.values()))


def total_variance_value(g: GraphSpec, ids: tuple[int, ...]) -> float:
    """Total variance only, for tight solver loops. ``ids`` must be sorted,
    distinct, nonempty, and within 1..n (not re-validated here)."""
    cond, deg = _graph_arrays(g)
    total = 0.0
    if g.topology is Topology.PATH:
        scratch = [0.0] * g.n
        for lo, hi in _path_ranges(g.n, ids):
            total += _trace_of_inverse_range(deg, cond, lo, hi, scratch)
    else:
        scratch = [0.0] * g.n
        for start, length in _ring_arcs(g.n, ids):
            _, diag, off = _gather_arc(cond, deg, start, length, g.n)
            total += _trace_of_inverse_range(diag, off, 0, length, scratch)
    return 0.5 * total
