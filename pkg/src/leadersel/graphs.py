"""Weighted path and ring graph instances and their Laplacians.

A graph instance is a topology (path or ring), a node count ``n`` with nodes
numbered 1..n (in path order, or clockwise around the ring), and one strictly
positive noise variance per edge. Edge ``i`` of a path connects nodes
``(i, i+1)``; edge ``i`` of a ring connects ``(i, i mod n + 1)``, so the last
ring edge closes the cycle back to node 1.

The weighted Laplacian uses conductances ``1/variance``: off-diagonal entries
are ``-1/v_e`` for edges and each diagonal entry is the sum of its incident
conductances. Paths give a tridiagonal matrix; rings add a single symmetric
corner pair.
"""

from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Topology",
    "GraphSpec",
    "Laplacian",
    "build_graph",
    "random_variances",
    "laplacian",
    "load_graph",
    "save_graph",
    "graph_to_json_dict",
    "graph_from_json_dict",
]

MIN_VARIANCE = 1e-12


class Topology(str, enum.Enum):
    PATH = "path"
    RING = "ring"

    @classmethod
    def parse(cls, value: "Topology | str") -> "Topology":
        if isinstance(value, Topology):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown topology {value!r}; expected 'path' or 'ring'") from None


@dataclass(frozen=True)
class GraphSpec:
    """A validated path or ring instance; immutable after construction."""

    topology: Topology
    n: int
    variances: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "topology", Topology.parse(self.topology))
        if not isinstance(self.n, int):
            raise ValueError(f"node count must be an integer, got {self.n!r}")
        minimum = 2 if self.topology is Topology.PATH else 3
        if self.n < minimum:
            raise ValueError(f"{self.topology.value} graphs need at least {minimum} nodes, got {self.n}")
        object.__setattr__(self, "variances", tuple(float(v) for v in self.variances))
        if len(self.variances) != self.edge_count:
            raise ValueError(
                f"{self.topology.value} graph on {self.n} nodes needs "
                f"{self.edge_count} edge variances, got {len(self.variances)}"
            )
        for i, v in enumerate(self.variances):
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"edge variance {i + 1} must be positive and finite, got {v!r}")

    @property
    def edge_count(self) -> int:
        return self.n - 1 if self.topology is Topology.PATH else self.n

    def nodes(self) -> range:
        return range(1, self.n + 1)


@dataclass(frozen=True)
class Laplacian:
    """Weighted Laplacian in banded form.

    ``diag[i]`` is the degree of node ``i+1``; ``off[i]`` is the entry
    coupling nodes ``i+1`` and ``i+2`` (always negative); ``corner`` is the
    (1, n) entry, zero for paths. Arrays are frozen read-only.
    """

    diag: np.ndarray
    off: np.ndarray
    corner: float

    def __post_init__(self) -> None:
        self.diag.flags.writeable = False
        self.off.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag).astype(float)
        idx = np.arange(self.n - 1)
        a[idx, idx + 1] = self.off
        a[idx + 1, idx] = self.off
        if self.corner != 0.0:
            a[0, self.n - 1] = self.corner
            a[self.n - 1, 0] = self.corner
        return a


def build_graph(topology: Topology | str, n: int, variances) -> GraphSpec:
    """Validate and construct a graph instance.

    Rejects node counts below the topology minimum (2 for paths, 3 for
    rings), variance lists of the wrong length, and any variance that is not
    strictly positive and finite.
    """
    return GraphSpec(Topology.parse(topology), n, tuple(variances))


def random_variances(count: int, seed: int) -> list[float]:
    """Draw ``count`` edge variances uniformly from the open interval (0, 1).

    Deterministic for a fixed seed. Draws below 1e-12 are resampled so the
    reciprocal conductances stay finite and well conditioned.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    values = rng.random(count)
    while True:
        bad = values < MIN_VARIANCE
        if not bad.any():
            break
        values[bad] = rng.random(int(bad.sum()))
    return [float(v) for v in values]


def laplacian(g: GraphSpec) -> Laplacian:
    """Weighted Laplacian of ``g``: rows sum to zero, diagonal positive."""
    cond = np.array([1.0 / v for v in g.variances])
    diag = np.zeros(g.n)
    if g.topology is Topology.PATH:
        off = -cond
        diag[:-1] += cond
        diag[1:] += cond
        corner = 0.0
    else:
        off = -cond[: g.n - 1]
        diag += cond
        diag += np.roll(cond, 1)
        corner = -float(cond[g.n - 1])
    return Laplacian(diag=diag, off=off, corner=corner)


def conductances(g: GraphSpec) -> tuple[float, ...]:
    """Per-edge conductances ``1/variance`` in edge order."""
    return tuple(1.0 / v for v in g.variances)


def degrees(g: GraphSpec) -> tuple[float, ...]:
    """Laplacian diagonal (sum of incident conductances) per node, 0-indexed."""
    cond = conductances(g)
    deg = [0.0] * g.n
    for e, c in enumerate(cond):
        deg[e] += c
        deg[(e + 1) % g.n] += c
    return tuple(deg)


# --- JSON persistence -------------------------------------------------------
#
# {"topology": "path"|"ring", "n": int, "variances": [..]} is the on-disk
# format shared by every CLI command. The reader rejects unknown keys.

_GRAPH_KEYS = {"topology", "n", "variances"}


def graph_to_json_dict(g: GraphSpec) -> dict:
    return {"topology": g.topology.value, "n": g.n, "variances": list(g.variances)}


def graph_from_json_dict(data: dict) -> GraphSpec:
    if not isinstance(data, dict):
        raise ValueError("graph JSON must be an object")
    unknown = set(data) - _GRAPH_KEYS
    if unknown:
        raise ValueError(f"unknown graph keys: {sorted(unknown)}")
    missing = _GRAPH_KEYS - set(data)
    if missing:
        raise ValueError(f"missing graph keys: {sorted(missing)}")
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ValueError(f"graph key 'n' must be an integer, got {n!r}")
    variances = data["variances"]
    if not isinstance(variances, list):
        raise ValueError("graph key 'variances' must be a list")
    return build_graph(data["topology"], n, variances)


def save_graph(g: GraphSpec, path: str | os.PathLike) -> None:
    """Write ``g`` as one-line JSON. Byte-identical for identical inputs."""
    text = json.dumps(graph_to_json_dict(g), separators=(", ", ": "))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def load_graph(path: str | os.PathLike) -> GraphSpec:
    """Read and validate a graph JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return graph_from_json_dict(data)
