"""Immutable network description and the per-edge conductivity state.

A network is an undirected connected graph with positive edge lengths and a
balanced source/sink vector.  Conductivities are stored as one nonnegative
value per edge (canonical order), which makes symmetry and the support
structure of the conductivity matrix automatic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    NonpositiveLengthError,
    SelfLoopError,
    UnbalancedSourcesError,
)

#: relative tolerance on global mass balance, scaled by max|S|
BALANCE_RTOL = 1e-12

#: default relative cutoff below which an edge counts as removed
ACTIVE_EDGE_THRESHOLD = 1e-8


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected connected graph with lengths, sources and optional 2D layout.

    Instances are immutable after construction and safe to share between
    threads.  Use :func:`new_network` to build one; the constructor arguments
    here are assumed already validated and canonically ordered.
    """

    vertex_count: int
    edges: tuple  # ((u, v, length), ...) with u < v, sorted by (u, v)
    sources: np.ndarray
    positions: Optional[np.ndarray]
    # derived indexes (built by new_network)
    edge_u: np.ndarray = field(repr=False, default=None)
    edge_v: np.ndarray = field(repr=False, default=None)
    lengths: np.ndarray = field(repr=False, default=None)
    incidence: np.ndarray = field(repr=False, default=None)
    adjacency: tuple = field(repr=False, default=None)
    edge_index: dict = field(repr=False, default=None)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def min_length(self) -> float:
        return float(self.lengths.min()) if self.edge_count else float("inf")

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        if self.vertex_count != other.vertex_count or self.edges != other.edges:
            return False
        if not np.array_equal(self.sources, other.sources):
            return False
        if (self.positions is None) != (other.positions is None):
            return False
        if self.positions is not None and not np.array_equal(
            self.positions, other.positions
        ):
            return False
        return True

    __hash__ = None


@dataclass(frozen=True)
class Conductivities:
    """Nonnegative per-edge conductivity vector in canonical edge order."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("conductivity values must form a 1D vector")
        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise ValueError("conductivities must be finite and nonnegative")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class ModelParams:
    """Transport-energy parameters.

    gamma
        Metabolic exponent (> 0).  The robustness-aware optimizer additionally
        requires ``gamma == 1`` because the augmented functional is unbounded
        from below for ``gamma < 1`` with positive robustness weight.
    nu
        Metabolic coefficient (> 0).
    mu
        Robustness weight on the Fiedler number (>= 0).
    """

    gamma: float
    nu: float
    mu: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.nu > 0:
            raise ValueError("nu must be positive")
        if not self.mu >= 0:
            raise ValueError("mu must be nonnegative")


def connected_components(vertex_count: int, pairs: Iterable) -> list:
    """Connected components of the graph on ``vertex_count`` vertices with the
    given (u, v) edge pairs.  Returns sorted vertex-index arrays, ordered by
    their smallest vertex."""
    parent = list(range(vertex_count))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            if rv < ru:
                ru, rv = rv, ru
            parent[rv] = ru

    groups = {}
    for i in range(vertex_count):
        groups.setdefault(find(i), []).append(i)
    return [np.asarray(groups[r], dtype=int) for r in sorted(groups)]


def new_network(
    vertex_count: int,
    edges: Sequence,
    sources,
    positions=None,
) -> Network:
    """Validate and build a :class:`Network`.

    Parameters
    ----------
    vertex_count : int
        Number of vertices; vertex ids are 0 .. vertex_count-1.
    edges : sequence of (u, v) or (u, v, length)
        Undirected edges.  A missing length defaults to 1.0.  Edges are
        canonicalized to u < v and sorted by (u, v).
    sources : array_like
        Source/sink intensity per vertex; must sum to zero within
        ``BALANCE_RTOL * max|S|``.
    positions : array_like of shape (vertex_count, 2), optional
        Plot-only 2D coordinates; they never influence any computation.

    Raises
    ------
    SelfLoopError, DuplicateEdgeError, NonpositiveLengthError,
    UnbalancedSourcesError, DisconnectedGraphError
    """
    if vertex_count < 1:
        raise ValueError("vertex_count must be positive")

    canonical = []
    for e in edges:
        if len(e) == 2:
            u, v = e
            length = 1.0
        else:
            u, v, length = e
        u, v, length = int(u), int(v), float(length)
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise ValueError(f"edge ({u}, {v}) references a missing vertex")
        if u > v:
            u, v = v, u
        if not length > 0.0:
            raise NonpositiveLengthError(f"edge ({u}, {v}) has length {length}")
        canonical.append((u, v, length))
    canonical.sort()
    for (u1, v1, _), (u2, v2, _) in zip(canonical, canonical[1:]):
        if (u1, v1) == (u2, v2):
            raise DuplicateEdgeError(f"duplicate edge ({u1}, {v1})")

    sources = np.ascontiguousarray(sources, dtype=float)
    if sources.shape != (vertex_count,):
        raise ValueError("sources must have one entry per vertex")
    scale = np.abs(sources).max() if sources.size else 0.0
    if abs(sources.sum()) > BALANCE_RTOL * scale:
        raise UnbalancedSourcesError(
            f"sources sum to {sources.sum()!r}, expected 0"
        )

    if positions is not None:
        positions = np.ascontiguousarray(positions, dtype=float)
        if positions.shape != (vertex_count, 2):
            raise ValueError("positions must have shape (vertex_count, 2)")
        positions.flags.writeable = False

    comps = connected_components(vertex_count, [(u, v) for u, v, _ in canonical])
    if len(comps) != 1:
        raise DisconnectedGraphError(
            f"graph has {len(comps)} connected components"
        )

    edge_u = np.asarray([u for u, _, _ in canonical], dtype=np.intp)
    edge_v = np.asarray([v for _, v, _ in canonical], dtype=np.intp)
    lengths = np.asarray([l for _, _, l in canonical], dtype=float)
    for arr in (edge_u, edge_v, lengths):
        arr.flags.writeable = False
    sources.flags.writeable = False

    m = len(canonical)
    incidence = np.zeros((vertex_count, m))
    incidence[edge_u, np.arange(m)] = 1.0
    incidence[edge_v, np.arange(m)] = -1.0
    incidence.flags.writeable = False

    adjacency = [[] for _ in range(vertex_count)]
    for eid, (u, v, _) in enumerate(canonical):
        adjacency[u].append((v, eid))
        adjacency[v].append((u, eid))
    adjacency = tuple(tuple(a) for a in adjacency)

    edge_index = {(u, v): eid for eid, (u, v, _) in enumerate(canonical)}

    return Network(
        vertex_count=vertex_count,
        edges=tuple(canonical),
        sources=sources,
        positions=positions,
        edge_u=edge_u,
        edge_v=edge_v,
        lengths=lengths,
        incidence=incidence,
        adjacency=adjacency,
        edge_index=edge_index,
    )


def edge_values(net: Network, C) -> np.ndarray:
    """Coerce ``C`` (a :class:`Conductivities` or array_like) to a validated
    per-edge float vector for ``net``."""
    values = C.values if isinstance(C, Conductivities) else np.asarray(C, dtype=float)
    if values.shape != (net.edge_count,):
        raise ValueError(
            f"expected {net.edge_count} conductivities, got shape {values.shape}"
        )
    if np.any(values < 0.0) or not np.all(np.isfinite(values)):
        raise ValueError("conductivities must be finite and nonnegative")
    return values


def min_edge_length(net: Network) -> float:
    """Smallest edge length of the network (strictly positive)."""
    return net.min_length


def active_edges(net: Network, C, threshold: float = ACTIVE_EDGE_THRESHOLD) -> np.ndarray:
    """Edge ids whose conductivity exceeds ``threshold * max(max(C), 1)``.

    The cutoff is relative to the largest conductivity so that a uniform
    rescaling of C does not change which edges count as present, while
    all-small vectors fall back to an absolute cutoff of ``threshold``.
    Returned ids are in ascending order; a larger threshold never yields
    edges the smaller one missed.
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    values = edge_values(net, C)
    cut = threshold * max(values.max(initial=0.0), 1.0)
    return np.flatnonzero(values > cut)


def support_components(net: Network, C) -> list:
    """Connected components of the support graph (edges with C > 0)."""
    values = edge_values(net, C)
    pairs = zip(net.edge_u[values > 0.0].tolist(), net.edge_v[values > 0.0].tolist())
    return connected_components(net.vertex_count, pairs)
