"""Bipartite preference graphs between agents and candidate bundles.

Agents sit on the left, bundles on the right, and an edge records that the
agent values the bundle at or above her threshold.  On top of a maximum
matching, :func:`compute_x_plus` extracts the canonical Hall violator: the
set of left vertices reachable from the unmatched ones along alternating
paths.  It is empty exactly when the matching covers the left side, and
otherwise it has more members than neighbors, while the rest of the matching
pairs the remaining agents with bundles outside that neighborhood.

Everything is deterministic: neighbors are kept sorted and searches run in
ascending index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .core import InputError

Threshold = Union[int, Fraction]


@dataclass(frozen=True)
class PreferenceGraph:
    """Bipartite graph with ``n_left`` agents, ``n_right`` bundles, and
    ``adj[i]`` the ascending bundle indices agent i accepts."""

    n_left: int
    n_right: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n_left < 0 or self.n_right < 0:
            raise InputError("graph side sizes must be non-negative")
        if len(self.adj) != self.n_left:
            raise InputError(
                f"adjacency has {len(self.adj)} rows for {self.n_left} left vertices"
            )
        for i, nbrs in enumerate(self.adj):
            prev = -1
            for v in nbrs:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise InputError(f"neighbor {v!r} of {i} is not an integer")
                if not 0 <= v < self.n_right:
                    raise InputError(f"neighbor {v} of {i} is out of range")
                if v <= prev:
                    raise InputError(
                        f"neighbors of {i} must be strictly ascending"
                    )
                prev = v


def build_preference_graph(
    rows: Sequence[Sequence[int]],
    bundles: Sequence[Iterable[int]],
    thresholds: Sequence[Threshold],
) -> PreferenceGraph:
    """Edge (i, j) whenever agent i values bundle j at least thresholds[i].

    ``rows`` are full valuation rows; bundles hold good positions into them.
    Comparisons are exact, so thresholds may be Fractions.
    """
    if len(thresholds) != len(rows):
        raise InputError(
            f"{len(thresholds)} thresholds for {len(rows)} agents"
        )
    bundle_lists = [sorted(b) for b in bundles]
    adj = []
    for i, row in enumerate(rows):
        nbrs = []
        for j, bundle in enumerate(bundle_lists):
            value = 0
            for g in bundle:
                if not 0 <= g < len(row):
                    raise InputError(
                        f"bundle {j} refers to good {g} outside agent {i}'s row"
                    )
                value += row[g]
            if value >= thresholds[i]:
                nbrs.append(j)
        adj.append(tuple(nbrs))
    return PreferenceGraph(
        n_left=len(rows), n_right=len(bundle_lists), adj=tuple(adj)
    )


def _augment(
    graph: PreferenceGraph, u: int, match_right: list[int], visited: set[int]
) -> bool:
    for v in graph.adj[u]:
        if v in visited:
            continue
        visited.add(v)
        if match_right[v] == -1 or _augment(
            graph, match_right[v], match_right, visited
        ):
            match_right[v] = u
            return True
    return False


def maximum_matching(graph: PreferenceGraph) -> tuple[tuple[int, int], ...]:
    """A maximum matching as sorted (left, right) pairs, via augmenting paths
    tried from each left vertex in ascending order."""
    match_right = [-1] * graph.n_right
    for u in range(graph.n_left):
        _augment(graph, u, match_right, set())
    return tuple(
        sorted((u, v) for v, u in enumerate(match_right) if u != -1)
    )


@dataclass(frozen=True)
class XPlusDecomposition:
    """The Hall-violator side of a maximum matching.

    ``x_plus`` holds the left vertices reachable from unmatched left vertices
    along alternating paths (free edge right, matched edge left), ``gamma``
    their joint neighborhood, and ``restricted_matching`` the matched pairs
    whose left vertex lies outside ``x_plus``.
    """

    x_plus: tuple[int, ...]
    gamma: tuple[int, ...]
    restricted_matching: tuple[tuple[int, int], ...]


def compute_x_plus(
    graph: PreferenceGraph, matching: Sequence[tuple[int, int]]
) -> XPlusDecomposition:
    """Decompose the left side around a maximum matching.

    Raises InputError if ``matching`` is not a matching of graph edges or is
    not maximum.
    """
    match_left = [-1] * graph.n_left
    match_right = [-1] * graph.n_right
    for u, v in matching:
        if not (0 <= u < graph.n_left and 0 <= v < graph.n_right):
            raise InputError(f"pair ({u}, {v}) is out of range")
        if v not in graph.adj[u]:
            raise InputError(f"pair ({u}, {v}) is not an edge")
        if match_left[u] != -1 or match_right[v] != -1:
            raise InputError(f"pair ({u}, {v}) reuses a matched vertex")
        match_left[u] = v
        match_right[v] = u

    for u in range(graph.n_left):
        if match_left[u] == -1 and _augment(
            graph, u, list(match_right), set()
        ):
            raise InputError("matching is not maximum: an augmenting path exists")

    reached = [False] * graph.n_left
    queue = [u for u in range(graph.n_left) if match_left[u] == -1]
    for u in queue:
        reached[u] = True
    while queue:
        u = queue.pop(0)
        for v in graph.adj[u]:
            w = match_right[v]
            # v cannot be unmatched here, or the path would augment.
            if w != -1 and not reached[w]:
                reached[w] = True
                queue.append(w)

    x_plus = tuple(u for u in range(graph.n_left) if reached[u])
    gamma = tuple(sorted({v for u in x_plus for v in graph.adj[u]}))
    restricted = tuple(
        (u, match_left[u])
        for u in range(graph.n_left)
        if not reached[u] and match_left[u] != -1
    )

    if x_plus:
        assert len(x_plus) > len(gamma)
    gamma_set = set(gamma)
    for u in range(graph.n_left):
        if not reached[u]:
            assert match_left[u] != -1
            assert match_left[u] not in gamma_set
    return XPlusDecomposition(
        x_plus=x_plus, gamma=gamma, restricted_matching=restricted
    )
