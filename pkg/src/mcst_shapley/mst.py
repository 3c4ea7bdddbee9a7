"""Minimum spanning tree costs of induced subgraphs ``K[S + root]``.

``mst_cost`` runs Kruskal over every pair of the induced subgraph.  ``extend``
adds one player to a known tree; it only has to look at the current tree
edges plus the star around the new player, because no non-tree edge of the
old subgraph can enter the new minimum tree.  That restricted edge set has
``2|S| + 1`` edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from mcst_shapley import _kernels
from mcst_shapley.graph import RootedWeightedGraph

__all__ = [
    "TreeState",
    "mst_cost",
    "mst_edges",
    "new_tree_state",
    "extend",
    "permutation_cost_profile",
    "cost_profiles",
]

Edge = tuple[int, int]


class _DisjointSet:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _kruskal(graph: RootedWeightedGraph, vertices: Sequence[int], edges: Iterable[Edge]):
    # ties broken by the lexicographically smaller (i, j)
    rows = graph.rows
    ordered = sorted(edges, key=lambda e: (rows[e[0]][e[1]], e[0], e[1]))
    dsu = _DisjointSet(vertices)
    need = len(vertices) - 1
    chosen = []
    cost = 0
    for i, j in ordered:
        if dsu.union(i, j):
            chosen.append((i, j))
            cost += rows[i][j]
            if len(chosen) == need:
                break
    return tuple(sorted(chosen)), cost


def _check_members(graph: RootedWeightedGraph, s: Iterable[int]) -> frozenset[int]:
    members = frozenset(s)
    for i in members:
        if not 1 <= i <= graph.n:
            raise ValueError(f"player {i} out of range 1..{graph.n}")
    return members


def mst_edges(graph: RootedWeightedGraph, s: Iterable[int]) -> tuple[tuple[Edge, ...], int]:
    """Edges and cost of a minimum spanning tree of ``K[S + root]``."""
    members = _check_members(graph, s)
    vertices = [0] + sorted(members)
    return _kruskal(graph, vertices, combinations(vertices, 2))


def mst_cost(graph: RootedWeightedGraph, s: Iterable[int]) -> int:
    """``c(S)``; zero for the empty coalition."""
    return mst_edges(graph, s)[1]


@dataclass(frozen=True)
class TreeState:
    """Minimum spanning tree of ``K[members + root]``, built one player at a time."""

    members: frozenset[int]
    tree_edges: tuple[Edge, ...]
    cost: int


def new_tree_state(graph: RootedWeightedGraph) -> TreeState:
    return TreeState(frozenset(), (), 0)


def extend(graph: RootedWeightedGraph, state: TreeState, i: int) -> TreeState:
    """Return the tree state for ``members + {i}``; ``state`` is left untouched."""
    if not 1 <= i <= graph.n:
        raise ValueError(f"player {i} out of range 1..{graph.n}")
    if i in state.members:
        raise ValueError(f"player {i} is already a member")
    members = state.members | {i}
    star = [(min(i, j), max(i, j)) for j in (0, *state.members)]
    edges, cost = _kruskal(graph, [0, *members], [*state.tree_edges, *star])
    return TreeState(members, edges, cost)


def _check_permutation(n: int, perm: Sequence[int]) -> None:
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {list(perm)!r}")


def permutation_cost_profile(graph: RootedWeightedGraph, perm: Sequence[int]) -> list[int]:
    """``[c({p1}), c({p1, p2}), ..., c(N)]`` via repeated ``extend``."""
    _check_permutation(graph.n, perm)
    state = new_tree_state(graph)
    profile = []
    for i in perm:
        state = extend(graph, state, i)
        profile.append(state.cost)
    return profile


def cost_profiles(graph: RootedWeightedGraph, perms) -> np.ndarray:
    """Batch version of :func:`permutation_cost_profile` (compiled kernel).

    ``perms`` is a ``(P, n)`` integer array of permutations; returns a
    ``(P, n)`` int64 array of prefix costs.  Permutations are not validated.
    """
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    if perms.ndim != 2 or perms.shape[1] != graph.n:
        raise ValueError(f"expected an array of shape (P, {graph.n})")
    return _kernels.profiles_batch(graph.matrix, perms)
