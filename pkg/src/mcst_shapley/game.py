"""Cost and saving characteristic functions, null and dummy players."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from mcst_shapley.graph import RootedWeightedGraph
from mcst_shapley.mst import mst_cost

__all__ = [
    "GameKind",
    "EliminationResult",
    "cost_value",
    "saving_value",
    "is_null_player",
    "is_non_null_simple",
    "eliminate_null_players",
    "is_dummy_player_cost",
]

# (w(r,i), w(i,j), w(r,j)) triples that make i non-null in a 0-1 game
_NON_NULL_TRIPLES = frozenset({(1, 0, 0), (1, 0, 1), (0, 0, 1)})


class GameKind(enum.Enum):
    COST = "cost"
    SAVING = "saving"


def cost_value(graph: RootedWeightedGraph, s: Iterable[int]) -> int:
    return mst_cost(graph, s)


def saving_value(graph: RootedWeightedGraph, s: Iterable[int]) -> int:
    """``v(S) = sum of w(r,j) over S minus c(S)``."""
    members = frozenset(s)
    root = graph.rows[0]
    return sum(root[j] for j in members) - mst_cost(graph, members)


def _check_player(graph: RootedWeightedGraph, i: int) -> None:
    if not 1 <= i <= graph.n:
        raise ValueError(f"player {i} out of range 1..{graph.n}")


def is_null_player(graph: RootedWeightedGraph, i: int) -> bool:
    """O(n) test: ``w(r,i) <= w(i,j) >= w(r,j)`` for every other player j.

    A single player is vacuously null.
    """
    _check_player(graph, i)
    root = graph.rows[0]
    row = graph.rows[i]
    return all(
        root[i] <= row[j] >= root[j] for j in range(1, graph.n + 1) if j != i
    )


def is_non_null_simple(graph: RootedWeightedGraph, i: int) -> bool:
    """Triple test for 0-1 graphs; agrees with ``not is_null_player``."""
    _check_player(graph, i)
    if not graph.is_simple():
        raise ValueError("graph is not 0-1 weighted")
    root = graph.rows[0]
    row = graph.rows[i]
    return any(
        (root[i], row[j], root[j]) in _NON_NULL_TRIPLES
        for j in range(1, graph.n + 1)
        if j != i
    )


@dataclass(frozen=True)
class EliminationResult:
    reduced: RootedWeightedGraph | None  # None when every player was removed
    kept: tuple[int, ...]
    removed: tuple[int, ...]


def eliminate_null_players(graph: RootedWeightedGraph) -> EliminationResult:
    """Drop null players until none remain.

    The lowest-labelled null player goes first and the scan restarts on the
    reduced graph.  Removing a player only drops constraints from the null
    test, so the surviving set does not depend on this order.
    """
    kept = list(range(1, graph.n + 1))
    removed = []
    current = graph
    while kept:
        for pos in range(len(kept)):
            if is_null_player(current, pos + 1):
                removed.append(kept.pop(pos))
                break
        else:
            break
        current = graph.subgraph(kept) if kept else None
    return EliminationResult(current, tuple(kept), tuple(removed))


def is_dummy_player_cost(graph: RootedWeightedGraph, i: int) -> bool:
    """Dummy in the cost game, i.e. null in the saving game."""
    return is_null_player(graph, i)
