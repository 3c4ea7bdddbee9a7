"""Rooted weighted complete graphs, instance files and threshold decomposition.

Vertex 0 is the root; players are labelled 1..n.  Weights are non-negative
integers below 2**32 so that every cost and saving value is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "MAX_WEIGHT",
    "InstanceParseError",
    "RootedWeightedGraph",
    "Binary",
    "UniformInt",
    "parse_weight_model",
    "parse_instance",
    "serialize_instance",
    "random_instance",
    "ThresholdDecomposition",
    "threshold_decompose",
    "level_graph",
]

MAX_WEIGHT = 2**32  # exclusive


class InstanceParseError(ValueError):
    """Raised for malformed instance files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RootedWeightedGraph:
    """Complete graph on ``{0, 1, ..., n}`` with symmetric integer weights.

    Instances are immutable.  ``matrix`` is a read-only ``(n+1, n+1)`` int64
    array with a zero diagonal; ``rows`` holds the same data as Python ints
    for the pure-Python code paths.
    """

    __slots__ = ("n", "matrix", "rows")

    def __init__(self, matrix):
        w = np.array(matrix, dtype=np.int64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 2:
            raise ValueError("weight matrix must be square with at least 2 vertices")
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diag(w) != 0):
            raise ValueError("self-loops are not allowed")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        if np.any(w >= MAX_WEIGHT):
            raise ValueError("weights must be below 2**32")
        w.setflags(write=False)
        object.__setattr__(self, "n", w.shape[0] - 1)
        object.__setattr__(self, "matrix", w)
        object.__setattr__(self, "rows", tuple(map(tuple, w.tolist())))

    def __setattr__(self, name, value):
        raise AttributeError("RootedWeightedGraph is immutable")

    @classmethod
    def from_edges(cls, n: int, weights: Mapping[tuple[int, int], int]) -> "RootedWeightedGraph":
        """Build from a ``{(i, j): w}`` mapping that must cover every pair."""
        if n < 1:
            raise ValueError("n must be at least 1")
        w = np.zeros((n + 1, n + 1), dtype=np.int64)
        seen = set()
        for (i, j), x in weights.items():
            a, b = min(i, j), max(i, j)
            if a == b or a < 0 or b > n:
                raise ValueError(f"invalid pair ({i}, {j})")
            if (a, b) in seen:
                raise ValueError(f"duplicate pair ({a}, {b})")
            seen.add((a, b))
            w[a, b] = w[b, a] = x
        if len(seen) != n * (n + 1) // 2:
            raise ValueError("incomplete graph")
        return cls(w)

    def weight(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def root_weights(self) -> tuple[int, ...]:
        """``(w(r,1), ..., w(r,n))``."""
        return self.rows[0][1:]

    def pairs(self) -> Iterable[tuple[int, int]]:
        """All vertex pairs ``(i, j)`` with ``i < j`` in lexicographic order."""
        return combinations(range(self.n + 1), 2)

    def is_simple(self) -> bool:
        """True when every weight is 0 or 1."""
        return bool(np.all(self.matrix <= 1))

    def subgraph(self, players: Iterable[int]) -> "RootedWeightedGraph":
        """Induced graph on the root plus ``players``, relabelled 1..k in order."""
        idx = [0] + list(players)
        return RootedWeightedGraph(self.matrix[np.ix_(idx, idx)])

    def __eq__(self, other):
        if not isinstance(other, RootedWeightedGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.n, self.matrix.tobytes()))

    def __repr__(self):
        return f"RootedWeightedGraph(n={self.n})"


# --- instance files -------------------------------------------------------


def parse_instance(text: str) -> RootedWeightedGraph:
    n = None
    weights: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise InstanceParseError("expected header 'n <players>'", lineno)
            n = _parse_uint(parts[1], lineno)
            if n < 1:
                raise InstanceParseError("player count must be at least 1", lineno)
            continue
        if len(parts) != 4 or parts[0] != "e":
            raise InstanceParseError("expected 'e <i> <j> <weight>'", lineno)
        i, j, x = (_parse_uint(p, lineno) for p in parts[1:])
        if not 0 <= i < j <= n:
            raise InstanceParseError(f"vertex labels out of range: {i} {j}", lineno)
        if x >= MAX_WEIGHT:
            raise InstanceParseError("weight must be below 2**32", lineno)
        if (i, j) in weights:
            raise InstanceParseError(f"duplicate pair {i} {j}", lineno)
        weights[(i, j)] = x
    if n is None:
        raise InstanceParseError("missing header")
    if len(weights) != n * (n + 1) // 2:
        raise InstanceParseError("incomplete graph", len(text.splitlines()))
    return RootedWeightedGraph.from_edges(n, weights)


def _parse_uint(token: str, lineno: int) -> int:
    if token.startswith("-"):
        raise InstanceParseError(f"negative value {token!r}", lineno)
    if not token.isdigit():
        raise InstanceParseError(f"not an unsigned integer: {token!r}", lineno)
    return int(token)


def serialize_instance(graph: RootedWeightedGraph) -> str:
    lines = [f"n {graph.n}"]
    lines += [f"e {i} {j} {graph.weight(i, j)}" for i, j in graph.pairs()]
    return "\n".join(lines) + "\n"


# --- random instances -----------------------------------------------------


@dataclass(frozen=True)
class Binary:
    """Each weight is 1 with probability ``p``, else 0."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError("binary model needs 0 < p < 1")

    def __str__(self):
        return f"binary({self.p!r})"


@dataclass(frozen=True)
class UniformInt:
    """Weights uniform on the integers ``low..high`` inclusive."""

    low: int
    high: int

    def __post_init__(self):
        if not 0 <= self.low <= self.high < MAX_WEIGHT:
            raise ValueError("uniform-int model needs 0 <= low <= high < 2**32")

    def __str__(self):
        return f"uniform-int({self.low},{self.high})"


WeightModel = Binary | UniformInt


def parse_weight_model(spec: str) -> WeightModel:
    """Parse ``binary(p)`` or ``uniform-int(L,U)``."""
    s = spec.strip().replace(" ", "")
    try:
        name, args = s.rstrip(")").split("(", 1)
        if name == "binary":
            return Binary(float(args))
        if name == "uniform-int":
            low, high = args.split(",")
            return UniformInt(int(low), int(high))
    except ValueError as exc:
        raise ValueError(f"invalid weight model {spec!r}: {exc}") from None
    raise ValueError(f"unknown weight model {spec!r}")


def random_instance(n: int, model: WeightModel, seed: int) -> RootedWeightedGraph:
    """Draw one weight per pair, pairs taken in lexicographic order.

    The stream is a PCG64 generator seeded with ``seed`` so the result is a
    pure function of ``(n, model, seed)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed % 2**64))
    count = n * (n + 1) // 2
    if isinstance(model, Binary):
        draws = (rng.random(count) < model.p).astype(np.int64)
    elif isinstance(model, UniformInt):
        draws = rng.integers(model.low, model.high, size=count, endpoint=True, dtype=np.int64)
    else:
        raise TypeError(f"unsupported weight model {model!r}")
    w = np.zeros((n + 1, n + 1), dtype=np.int64)
    iu = np.triu_indices(n + 1, k=1)  # row-major, i.e. lexicographic
    w[iu] = draws
    return RootedWeightedGraph(w + w.T)


# --- threshold decomposition ----------------------------------------------


@dataclass(frozen=True)
class ThresholdDecomposition:
    levels: tuple[int, ...]
    source: RootedWeightedGraph

    @property
    def H(self) -> int:
        return len(self.levels)

    def increments(self) -> tuple[int, ...]:
        """``gamma_h - gamma_{h-1}`` for h = 1..H, with gamma_0 = 0."""
        prev = (0,) + self.levels[:-1]
        return tuple(g - p for g, p in zip(self.levels, prev))


def threshold_decompose(graph: RootedWeightedGraph) -> ThresholdDecomposition:
    upper = graph.matrix[np.triu_indices(graph.n + 1, k=1)]
    levels = tuple(int(x) for x in np.unique(upper[upper > 0]))
    return ThresholdDecomposition(levels, graph)


def level_graph(decomp: ThresholdDecomposition, h: int) -> RootedWeightedGraph:
    """0-1 graph marking the edges whose weight reaches the h-th level (1-based)."""
    if not 1 <= h <= decomp.H:
        raise IndexError(f"level {h} out of range 1..{decomp.H}")
    w = (decomp.source.matrix >= decomp.levels[h - 1]).astype(np.int64)
    np.fill_diagonal(w, 0)
    return RootedWeightedGraph(w)
