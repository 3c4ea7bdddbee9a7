"""Exact and Monte Carlo Shapley values for MCST cost and saving games.

All results are exact rationals.  The Monte Carlo estimator accumulates
integer marginal contributions, so ``sum(estimates) == v(N)`` holds exactly
for every sample count and seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import numpy as np

from mcst_shapley import _kernels
from mcst_shapley.game import GameKind
from mcst_shapley.graph import RootedWeightedGraph, level_graph, threshold_decompose
from mcst_shapley.mst import cost_profiles, mst_cost

__all__ = [
    "BudgetExceeded",
    "ShapleyVector",
    "EstimateReport",
    "exact_shapley_subsets",
    "exact_shapley_permutations",
    "monte_carlo_shapley",
    "required_samples",
    "cost_estimates_from_saving",
    "SUBSET_BUDGET",
    "PERMUTATION_BUDGET",
]

SUBSET_BUDGET = 24
PERMUTATION_BUDGET = 9
_CHUNK = 4096


class BudgetExceeded(ValueError):
    """The exact oracle would enumerate too many coalitions or orderings."""


@dataclass(frozen=True)
class ShapleyVector:
    values: tuple[Fraction, ...]
    kind: GameKind

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class EstimateReport:
    """Output of :func:`monte_carlo_shapley`.

    ``numerators[i]`` is the summed marginal contribution of player ``i + 1``;
    the estimate is that sum divided by ``sample_count``.  In per-level mode
    ``level_numerators[h]`` holds the same sums for the h-th 0-1 level game.
    """

    numerators: tuple[int, ...]
    sample_count: int
    seed: int
    levels: tuple[int, ...] = ()
    level_numerators: tuple[tuple[int, ...], ...] | None = None

    @property
    def estimates(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.sample_count) for x in self.numerators)

    @property
    def per_level(self) -> tuple[tuple[Fraction, ...], ...] | None:
        if self.level_numerators is None:
            return None
        m = self.sample_count
        return tuple(tuple(Fraction(x, m) for x in row) for row in self.level_numerators)


# --- exact oracles --------------------------------------------------------


def _characteristic(graph: RootedWeightedGraph, kind: GameKind, cost: int, members) -> int:
    if kind is GameKind.COST:
        return cost
    root = graph.rows[0]
    return sum(root[j] for j in members) - cost


def exact_shapley_subsets(graph: RootedWeightedGraph, kind: GameKind = GameKind.SAVING) -> ShapleyVector:
    """Weighted sum of marginal contributions over all coalitions.

    Every ``c(S)`` is recomputed from scratch, independently of the
    incremental tree used by the permutation oracle and the sampler.
    """
    n = graph.n
    if n > SUBSET_BUDGET:
        raise BudgetExceeded(f"n={n} exceeds the subset budget of {SUBSET_BUDGET}")
    value = [0] * (1 << n)
    for mask in range(1, 1 << n):
        members = [j + 1 for j in range(n) if mask >> j & 1]
        value[mask] = _characteristic(graph, kind, mst_cost(graph, members), members)
    fact = [math.factorial(k) for k in range(n + 1)]
    weight = [fact[k] * fact[n - k - 1] for k in range(n)]
    out = []
    for i in range(n):
        bit = 1 << i
        total = 0
        for mask in range(1 << n):
            if not mask & bit:
                total += weight[mask.bit_count()] * (value[mask | bit] - value[mask])
        out.append(Fraction(total, fact[n]))
    return ShapleyVector(tuple(out), kind)


def exact_shapley_permutations(graph: RootedWeightedGraph, kind: GameKind = GameKind.SAVING) -> ShapleyVector:
    """Average marginal contribution over all ``n!`` orderings."""
    n = graph.n
    if n > PERMUTATION_BUDGET:
        raise BudgetExceeded(f"n={n} exceeds the permutation budget of {PERMUTATION_BUDGET}")
    perms = np.array(list(permutations(range(1, n + 1))), dtype=np.int64)
    prof = cost_profiles(graph, perms)
    merg = np.diff(prof, axis=1, prepend=0)
    if kind is GameKind.SAVING:
        merg = graph.matrix[0][perms] - merg
    sums = np.zeros(n, dtype=np.int64)
    np.add.at(sums, perms - 1, merg)
    total = math.factorial(n)
    return ShapleyVector(tuple(Fraction(int(x), total) for x in sums), kind)


# --- Monte Carlo ----------------------------------------------------------


def monte_carlo_shapley(
    graph: RootedWeightedGraph,
    m: int,
    seed: int,
    per_level: bool = False,
    workers: int = 1,
) -> EstimateReport:
    """Estimate the saving-game Shapley value from ``m`` random orderings.

    With ``per_level=True`` each sampled ordering is also replayed on every
    0-1 level graph of the threshold decomposition.  The result depends only
    on ``(graph, m, seed, per_level)``; ``workers`` only changes speed.
    """
    if m < 1:
        raise ValueError("sample count must be positive")
    if workers < 1:
        raise ValueError("workers must be positive")
    seed &= (1 << 64) - 1
    mats = [graph.matrix]
    levels: tuple[int, ...] = ()
    if per_level:
        decomp = threshold_decompose(graph)
        levels = decomp.levels
        mats += [level_graph(decomp, h).matrix for h in range(1, decomp.H + 1)]
    stack = np.ascontiguousarray(np.stack(mats))
    simple = [graph.is_simple()] + [True] * (len(mats) - 1)

    # per-sample marginals are bounded by v(N) <= sum of root weights
    bound = max(1, sum(graph.root_weights()))
    chunk = max(1, min(_CHUNK, (1 << 62) // bound))
    ranges = [(a, min(a + chunk, m)) for a in range(0, m, chunk)]
    useed = np.uint64(seed)

    def run(r):
        return _kernels.accumulate(stack, useed, r[0], r[1])

    if workers == 1 or len(ranges) == 1:
        parts = [run(r) for r in ranges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, ranges))

    n = graph.n
    totals = [[0] * n for _ in mats]
    for sums, lo, hi in parts:
        for g in range(len(mats)):
            if lo[g] < 0 or (simple[g] and hi[g] > n - 1):
                raise AssertionError(
                    f"marginal contribution outside bounds: [{lo[g]}, {hi[g]}] on graph {g}"
                )
            row = totals[g]
            for i, x in enumerate(sums[g].tolist()):
                row[i] += x
    return EstimateReport(
        numerators=tuple(totals[0]),
        sample_count=m,
        seed=seed,
        levels=levels,
        level_numerators=tuple(tuple(r) for r in totals[1:]) if per_level else None,
    )


def required_samples(
    n: int,
    eps: float,
    delta: float,
    h_levels: int = 1,
    scope: str = "single",
    weighted: bool = False,
) -> int:
    """Hoeffding sample count ``ceil(n^2 (n-1)^4 ln(A/delta) / (2 eps^2))``.

    ``A`` is 2 for one player and 2n for all players simultaneously; weighted
    instances with ``h_levels`` distinct positive weights multiply it by H.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if h_levels < 1:
        raise ValueError("h_levels must be at least 1")
    if scope not in ("single", "all"):
        raise ValueError(f"scope must be 'single' or 'all', got {scope!r}")
    if n < 2:
        return 1
    a = 2 * (h_levels if weighted else 1)
    if scope == "all":
        a *= n
    return math.ceil(n * n * (n - 1) ** 4 * math.log(a / delta) / (2 * eps * eps))


def cost_estimates_from_saving(
    graph: RootedWeightedGraph,
    report: EstimateReport | ShapleyVector | Sequence[Fraction],
) -> list[Fraction]:
    """Cost-game values ``w(r,i) - phi_i`` from saving-game values."""
    if isinstance(report, EstimateReport):
        values = report.estimates
    elif isinstance(report, ShapleyVector):
        values = report.values
    else:
        values = tuple(report)
    if len(values) != graph.n:
        raise ValueError(f"expected {graph.n} values, got {len(values)}")
    return [Fraction(w) - Fraction(x) for w, x in zip(graph.root_weights(), values)]
