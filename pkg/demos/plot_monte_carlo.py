"""
Monte Carlo estimates and their error
=====================================

Sample random orderings of the players, replay each one through the
incremental spanning tree, and average the marginal savings.
"""

# %%
import numpy as np

from mcst_shapley import (
    Binary,
    UniformInt,
    eliminate_null_players,
    exact_shapley_subsets,
    monte_carlo_shapley,
    random_instance,
    required_samples,
)

graph = random_instance(8, UniformInt(0, 9), seed=3)
exact = np.array([float(x) for x in exact_shapley_subsets(graph)])
print("exact:", exact.round(4))

# %%
# Error shrinks roughly like 1/sqrt(M).  The estimates always sum to v(N)
# exactly, whatever M is.
for m in (100, 1_000, 10_000, 100_000):
    report = monte_carlo_shapley(graph, m, seed=1)
    est = np.array([float(x) for x in report.estimates])
    print(f"M={m:>7}  max abs error {np.abs(est - exact).max():.4f}  sum={sum(report.estimates)}")

# %%
# Per-level mode replays each sampled ordering on every 0-1 threshold graph.
# The weighted sum of the level estimates is the plain estimate.
report = monte_carlo_shapley(graph, 2_000, seed=1, per_level=True)
for gamma, row in zip(report.levels, report.per_level):
    print(f"level {gamma}: {[round(float(x), 3) for x in row]}")

# %%
# Null players get exactly zero and can be dropped before sampling.
simple = random_instance(8, Binary(0.5), seed=12)
result = eliminate_null_players(simple)
print("removed:", result.removed, "kept:", result.kept)

# %%
# The Hoeffding sample count grows like n^2 (n-1)^4 / eps^2.
for n in (3, 5, 10, 20):
    print(n, required_samples(n, eps=0.1, delta=0.25))
