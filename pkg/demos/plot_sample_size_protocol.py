"""
How many samples are enough in practice?
========================================

Search for the smallest sample count M at which 75% of repeated estimates of
player 1's value land within relative error eps, on every test instance at
once, and set it against the worst-case Hoeffding count.
"""

# %%
import sys

from mcst_shapley.experiment import (
    MMIN_COLUMNS,
    ExperimentConfig,
    plot_coordinates,
    run_experiment,
    write_csv,
)

config = ExperimentConfig(n_range=(3, 4, 5, 6), master_seed=1)
result = run_experiment(config)
write_csv(result.mmin_rows, MMIN_COLUMNS, sys.stdout)

# %%
# M against 1/eps^2 for three players: the empirical counts sit far below
# the bound, which is what a worst-case bound should do.
cols, coords = plot_coordinates(result.mmin_rows, "eps", n=3)
write_csv(coords, cols, sys.stdout)

# %%
# Growth in n at eps = 0.1, on a log scale.
cols, coords = plot_coordinates(result.mmin_rows, "players", eps=0.1)
write_csv(coords, cols, sys.stdout)
print("anomalies:", result.anomalies or "none")
