"""Sample-size experiment: smallest M reaching a target success rate.

For every player count, ``instances_per_n`` random instances with player 1
non-null are drawn.  For M = m_step, 2 m_step, ... each instance gets
``trials`` independent estimates of player 1's saving-game Shapley value.  A
trial succeeds for accuracy eps when its relative error is at most eps.  M is
sufficient for eps once every instance succeeds in at least a ``1 - delta``
fraction of its trials; the first such M is recorded as M_min.  One set of
trials per (instance, M) is scored against every eps on the grid.

Seeds
-----
Every random draw is seeded by ``derive_seed(master_seed, *key)``, i.e. the
first 64-bit word of ``numpy.random.SeedSequence(master_seed,
spawn_key=key)``:

* instance ``k`` for player count ``n``: base seed ``key = (n, k)``; attempt
  ``a`` of the non-null rejection loop uses ``base + a`` (mod 2**64);
* trial ``t`` of sample count ``M`` on that instance: ``key = (n, k, M, t)``.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Iterable

import numpy as np

from mcst_shapley.game import is_null_player
from mcst_shapley.graph import Binary, RootedWeightedGraph, parse_weight_model, random_instance, threshold_decompose
from mcst_shapley.shapley import exact_shapley_subsets, monte_carlo_shapley, required_samples

log = logging.getLogger(__name__)

__all__ = [
    "GenerationCapExceeded",
    "ExperimentConfig",
    "ExperimentResult",
    "derive_seed",
    "generate_nonnull",
    "run_experiment",
    "success_threshold",
    "write_csv",
    "read_mmin_csv",
    "plot_coordinates",
    "format_real",
    "SUCCESS_COLUMNS",
    "MMIN_COLUMNS",
]

MAX_ATTEMPTS = 10**5
SUCCESS_COLUMNS = ("n", "instance_id", "eps", "M", "successes", "trials")
MMIN_COLUMNS = ("n", "eps", "inv_eps_sq", "M_min", "theoretical_M")
CAP = "CAP"


class GenerationCapExceeded(RuntimeError):
    pass


def derive_seed(master_seed: int, *key: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return int(ss.generate_state(1, np.uint64)[0])


def generate_nonnull(
    n: int, model, seed: int, player: int | None = None, max_attempts: int = MAX_ATTEMPTS
) -> tuple[RootedWeightedGraph, int]:
    """Draw instances with seeds ``seed, seed+1, ...`` until ``player`` is non-null.

    Returns the graph and the number of attempts used.  With ``player=None``
    the first draw is returned.
    """
    if player is not None and not 1 <= player <= n:
        raise ValueError(f"player {player} out of range 1..{n}")
    for attempt in range(max_attempts):
        graph = random_instance(n, model, (seed + attempt) % 2**64)
        if player is None or not is_null_player(graph, player):
            return graph, attempt + 1
    raise GenerationCapExceeded(
        f"no instance with player {player} non-null after {max_attempts} attempts"
    )


def _parse_list(value: str, cast):
    value = value.strip()
    if ".." in value and "," not in value:
        lo, hi = value.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(cast(x) for x in value.split(",") if x.strip())


@dataclass(frozen=True)
class ExperimentConfig:
    n_range: tuple[int, ...] = tuple(range(3, 11))
    eps_grid: tuple[float, ...] = (0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1)
    delta: float = 0.25
    trials: int = 20
    m_step: int = 100
    m_cap: int = 10**6
    instances_per_n: int = 3
    weight_model: object = field(default_factory=lambda: Binary(0.5))
    master_seed: int = 0

    def __post_init__(self):
        if not self.n_range or min(self.n_range) < 2:
            raise ValueError("n_range needs player counts of at least 2")
        if not self.eps_grid or any(not 0 < e < 1 for e in self.eps_grid):
            raise ValueError("eps values must lie in (0, 1)")
        if list(self.eps_grid) != sorted(self.eps_grid, reverse=True):
            raise ValueError("eps_grid must be sorted in descending order")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        for name in ("trials", "m_step", "m_cap", "instances_per_n"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        """Parse a flat ``key=value`` file; ``#`` starts a comment line.

        Lists are comma separated; ``n_range`` also accepts ``lo..hi``.
        """
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in known:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            if key == "n_range":
                kwargs[key] = _parse_list(value, int)
            elif key == "eps_grid":
                kwargs[key] = _parse_list(value, float)
            elif key == "delta":
                kwargs[key] = float(value)
            elif key == "weight_model":
                kwargs[key] = parse_weight_model(value)
            else:
                kwargs[key] = int(value)
        return cls(**kwargs)


@dataclass
class ExperimentResult:
    success_rows: list[dict]
    mmin_rows: list[dict]
    anomalies: list[str]


def success_threshold(delta: float, trials: int) -> int:
    """Smallest success count whose rate is at least ``1 - delta``."""
    d = Fraction(str(delta))
    return math.ceil((1 - d) * trials)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    success_rows: list[dict] = []
    mmin_rows: list[dict] = []
    anomalies: list[str] = []
    need = success_threshold(config.delta, config.trials)
    eps_exact = [Fraction(str(e)) for e in config.eps_grid]

    for n in config.n_range:
        graphs = []
        for k in range(config.instances_per_n):
            g, attempts = generate_nonnull(n, config.weight_model, derive_seed(config.master_seed, n, k), 1)
            log.info("n=%d instance %d generated after %d attempts", n, k, attempts)
            graphs.append(g)
        truths = [exact_shapley_subsets(g)[0] for g in graphs]

        m_min: dict[int, int] = {}
        m = config.m_step
        while m <= config.m_cap and len(m_min) < len(eps_exact):
            ok = [True] * len(eps_exact)
            for k, (g, phi) in enumerate(zip(graphs, truths)):
                errors = []
                for t in range(config.trials):
                    rep = monte_carlo_shapley(g, m, derive_seed(config.master_seed, n, k, m, t))
                    errors.append(abs(Fraction(rep.numerators[0], m) - phi) / phi)
                for e_idx, eps in enumerate(eps_exact):
                    successes = sum(err <= eps for err in errors)
                    success_rows.append(
                        {"n": n, "instance_id": k, "eps": config.eps_grid[e_idx], "M": m,
                         "successes": successes, "trials": config.trials}
                    )
                    if successes < need:
                        ok[e_idx] = False
            for e_idx, good in enumerate(ok):
                if good and e_idx not in m_min:
                    m_min[e_idx] = m
            m += config.m_step

        simple = all(g.is_simple() for g in graphs)
        h = max(max(threshold_decompose(g).H for g in graphs), 1)
        for e_idx, eps in enumerate(config.eps_grid):
            theo = required_samples(n, eps, config.delta, h_levels=h, scope="single", weighted=not simple)
            found = m_min.get(e_idx)
            if found is None:
                anomalies.append(f"n={n} eps={eps}: no sufficient M up to {config.m_cap}")
            elif found > theo:
                anomalies.append(f"n={n} eps={eps}: M_min={found} exceeds theoretical {theo}")
            mmin_rows.append(
                {"n": n, "eps": eps, "inv_eps_sq": 1.0 / (eps * eps),
                 "M_min": CAP if found is None else found, "theoretical_M": theo}
            )
    for msg in anomalies:
        log.warning(msg)
    success_rows.sort(key=lambda r: (r["n"], r["instance_id"], r["eps"], r["M"]))
    return ExperimentResult(success_rows, mmin_rows, anomalies)


# --- CSV ------------------------------------------------------------------


def format_real(x: float) -> str:
    return format(x, ".12g")


def _render(value) -> str:
    if isinstance(value, float):
        return format_real(value)
    return str(value)


def write_csv(rows: Iterable[dict], columns, stream=None) -> str:
    """Render rows as CSV (LF endings); also written to ``stream`` if given."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_render(row[c]) for c in columns])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_mmin_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != MMIN_COLUMNS:
        raise ValueError(f"expected columns {MMIN_COLUMNS}, got {reader.fieldnames}")
    rows = []
    for r in reader:
        rows.append({
            "n": int(r["n"]),
            "eps": float(r["eps"]),
            "inv_eps_sq": float(r["inv_eps_sq"]),
            "M_min": r["M_min"] if r["M_min"] == CAP else int(r["M_min"]),
            "theoretical_M": int(r["theoretical_M"]),
        })
    return rows


def plot_coordinates(rows: list[dict], mode: str, n: int | None = None, eps: float | None = None):
    """Plot coordinates from M_min rows.

    ``mode="eps"`` gives ``(inv_eps_sq, M_min)`` for player count ``n``;
    ``mode="players"`` gives ``(n, ln M_min, ln theoretical_M)`` for ``eps``.
    Rows whose search hit the cap are skipped.  Returns ``(columns, rows)``.
    """
    if mode == "eps":
        if n is None:
            raise ValueError("mode 'eps' needs a fixed n")
        picked = [r for r in rows if r["n"] == n]
        if not picked:
            raise ValueError(f"n={n} not present in input")
        cols = ("inv_eps_sq", "M_min")
        out = [{"inv_eps_sq": r["inv_eps_sq"], "M_min": r["M_min"]} for r in picked if r["M_min"] != CAP]
    elif mode == "players":
        if eps is None:
            raise ValueError("mode 'players' needs a fixed eps")
        picked = sorted((r for r in rows if abs(r["eps"] - eps) < 1e-12), key=lambda r: r["n"])
        if not picked:
            raise ValueError(f"eps={eps} not present in input")
        cols = ("n", "ln_M_min", "ln_theoretical_M")
        out = [
            {"n": r["n"], "ln_M_min": math.log(r["M_min"]), "ln_theoretical_M": math.log(r["theoretical_M"])}
            for r in picked
            if r["M_min"] != CAP
        ]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return cols, out
