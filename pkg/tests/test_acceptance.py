"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest summary.
"""

import statistics
import time
import warnings
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from mcst_shapley import (
    Binary,
    GameKind,
    UniformInt,
    cost_estimates_from_saving,
    cost_profiles,
    exact_shapley_permutations,
    exact_shapley_subsets,
    is_non_null_simple,
    is_null_player,
    level_graph,
    monte_carlo_shapley,
    mst_cost,
    parse_instance,
    random_instance,
    required_samples,
    saving_value,
    threshold_decompose,
)
from mcst_shapley import _kernels
from mcst_shapley.experiment import (
    CAP,
    ExperimentConfig,
    derive_seed,
    generate_nonnull,
    run_experiment,
    success_threshold,
)

from conftest import ACCEPTANCE_LINES, EXAMPLE_TEXT


def record(tag, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
    assert ok, f"{tag}: {detail}"


def mask_costs(g):
    """c(S) for every bitmask S (bit j-1 <=> player j), via full Kruskal."""
    return [
        mst_cost(g, [j + 1 for j in range(g.n) if mask >> j & 1]) for mask in range(1 << g.n)
    ]


def saving_from_costs(g, costs):
    root = g.root_weights()
    return [
        sum(root[j] for j in range(g.n) if mask >> j & 1) - c for mask, c in enumerate(costs)
    ]


@pytest.fixture(scope="module")
def corpus():
    """200 instances per n in 2..7, alternating binary(0.5) and uniform-int(0,9)."""
    out = []
    for n in range(2, 8):
        for k in range(200):
            model = Binary(0.5) if k % 2 == 0 else UniformInt(0, 9)
            g = random_instance(n, model, derive_seed(2024, n, k))
            out.append((g, mask_costs(g)))
    return out


def test_ac1_worked_example():
    g = parse_instance(EXAMPLE_TEXT)
    saving = {o.__name__: o(g, GameKind.SAVING).values for o in (exact_shapley_subsets, exact_shapley_permutations)}
    cost = {o.__name__: o(g, GameKind.COST).values for o in (exact_shapley_subsets, exact_shapley_permutations)}
    ok = all(v == (Fraction(1), Fraction(1)) for v in saving.values())
    ok &= all(v == (Fraction(0), Fraction(3)) for v in cost.values())
    ok &= cost_estimates_from_saving(g, list(saving["exact_shapley_subsets"])) == [0, 3]
    timings = []
    for _ in range(20):
        t = time.perf_counter()
        exact_shapley_subsets(g, GameKind.SAVING)
        exact_shapley_permutations(g, GameKind.SAVING)
        timings.append(time.perf_counter() - t)
    median = statistics.median(timings)
    ok &= median < 1e-3
    record("AC1 worked example", ok, f"saving (1,1), cost (0,3), exact; median {median * 1e3:.3f} ms for both oracles")


def test_ac2_oracle_equivalence(corpus):
    start = time.perf_counter()
    mismatches = 0
    prefix_checks = 0
    for g, costs in corpus:
        for kind in GameKind:
            if exact_shapley_subsets(g, kind).values != exact_shapley_permutations(g, kind).values:
                mismatches += 1
        perms = np.array(list(permutations(range(1, g.n + 1))), dtype=np.int64)
        prof = cost_profiles(g, perms)
        masks = np.cumsum(1 << (perms - 1), axis=1)
        table = np.array(costs, dtype=np.int64)
        if not np.array_equal(prof, table[masks]):
            mismatches += 1
        prefix_checks += prof.size
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 120
    record(
        "AC2 oracle equivalence",
        ok,
        f"{len(corpus)} instances, {prefix_checks} prefix costs, {mismatches} mismatches, {elapsed:.1f}s (< 120s)",
    )


def test_ac3_null_player_theorem(corpus):
    failures = 0
    checked = 0
    lb_checked = 0
    for g, costs in corpus:
        n = g.n
        v = saving_from_costs(g, costs)
        phi = exact_shapley_subsets(g, GameKind.SAVING)
        for i in range(1, n + 1):
            bit = 1 << (i - 1)
            brute_null = all(v[m | bit] == v[m] for m in range(1 << n) if not m & bit)
            cond3 = is_null_player(g, i)
            ok = cond3 == brute_null == (phi[i - 1] == 0)
            if g.is_simple():
                ok &= is_non_null_simple(g, i) == (not cond3)
                if not cond3:
                    lb_checked += 1
                    ok &= phi[i - 1] >= Fraction(1, n * (n - 1))
            failures += not ok
            checked += 1
    record(
        "AC3 null-player theorem",
        failures == 0,
        f"{checked} players checked, {lb_checked} lower bounds on 0-1 instances, {failures} failures",
    )


def test_ac4_decomposition_identities():
    failures = 0
    for k in range(200):
        n = 2 + k % 6
        g = random_instance(n, UniformInt(0, 9), derive_seed(77, n, k))
        d = threshold_decompose(g)
        levels = [level_graph(d, h) for h in range(1, d.H + 1)]
        inc = d.increments()
        costs = mask_costs(g)
        level_costs = [mask_costs(lg) for lg in levels]
        for mask in range(1 << n):
            if costs[mask] != sum(a * lc[mask] for a, lc in zip(inc, level_costs)):
                failures += 1
        for kind in GameKind:
            total = [Fraction(0)] * n
            for a, lg in zip(inc, levels):
                for i, x in enumerate(exact_shapley_subsets(lg, kind)):
                    total[i] += a * x
            if tuple(total) != exact_shapley_subsets(g, kind).values:
                failures += 1
    record("AC4 decomposition identities", failures == 0, f"200 uniform-int(0,9) instances, {failures} failures")


def test_ac5_estimator_identities():
    failures = []
    rng = np.random.default_rng(5)
    for t in range(50):
        n = int(rng.integers(2, 9))
        model = Binary(0.5) if t % 2 == 0 else UniformInt(0, 9)
        g = random_instance(n, model, 3000 + t)
        m = int(rng.integers(1, 20_000))
        seed = int(rng.integers(0, 2**63))
        plain = monte_carlo_shapley(g, m, seed)
        if sum(plain.estimates) != saving_value(g, range(1, n + 1)):
            failures.append(f"efficiency t={t}")
        layered = monte_carlo_shapley(g, m, seed, per_level=True)
        if layered.numerators != plain.numerators:
            failures.append(f"per-level t={t}")
        if g.is_simple():
            _, lo, hi = _kernels.accumulate(np.stack([g.matrix]), np.uint64(seed), 0, m)
            if lo[0] < 0 or hi[0] > n - 1:
                failures.append(f"marginal bound t={t}")
        for workers in (4, 8):
            if monte_carlo_shapley(g, m, seed, per_level=True, workers=workers) != layered:
                failures.append(f"workers={workers} t={t}")
    record("AC5 estimator identities", not failures, f"50 triples, failures: {failures or 'none'}")


def test_ac6_fpras_guarantee():
    eps, delta, runs = 0.5, 0.25, 100
    m = required_samples(5, eps, delta, scope="single")
    rates = []
    for k in range(3):
        g, _ = generate_nonnull(5, Binary(0.5), derive_seed(606, k), player=1)
        phi = exact_shapley_subsets(g)[0]
        hits = 0
        for r in range(runs):
            est = monte_carlo_shapley(g, m, derive_seed(607, k, r)).estimates[0]
            hits += abs(est - phi) <= Fraction(1, 2) * phi
        rates.append(hits / runs)
    ok = m == 26617 and all(rate >= 1 - delta for rate in rates)
    record("AC6 FPRAS at n=5, eps=0.5", ok, f"M={m}, success rates per instance {rates} (need >= 0.75)")


def test_ac7_unbiasedness():
    g = random_instance(5, UniformInt(0, 9), 4242)
    exact = [float(x) for x in exact_shapley_subsets(g)]
    runs = np.array([[float(x) for x in monte_carlo_shapley(g, 200, s).estimates] for s in range(500)])
    mean = runs.mean(axis=0)
    se = runs.std(axis=0, ddof=1) / np.sqrt(len(runs))
    z = [abs(mu - e) / s if s > 0 else (0.0 if mu == e else np.inf) for mu, e, s in zip(mean, exact, se)]
    ok = all(x <= 4 for x in z)
    record("AC7 unbiasedness", ok, f"|mean - exact| / SE per player = {[round(float(x), 2) for x in z]} (limit 4)")


def test_ac8_protocol_reproduction():
    cfg = ExperimentConfig(n_range=(3, 4, 5))
    start = time.perf_counter()
    result = run_experiment(cfg)
    elapsed = time.perf_counter() - start
    need = success_threshold(cfg.delta, cfg.trials)
    problems = []
    cells = {}
    for r in result.success_rows:
        cells[(r["n"], r["eps"], r["instance_id"], r["M"])] = r["successes"]
    by_n = {}
    for row in result.mmin_rows:
        n, eps, m = row["n"], row["eps"], row["M_min"]
        if m == CAP:
            problems.append(f"n={n} eps={eps} hit cap")
            continue
        by_n.setdefault(n, []).append(m)
        if not all(cells[(n, eps, k, m)] >= need for k in range(cfg.instances_per_n)):
            problems.append(f"n={n} eps={eps} criterion fails at M_min")
        if m > cfg.m_step and all(cells[(n, eps, k, m - cfg.m_step)] >= need for k in range(cfg.instances_per_n)):
            problems.append(f"n={n} eps={eps} criterion already met at M_min-100")
        if row["theoretical_M"] < m:
            problems.append(f"n={n} eps={eps} theoretical {row['theoretical_M']} < {m}")
    for n, ms in by_n.items():
        if ms != sorted(ms):
            problems.append(f"n={n} M_min not monotone along the eps grid")
    ok = not problems and len(result.mmin_rows) == 27 and elapsed < 1800
    summary = "; ".join(f"n={n}: {ms}" for n, ms in by_n.items())
    record("AC8 protocol reproduction", ok, f"{elapsed:.1f}s, M_min {summary}; problems: {problems or 'none'}")


def test_ac9_scaling():
    per_sample = {}
    for n, m in ((64, 100), (128, 40), (256, 12)):
        g = random_instance(n, UniformInt(0, 10**6), n)
        monte_carlo_shapley(g, 1, 0)
        times = []
        for rep in range(7):
            t = time.perf_counter()
            monte_carlo_shapley(g, m, rep)
            times.append((time.perf_counter() - t) / m)
        per_sample[n] = statistics.median(times)
    ratios = [per_sample[128] / per_sample[64], per_sample[256] / per_sample[128]]
    ok = all(r <= 5.5 for r in ratios)
    detail = (
        f"median per-permutation {', '.join(f'n={n}: {t * 1e3:.3f} ms' for n, t in per_sample.items())}; "
        f"ratios per doubling {[round(r, 2) for r in ratios]} (limit 5.5)"
    )
    if not ok:
        # timing depends on the host; reported, not fatal
        warnings.warn(f"scaling above the expected n^2 log n growth: {detail}")
        ACCEPTANCE_LINES.append(f"[WARN] AC9 scaling: {detail}")
        return
    record("AC9 scaling", ok, detail)
