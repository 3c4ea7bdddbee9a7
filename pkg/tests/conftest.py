from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

import numpy as np
import pytest
from scipy.sparse.csgraph import minimum_spanning_tree

from mcst_shapley import Binary, RootedWeightedGraph, UniformInt, parse_instance, random_instance

EXAMPLE_TEXT = "n 2\ne 0 1 1\ne 0 2 4\ne 1 2 2\n"


@pytest.fixture
def example():
    """Three-vertex graph with w(r,1)=1, w(1,2)=2, w(r,2)=4."""
    return parse_instance(EXAMPLE_TEXT)


def graph_from_triples(n, triples):
    return RootedWeightedGraph.from_edges(n, {(i, j): w for i, j, w in triples})


# --- independent oracles --------------------------------------------------


def scipy_mst_cost(graph, members):
    """MST cost via scipy; weights shifted by +1 because scipy drops zero entries."""
    idx = [0] + sorted(members)
    if len(idx) == 1:
        return 0
    sub = graph.matrix[np.ix_(idx, idx)] + 1
    np.fill_diagonal(sub, 0)
    tree = minimum_spanning_tree(sub)
    return int(round(tree.sum())) - (len(idx) - 1)


def cost_table(graph):
    """c(S) for every coalition, keyed by frozenset."""
    players = range(1, graph.n + 1)
    return {
        frozenset(s): scipy_mst_cost(graph, s)
        for k in range(graph.n + 1)
        for s in combinations(players, k)
    }


def saving_table(graph, costs=None):
    costs = costs or cost_table(graph)
    root = graph.root_weights()
    return {s: sum(root[j - 1] for j in s) - c for s, c in costs.items()}


def brute_shapley(n, value):
    """Plain average of marginals over all orderings, from a value table."""
    sums = [0] * n
    for perm in permutations(range(1, n + 1)):
        prefix = frozenset()
        for i in perm:
            sums[i - 1] += value[prefix | {i}] - value[prefix]
            prefix = prefix | {i}
    return [Fraction(s, factorial(n)) for s in sums]


def brute_is_null(n, value, i):
    others = [j for j in range(1, n + 1) if j != i]
    return all(
        value[frozenset(s) | {i}] == value[frozenset(s)]
        for k in range(len(others) + 1)
        for s in combinations(others, k)
    )


def corpus(ns, per_n, seed=0):
    """Mixed binary(0.5) / uniform-int(0,9) instances, alternating."""
    out = []
    for n in ns:
        for k in range(per_n):
            model = Binary(0.5) if k % 2 == 0 else UniformInt(0, 9)
            out.append(random_instance(n, model, seed * 1_000_003 + n * 10_007 + k))
    return out


# --- acceptance report ----------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
