"""
Cost game versus saving game on a three-vertex graph
====================================================

Two players share a root.  Player 1 is cheap to connect (weight 1), player 2
is expensive (weight 4), and the edge between them costs 2.
"""

# %%
from mcst_shapley import (
    GameKind,
    cost_estimates_from_saving,
    exact_shapley_subsets,
    is_null_player,
    mst_cost,
    parse_instance,
    saving_value,
)

graph = parse_instance("""\
n 2
e 0 1 1
e 0 2 4
e 1 2 2
""")

# %%
# Coalition costs: player 2 is cheaper to connect through player 1.
for s in [(), (1,), (2,), (1, 2)]:
    print(f"c{set(s) or '{}'} = {mst_cost(graph, s)}   v = {saving_value(graph, s)}")

# %%
# Exact Shapley values, as rationals.  Player 1 gets nothing in the cost
# game even though it is not a dummy there.
cost = exact_shapley_subsets(graph, GameKind.COST)
saving = exact_shapley_subsets(graph, GameKind.SAVING)
print("cost game:  ", [str(x) for x in cost])
print("saving game:", [str(x) for x in saving])

# %%
# The two are tied together player by player: cost share = w(r,i) - saving share.
print(cost_estimates_from_saving(graph, saving) == list(cost.values))
print("null players:", [i for i in (1, 2) if is_null_player(graph, i)])
