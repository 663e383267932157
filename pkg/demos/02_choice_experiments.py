"""
Binary-menu experiments and choice data
=======================================
"""

from prefid import (
    choices_from_csv,
    choices_to_csv,
    dense_subset,
    enumerate_pairs,
    from_utility,
    generate_choices,
    make_grid_euclidean,
    restrict,
)

grid = make_grid_euclidean(2, 4, (0.0, 1.0))
B = dense_subset(grid)

# the diagonal schedule front-loads pairs among early alternatives, so
# small prefixes are informative about a small region
e = enumerate_pairs(B)
print(f"{len(e)} pairs; first five: {e.pairs[:5]}")

# a shuffled schedule is a seeded permutation of the same pairs
e_shuf = enumerate_pairs(B, schedule="shuffled", seed=7)
print(f"shuffled first five: {e_shuf.pairs[:5]}")

# strong observability records the whole optimal set of each menu
gen = from_utility(grid, grid.points.sum(axis=1))
c_strong = generate_choices(gen, e, mode="strong")
ties = [ch for ch in c_strong.choices if len(ch) == 2]
print(f"strong mode: {len(ties)} of {len(c_strong)} menus resolved as ties")

# weak observability reports a single maximal element; ties are broken
# by a policy (here: seeded random draws)
c_weak = generate_choices(gen, e, mode="weak", tie_policy="random", seed=3)
assert all(len(ch) == 1 for ch in c_weak.choices)
print(f"weak mode: every choice a singleton, e.g. {c_weak.choices[:4]}")

# prefix restriction is how the convergence runner replays growing data
e_k, c_k = restrict(e, c_strong, 10)
print(f"prefix of 10: {len(e_k)} pairs, {len(c_k)} choices")

# choice data round-trips through an interchange CSV
text = choices_to_csv(c_strong)
print()
print("first CSV lines:")
for line in text.splitlines()[:4]:
    print(f"  {line}")
e_back, c_back = choices_from_csv(text, grid, mode="strong")
print(f"round trip equal: {e_back.pairs == e.pairs and c_back.choices == c_strong.choices}")
