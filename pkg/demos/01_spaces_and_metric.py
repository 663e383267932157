"""
Ordered spaces and the convergence metric
=========================================

Build the stock spaces, look at their reference chains, and measure how
far apart two preferences are in the closed convergence metric.
"""

import numpy as np

from prefid import (
    closed_convergence_distance,
    from_utility,
    li_ls_limit,
    make_dated_rewards,
    make_grid_euclidean,
    make_lottery_simplex,
    total_indifference,
)

# a 6x6 consumption grid on the unit box, ordered coordinatewise
grid = make_grid_euclidean(2, 6, (0.0, 1.0))
print(f"grid: {grid.num_points} points, step {grid.step:.3f}")
print(f"  chain (diagonal) indices: {grid.chain}")

# lotteries over 3 ranked prizes at resolution 4, ordered by dominance
lott = make_lottery_simplex(3, 4)
print(f"lottery simplex: {lott.num_points} points, chain length {len(lott.chain)}")

# money/date pairs: more money weakly better, earlier weakly better
dated = make_dated_rewards(4, 3, ((0.0, 10.0), (0.0, 2.0)))
print(f"dated rewards: {dated.num_points} points")

# two utilities on the grid: a symmetric product and a tilted one
u_sym = grid.points.prod(axis=1)
u_tilt = grid.points.prod(axis=1) + 0.25 * grid.points[:, 0]
p_sym = from_utility(grid, u_sym)
p_tilt = from_utility(grid, u_tilt)

print()
print("closed convergence distances on the grid:")
print(f"  sym vs itself        {closed_convergence_distance(p_sym, p_sym):.4f}")
print(f"  sym vs tilted        {closed_convergence_distance(p_sym, p_tilt):.4f}")
print(f"  sym vs indifference  {closed_convergence_distance(p_sym, total_indifference(grid)):.4f}")

# shrink the tilt: the preferences converge, and the distance sees it
print()
print("shrinking the tilt:")
prefs = []
for eps in (0.4, 0.2, 0.1, 0.05, 0.0):
    p = from_utility(grid, grid.points.prod(axis=1) + eps * grid.points[:, 0])
    prefs.append(p)
    print(f"  eps={eps:<5} delta_c to sym = {closed_convergence_distance(p, p_sym):.4f}")

# the set-limit view of the same sequence: with a radius schedule wide
# enough for each tail, the lower and upper limits coincide at the
# limit's graph
li, ls = li_ls_limit(prefs, (0.45, 0.25, 0.01), tail_starts=(0, 3, 4))
print()
print(f"li == ls: {li == ls}")
print(f"limit graph pairs: {int(np.count_nonzero(li.matrix))} of {grid.num_points ** 2}")
