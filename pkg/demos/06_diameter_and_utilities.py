"""
How much is pinned down: diameter and utility selection
=======================================================

Two quantitative answers to "is the analyst done yet": the diameter of
the rationalization set, and the distance of a canonical utility to the
one that generated the data.
"""

import numpy as np

from prefid import (
    UtilityFunction,
    certainty_equivalent_utility,
    chain_step_bound,
    closed_convergence_distance,
    dense_subset,
    diameter_estimate,
    enumerate_pairs,
    from_points,
    from_utility,
    generate_choices,
    make_grid_euclidean,
    max_norm_distance,
    restrict,
)

# --- diameter on a small chain: exact by enumeration --------------------
chain = from_points(np.arange(6.0).reshape(-1, 1))
e = enumerate_pairs(dense_subset(chain))
c = generate_choices(from_utility(chain, np.arange(6.0)), e, mode="strong")
print("exact diameter of the rationalization set (6-point chain):")
for k in (1, 3, 6, 9, 12, 15):
    e_k, c_k = restrict(e, c, k)
    est = diameter_estimate(e_k, c_k, "all")
    print(f"  k={k:<3} diameter={est.value:.1f}  ({est.method}, {est.num_candidates} candidates)")

# --- sampled lower bound on a grid, within the monotone class -----------
grid = make_grid_euclidean(2, 8, (0.0, 1.0))
vals = grid.points.prod(axis=1) + 0.1 * grid.points.sum(axis=1)
gen = from_utility(grid, vals)
e2 = enumerate_pairs(dense_subset(grid))
c2 = generate_choices(gen, e2, mode="strong")
print()
print("sampled diameter lower bound (8x8 grid, strictly monotone class):")
for k in (16, 256, 1024, len(e2)):
    e_k, c_k = restrict(e2, c2, k)
    est = diameter_estimate(e_k, c_k, "strict_monotone", num_samples=80, seed=0)
    print(f"  k={k:<5} diameter>={est.value:.4f}")

# --- utility selection ---------------------------------------------------
# the certainty-equivalent selection reads values off the reference
# chain, so matching preferences give nearby utilities
u_star = UtilityFunction(grid, vals)
u_sel = certainty_equivalent_utility(gen, u_star)
gap = max_norm_distance(u_sel, u_star)
print()
print(f"selected vs generating utility: max gap {gap:.4f} "
      f"(chain step bound {chain_step_bound(grid, u_star):.4f})")

# arbitrary representations have no such guarantee: scaling preserves the
# preference exactly while the values run away
for scale in (1.0, 10.0, 100.0):
    u_scaled = UtilityFunction(grid, scale * u_sel.values)
    same = closed_convergence_distance(u_scaled.preference(), u_sel.preference())
    print(f"  scale {scale:>5}: max gap {max_norm_distance(u_scaled, u_star):>8.2f}, "
          f"delta_c of preference {same:.1f}")
