"""
Fitting inside a parametric class
=================================

When the analyst is willing to assume a functional form, rationalization
becomes a feasibility program. Two classes are built in: linear indices
over lottery prizes, and Lipschitz-banded utilities on a grid.
"""

import numpy as np

from prefid import (
    dense_subset,
    enumerate_pairs,
    eu_preference,
    eu_rationalize,
    from_utility,
    generate_choices,
    lipschitz_rationalize,
    make_grid_euclidean,
    make_lottery_simplex,
    closed_convergence_distance,
)

# --- linear index over prizes ------------------------------------------
space = make_lottery_simplex(3, 6)
true_index = np.array([0.8, -0.2, -0.6])
true_index /= np.linalg.norm(true_index)
gen = from_utility(space, space.points @ true_index)

e = enumerate_pairs(dense_subset(space))
c = generate_choices(gen, e, mode="strong")
fit = eu_rationalize(e, c)
print(f"status: {fit.status}, margin: {fit.margin:.4f}")
print(f"true index:      {np.round(true_index, 4).tolist()}")
print(f"recovered index: {np.round(fit.index, 4).tolist()}")
d = closed_convergence_distance(eu_preference(space, fit.index), gen)
print(f"delta_c between induced and generating preference: {d:.4f}")

# infeasible data is reported, not patched: reverse one strict choice
bad = list(c.choices)
flip = next(i for i, ch in enumerate(bad) if len(ch) == 1)
x, y = e.pairs[flip]
bad[flip] = (y,) if bad[flip] == (x,) else (x,)
from prefid import ChoiceSequence
fit_bad = eu_rationalize(e, ChoiceSequence(e, tuple(bad), "strong"))
print(f"after flipping one choice: {fit_bad.status}")

# --- Lipschitz bands on a line -----------------------------------------
# slopes between axis neighbors are forced into [a, b] * step
line = make_grid_euclidean(1, 6, (0.0, 1.0))
gen2 = from_utility(line, np.sqrt(line.points[:, 0]))
e2 = enumerate_pairs(dense_subset(line))
c2 = generate_choices(gen2, e2, mode="strong")
band = lipschitz_rationalize(e2, c2, a=0.5, b=3.0)
print()
print(f"lipschitz fit: {band.status}")
print(f"fitted values: {(np.round(band.values, 3) + 0.0).tolist()}")
slopes = np.diff(band.values) / line.step
print(f"slopes within [0.5, 3.0]: {np.round(slopes, 3).tolist()}")
