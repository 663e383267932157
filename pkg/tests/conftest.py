"""Shared fixtures and independent oracles.

The oracles here are deliberately naive (pure Python loops, quadratic or
worse) so they cannot share bugs with the vectorized library paths.
"""

import numpy as np
import pytest

from prefid import Preference, dense_subset, from_points, make_grid_euclidean
from prefid.experiments import ChoiceSequence, ExperimentSequence


def brute_graph_distance(space, rel_a, rel_b) -> float:
    """Hausdorff distance between two relation graphs, by exhaustive loops."""
    D = space.distance_matrix
    n = space.num_points
    ga = rel_a.graph if isinstance(rel_a, Preference) else rel_a.matrix
    gb = rel_b.graph if isinstance(rel_b, Preference) else rel_b.matrix
    pairs_a = [(i, j) for i in range(n) for j in range(n) if ga[i, j]]
    pairs_b = [(i, j) for i in range(n) for j in range(n) if gb[i, j]]

    def pair_dist(p, q):
        return max(D[p[0], q[0]], D[p[1], q[1]])

    ahead = max(min(pair_dist(a, b) for b in pairs_b) for a in pairs_a)
    back = max(min(pair_dist(b, a) for a in pairs_a) for b in pairs_b)
    return float(max(ahead, back))


def dataset(space, rows, mode):
    """Build an experiment and choices from (x, y, chosen-tuple) rows."""
    members = sorted({i for x, y, _ in rows for i in (x, y)})
    B = dense_subset(space, members=members)
    e = ExperimentSequence(space, B, tuple((x, y) for x, y, _ in rows))
    c = ChoiceSequence(e, tuple(tuple(ch) for _, _, ch in rows), mode)
    return e, c


@pytest.fixture
def line5():
    # uneven gaps so distances are informative
    return from_points(np.array([0.0, 0.1, 0.3, 0.7, 1.5]).reshape(-1, 1))


@pytest.fixture
def grid3():
    return make_grid_euclidean(2, 3, (0.0, 1.0))


@pytest.fixture
def chain6():
    return from_points(np.arange(6.0).reshape(-1, 1))
