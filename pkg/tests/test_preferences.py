import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import prefid
from prefid import (
    BinaryRelation,
    Preference,
    closed_convergence_distance,
    from_points,
    is_locally_strict,
    is_quasitransitive,
    is_strictly_monotone,
    is_weakly_monotone,
    li_ls_limit,
    preference_from_json,
    preference_to_json,
    total_indifference,
)
from prefid.errors import DomainError
from prefid.preferences import from_utility

from conftest import brute_graph_distance


def pref(space, ranks):
    return Preference(space, np.array(ranks))


class TestPreference:
    def test_ranks_are_densified(self, line5):
        p = pref(line5, (0, 5, 5, 9, 20))
        assert p.rank.tolist() == [0, 1, 1, 2, 3]
        assert p.num_classes() == 4

    def test_graph_and_strict_part(self, line5):
        p = pref(line5, (0, 1, 1, 2, 3))
        assert p.graph[1, 2] and p.graph[2, 1]
        assert p.strict[3, 1] and not p.strict[1, 3]
        assert not p.strict[1, 2]

    def test_optimal_of_menu(self, line5):
        p = pref(line5, (0, 2, 2, 1, 0))
        assert p.optimal_of([0, 1, 2, 3]) == [1, 2]
        assert p.optimal_of([0, 4]) == [0, 4]

    def test_wrong_length_rejected(self, line5):
        with pytest.raises(DomainError):
            pref(line5, (0, 1, 2))


class TestFromUtility:
    def test_ranks_follow_values(self, line5):
        p = from_utility(line5, np.array([0.3, 0.3, -1.0, 2.0, 0.5]))
        assert p.rank.tolist() == [1, 1, 0, 3, 2]

    def test_monotone_utility_gives_monotone_preference(self, grid3):
        p = from_utility(grid3, grid3.points.sum(axis=1))
        assert is_weakly_monotone(p)
        assert is_strictly_monotone(p)

    def test_plateau_breaks_strict_monotonicity(self, grid3):
        # capped sum ties (1,1) with (0.5,0.5), a strictly dominating pair
        vals = np.minimum(grid3.points.sum(axis=1), 1.0)
        p = from_utility(grid3, vals)
        assert is_weakly_monotone(p)
        assert not is_strictly_monotone(p)


class TestClosedConvergenceDistance:
    # hand-frozen values from the loop oracle, uneven 5-point line
    FROZEN = [
        ((0, 1, 2, 3, 4), (4, 3, 2, 1, 0), 0.8),
        ((0, 1, 2, 3, 4), (0, 1, 2, 4, 3), 0.8),
        ((0, 0, 1, 1, 2), (0, 1, 2, 3, 4), 0.39999999999999997),
        ((2, 0, 1, 3, 4), (0, 1, 2, 3, 4), 0.19999999999999998),
    ]

    @pytest.mark.parametrize("ra,rb,expected", FROZEN)
    def test_frozen_cases(self, line5, ra, rb, expected):
        d = closed_convergence_distance(pref(line5, ra), pref(line5, rb))
        assert d == pytest.approx(expected, abs=1e-12)

    def test_matches_loop_oracle_on_random_pairs(self, line5):
        rng = np.random.default_rng(42)
        for _ in range(25):
            pa = pref(line5, rng.integers(0, 4, size=5))
            pb = pref(line5, rng.integers(0, 4, size=5))
            assert closed_convergence_distance(pa, pb) == pytest.approx(
                brute_graph_distance(line5, pa, pb), abs=1e-12)

    def test_works_on_relations_too(self, line5):
        rel = BinaryRelation(line5, np.ones((5, 5), dtype=bool))
        p = total_indifference(line5)
        assert closed_convergence_distance(rel, p) == 0.0

    def test_different_spaces_rejected(self, line5, grid3):
        with pytest.raises(DomainError):
            closed_convergence_distance(total_indifference(line5), total_indifference(grid3))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=5, max_size=5),
       st.lists(st.integers(0, 3), min_size=5, max_size=5))
def test_distance_is_a_metric_on_graphs(ra, rb):
    space = from_points(np.array([0.0, 0.1, 0.3, 0.7, 1.5]).reshape(-1, 1))
    pa, pb = pref(space, ra), pref(space, rb)
    d_ab = closed_convergence_distance(pa, pb)
    assert d_ab == closed_convergence_distance(pb, pa)
    assert (d_ab == 0.0) == (pa == pb)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=5, max_size=5),
       st.lists(st.integers(0, 2), min_size=5, max_size=5),
       st.lists(st.integers(0, 2), min_size=5, max_size=5))
def test_triangle_inequality(ra, rb, rc):
    space = from_points(np.array([0.0, 0.1, 0.3, 0.7, 1.5]).reshape(-1, 1))
    pa, pb, pc = pref(space, ra), pref(space, rb), pref(space, rc)
    d = closed_convergence_distance
    assert d(pa, pc) <= d(pa, pb) + d(pb, pc) + 1e-12


class TestLiLsLimit:
    def test_constant_sequence_converges_to_dilated_graph(self, line5):
        p = pref(line5, (0, 1, 2, 3, 4))
        li, ls = li_ls_limit([p] * 6, (0.5, 0.1), tail_starts=(0, 3))
        assert li == ls
        # the smallest radius thickens the graph by one 0.1 gap
        assert li.matrix[0, 1] and li.matrix[1, 0]
        assert not li.matrix[0, 3]

    def test_li_subset_of_ls(self, line5):
        rng = np.random.default_rng(3)
        prefs = [pref(line5, rng.integers(0, 5, size=5)) for _ in range(8)]
        li, ls = li_ls_limit(prefs, (1.0, 0.5, 0.2))
        assert not (li.matrix & ~ls.matrix).any()

    def test_radii_must_decrease(self, line5):
        p = total_indifference(line5)
        with pytest.raises(DomainError):
            li_ls_limit([p, p], (0.1, 0.5))


class TestLocalStrictness:
    def test_strictly_ranked_neighbors_pass(self, chain6):
        p = from_utility(chain6, chain6.points[:, 0])
        ok, bad = is_locally_strict(p, radius=1.0)
        assert ok and bad == []

    def test_plateau_wider_than_radius_fails(self, chain6):
        p = pref(chain6, (0, 1, 1, 1, 2, 3))
        ok, bad = is_locally_strict(p, radius=1.0)
        assert not ok
        assert (2, 2) in bad

    def test_total_indifference_fails_everywhere(self, chain6):
        ok, bad = is_locally_strict(total_indifference(chain6), radius=5.0)
        assert not ok
        assert len(bad) == 36


class TestQuasitransitivity:
    def test_preference_is_quasitransitive(self, line5):
        assert is_quasitransitive(pref(line5, (0, 2, 1, 1, 0)))

    def test_intransitive_indifference_still_passes(self, line5):
        # a ~ b, b ~ c, a > c: strict part {(a, c)} is transitive
        m = np.ones((5, 5), dtype=bool)
        m[2, 0] = False
        assert is_quasitransitive(BinaryRelation(line5, m))

    def test_strict_cycle_fails(self, line5):
        m = np.ones((5, 5), dtype=bool)
        m[1, 0] = m[2, 1] = m[0, 2] = False  # 0 > 1 > 2 > 0
        assert not is_quasitransitive(BinaryRelation(line5, m))

    def test_incomplete_relation_rejected(self, line5):
        m = np.eye(5, dtype=bool)
        with pytest.raises(DomainError):
            is_quasitransitive(BinaryRelation(line5, m))


class TestMonotonicity:
    def test_matches_loop_oracle(self, grid3):
        rng = np.random.default_rng(11)
        for _ in range(20):
            p = pref(grid3, rng.integers(0, 5, size=9))
            weak_ok = all(
                p.rank[i] >= p.rank[j]
                for i in range(9) for j in range(9) if grid3.weak_order[i, j])
            strict_ok = weak_ok and all(
                p.rank[i] > p.rank[j]
                for i in range(9) for j in range(9) if grid3.strict_order[i, j])
            assert is_weakly_monotone(p) == weak_ok
            assert is_strictly_monotone(p) == strict_ok


class TestSerialization:
    def test_json_round_trip(self, line5):
        p = pref(line5, (0, 2, 1, 1, 3))
        back = preference_from_json(preference_to_json(p), line5)
        assert back == p

    def test_total_indifference_is_one_class(self, grid3):
        p = total_indifference(grid3)
        assert p.num_classes() == 1
        assert p.graph.all()
