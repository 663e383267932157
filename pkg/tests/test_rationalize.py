"""Tests for revealed relations, consistency, extensions, and diameters.

The naive enumerator at the top is the oracle for everything countable:
it builds every dense rank row by rejection from itertools.product and
replays data by hand, so it shares no code with the library paths.
"""

import itertools
import json
import math

import numpy as np
import pytest

from prefid import (
    CapacityError,
    ConfigurationError,
    DomainError,
    PreconditionError,
    ResolutionError,
    dense_subset,
    enumerate_pairs,
    from_points,
    from_utility,
    generate_choices,
    make_grid_euclidean,
    make_lottery_simplex,
)
from prefid.preferences import closed_convergence_distance
from prefid.rationalize import (
    RationalizationPolicy,
    adversarial_far_extension,
    all_total_preorders,
    brute_force_rationalizations,
    check_consistency,
    diameter_estimate,
    eu_preference,
    eu_rationalize,
    extend_preference,
    indifference_construction,
    lipschitz_rationalize,
    rationalizes,
    result_to_json,
    revealed_relation,
    sample_extension,
)

from conftest import brute_graph_distance, dataset


def naive_preorders(n):
    """All dense rank rows on n points, by rejection."""
    rows = []
    for row in itertools.product(range(n), repeat=n):
        top = max(row)
        if set(row) == set(range(top + 1)):
            rows.append(row)
    return rows


def naive_replay(row, e, c):
    for (x, y), chosen in zip(e.pairs, c.choices):
        best = max(row[x], row[y])
        optimal = {z for z in (x, y) if row[z] == best}
        if c.mode == "strong":
            if set(chosen) != optimal:
                return False
        elif not set(chosen) <= optimal:
            return False
    return True


def ordered_bell(n):
    # a(n) = sum_k C(n, k) a(n - k)
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(math.comb(m, k) * a[m - k] for k in range(1, m + 1)))
    return a[n]


class TestRevealedRelation:
    def test_weak_mode_yields_weak_edges(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "weak")
        r = revealed_relation(e, c, "weak")
        assert r.weak_edges == {(3, 0)}
        assert r.strict_edges == set()
        (edge,) = r.edges
        assert edge.source == "data"
        assert edge.pair_index == 1

    def test_strong_singleton_yields_strict_edge(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "strong")
        r = revealed_relation(e, c, "strong")
        assert r.strict_edges == {(3, 0)}

    def test_strong_tie_yields_both_weak_edges(self, line5):
        e, c = dataset(line5, [(1, 2, (1, 2))], "strong")
        r = revealed_relation(e, c, "strong")
        assert r.weak_edges == {(1, 2), (2, 1)}
        assert r.strict_edges == set()

    def test_monotone_weak_injects_order_edges(self, chain6):
        e, c = dataset(chain6, [(0, 1, (1,))], "weak")
        r = revealed_relation(e, c, "weak", monotone="weak")
        assert r.has_monotone_edges()
        # every ordered pair i > j of the chain appears as a weak edge
        assert {(i, j) for i in range(6) for j in range(6) if i > j} <= r.weak_edges

    def test_monotone_strict_injects_strict_edges(self, chain6):
        e, c = dataset(chain6, [(0, 1, (1,))], "weak")
        r = revealed_relation(e, c, "weak", monotone="strict")
        assert (5, 0) in r.strict_edges
        assert (1, 0) in r.strict_edges

    def test_monotone_none_keeps_data_only(self, chain6):
        e, c = dataset(chain6, [(0, 1, (1,))], "weak")
        r = revealed_relation(e, c, "weak")
        assert not r.has_monotone_edges()
        assert len(r.edges) == 1

    def test_arc_matrix_mirrors_edges(self, line5):
        e, c = dataset(line5, [(0, 3, (3,)), (1, 2, (1, 2))], "strong")
        r = revealed_relation(e, c, "strong")
        expected = np.zeros((5, 5), dtype=bool)
        expected[3, 0] = expected[1, 2] = expected[2, 1] = True
        assert np.array_equal(r.arc_matrix, expected)
        assert r.strict_matrix[3, 0] and not r.strict_matrix[1, 2]

    def test_choice_outside_pair_rejected(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "weak")
        bad = type(c)(e, ((4,),), "weak")
        with pytest.raises(DomainError):
            revealed_relation(e, bad, "weak")

    def test_length_mismatch_rejected(self, line5):
        e, c = dataset(line5, [(0, 3, (3,)), (0, 1, (1,))], "weak")
        short = type(c)(e, c.choices[:1], "weak")
        with pytest.raises(DomainError):
            revealed_relation(e, short, "weak")

    def test_unknown_mode_and_class_rejected(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "weak")
        with pytest.raises(ConfigurationError):
            revealed_relation(e, c, "loud")
        with pytest.raises(ConfigurationError):
            revealed_relation(e, c, "weak", monotone="convex")


class TestCheckConsistency:
    def test_chain_data_is_consistent(self, line5):
        e, c = dataset(line5, [(0, 1, (1,)), (1, 2, (2,)), (2, 3, (3,))], "strong")
        res = check_consistency(revealed_relation(e, c, "strong"))
        assert res.consistent
        assert res.witness is None

    def test_strict_three_cycle_witness(self, line5):
        e, c = dataset(line5, [(0, 1, (0,)), (1, 2, (1,)), (2, 0, (2,))], "strong")
        res = check_consistency(revealed_relation(e, c, "strong"))
        assert not res.consistent
        assert res.witness == (0, 1, 2, 0)

    def test_contradictory_pair_witness(self, line5):
        e, c = dataset(line5, [(0, 1, (0,)), (0, 1, (1,))], "strong")
        res = check_consistency(revealed_relation(e, c, "strong"))
        assert not res.consistent
        assert res.witness == (0, 1, 0)

    def test_weak_cycle_is_consistent(self, line5):
        # weak edges around a cycle collapse into one indifference class
        e, c = dataset(line5, [(0, 1, (0,)), (1, 2, (1,)), (2, 0, (2,))], "weak")
        r = revealed_relation(e, c, "weak")
        assert check_consistency(r).consistent
        p = extend_preference(r, RationalizationPolicy())
        assert p.rank[0] == p.rank[1] == p.rank[2]

    def test_monotone_conflict_is_caught(self, chain6):
        # data says 0 strictly beats 5; strict monotonicity says the reverse
        e, c = dataset(chain6, [(0, 5, (0,))], "strong")
        r = revealed_relation(e, c, "strong", monotone="strict")
        res = check_consistency(r)
        assert not res.consistent
        assert res.witness is not None

    def test_agrees_with_naive_enumeration(self, line5):
        # consistency == existence of a rationalizing rank row
        rows = naive_preorders(4)
        space = from_points(np.arange(4.0).reshape(-1, 1))
        cases = [
            [(0, 1, (0,)), (1, 2, (1,)), (2, 3, (2,))],
            [(0, 1, (0,)), (1, 0, (1,))],
            [(0, 1, (0, 1)), (1, 2, (1,)), (2, 0, (0, 2))],
            [(0, 1, (1,)), (1, 2, (2,)), (0, 2, (0,))],
        ]
        for rows_spec in cases:
            for mode in ("strong", "weak"):
                spec = rows_spec
                if mode == "weak":
                    spec = [(x, y, ch[:1]) for x, y, ch in rows_spec]
                e, c = dataset(space, spec, mode)
                expected = any(naive_replay(row, e, c) for row in rows)
                got = check_consistency(revealed_relation(e, c, mode)).consistent
                assert got == expected, (rows_spec, mode)


class TestCanonicalExtension:
    def test_full_strict_chain_recovers_ranks(self, line5):
        e = enumerate_pairs(dense_subset(line5))
        c = generate_choices(from_utility(line5, line5.points[:, 0]), e, mode="strong")
        p = extend_preference(revealed_relation(e, c, "strong"), RationalizationPolicy())
        assert list(p.rank) == [0, 1, 2, 3, 4]

    def test_partial_data_sits_at_minimal_height(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "strong")
        p = extend_preference(revealed_relation(e, c, "strong"), RationalizationPolicy())
        assert list(p.rank) == [0, 0, 0, 1, 0]

    def test_canonical_rationalizes_random_data(self, line5):
        rng = np.random.default_rng(4)
        e = enumerate_pairs(dense_subset(line5))
        for trial in range(20):
            vals = rng.integers(0, 3, size=5).astype(float)
            truth = from_utility(line5, vals)
            for mode, policy in (("strong", "both"), ("weak", "first")):
                c = generate_choices(truth, e, mode=mode, tie_policy=policy)
                p = extend_preference(revealed_relation(e, c, mode), RationalizationPolicy())
                assert rationalizes(p, e, c)

    def test_inconsistent_data_rejected(self, line5):
        e, c = dataset(line5, [(0, 1, (0,)), (0, 1, (1,))], "strong")
        with pytest.raises(PreconditionError):
            extend_preference(revealed_relation(e, c, "strong"), RationalizationPolicy())


class TestSampleExtension:
    def test_samples_rationalize(self, line5):
        e, c = dataset(line5, [(0, 3, (3,)), (1, 2, (1, 2))], "strong")
        r = revealed_relation(e, c, "strong")
        rng = np.random.default_rng(0)
        for _ in range(50):
            assert rationalizes(sample_extension(r, rng), e, c)

    def test_int_seed_is_deterministic(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "weak")
        r = revealed_relation(e, c, "weak")
        assert sample_extension(r, 7) == sample_extension(r, 7)

    def test_support_matches_naive_enumeration(self):
        # every rationalizing preorder of a 3-point dataset is reachable
        tri = from_points(np.array([0.0, 0.4, 1.0]).reshape(-1, 1))
        e, c = dataset(tri, [(0, 2, (2,))], "weak")
        r = revealed_relation(e, c, "weak")
        expected = {row for row in naive_preorders(3) if naive_replay(row, e, c)}
        rng = np.random.default_rng(1)
        seen = set()
        for _ in range(600):
            seen.add(tuple(int(v) for v in sample_extension(r, rng).rank))
        assert seen == expected

    def test_inconsistent_data_rejected(self, line5):
        e, c = dataset(line5, [(0, 1, (0,)), (0, 1, (1,))], "strong")
        r = revealed_relation(e, c, "strong")
        with pytest.raises(PreconditionError):
            sample_extension(r, 0)


class TestAdversarialFar:
    def test_far_point_rationalizes_and_moves_away(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "strong")
        r = revealed_relation(e, c, "strong")
        target = extend_preference(r, RationalizationPolicy())
        far, exhausted = adversarial_far_extension(r, target, seed=1, budget=150)
        assert rationalizes(far, e, c)
        d = closed_convergence_distance(far, target)
        assert abs(d - 0.8) < 1e-12
        assert exhausted is False

    def test_policy_requires_target(self):
        with pytest.raises(ConfigurationError):
            RationalizationPolicy(tag="adversarial_far")

    def test_policy_dispatch(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "strong")
        r = revealed_relation(e, c, "strong")
        target = extend_preference(r, RationalizationPolicy())
        policy = RationalizationPolicy(tag="adversarial_far", target=target, seed=1, budget=150)
        far = extend_preference(r, policy)
        assert closed_convergence_distance(far, target) > 0


class TestIndifferenceConstruction:
    def test_rationalizes_and_sits_near_flat(self):
        g = make_grid_euclidean(1, 64, (0.0, 1.0))
        truth = from_utility(g, g.points[:, 0])
        e = enumerate_pairs(dense_subset(g, members=[0, 21, 42, 63]))
        c = generate_choices(truth, e, mode="strong")
        q = indifference_construction(e, c)
        assert rationalizes(q, e, c)
        flat = from_utility(g, np.zeros(g.num_points))
        d = closed_convergence_distance(q, flat)
        k = len(e.pairs)
        assert d <= 1.0 / (2.0 * k) + 2.0 * g.step

    def test_coarse_grid_rejected(self):
        g = make_grid_euclidean(1, 3, (0.0, 1.0))
        e, c = dataset(g, [(0, 2, (2,))], "strong")
        with pytest.raises(ResolutionError):
            indifference_construction(e, c)

    def test_non_grid_space_rejected(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "strong")
        with pytest.raises(ConfigurationError):
            indifference_construction(e, c)

    def test_monotone_edges_rejected_by_policy(self):
        g = make_grid_euclidean(1, 64, (0.0, 1.0))
        e, c = dataset(g, [(0, 63, (63,))], "strong")
        r = revealed_relation(e, c, "strong", monotone="weak")
        with pytest.raises(ConfigurationError):
            extend_preference(r, RationalizationPolicy(tag="adversarial_indifference"))


class TestEuRationalize:
    def test_recovers_generating_index(self):
        s = make_lottery_simplex(3, 4)
        idx = np.array([0.8, -0.2, -0.6])
        idx = idx / np.linalg.norm(idx)
        e = enumerate_pairs(dense_subset(s))
        c = generate_choices(from_utility(s, s.points @ idx), e, mode="strong")
        res = eu_rationalize(e, c)
        assert res.status == "feasible"
        np.testing.assert_allclose(
            res.index, [0.7844645405406675, -0.19611613509594364, -0.5883484054447239], atol=1e-9
        )
        assert abs(res.margin - 0.04902903373476264) < 1e-9
        assert eu_preference(s, res.index) == from_utility(s, s.points @ idx)

    def test_index_is_unit_and_zero_sum(self):
        s = make_lottery_simplex(3, 4)
        e, c = dataset(s, [(0, 14, (0,)), (2, 9, (2,))], "strong")
        res = eu_rationalize(e, c)
        assert res.status == "feasible"
        assert abs(np.linalg.norm(res.index) - 1.0) < 1e-9
        assert abs(res.index.sum()) < 1e-9

    def test_strict_cycle_is_infeasible(self):
        s = make_lottery_simplex(3, 4)
        pts = s.points

        def find(v):
            return int(np.where((np.abs(pts - np.array(v)) < 1e-9).all(axis=1))[0][0])

        a, b, c3 = find((1, 0, 0)), find((0, 1, 0)), find((0, 0, 1))
        e, c = dataset(s, [(a, b, (a,)), (b, c3, (b,)), (c3, a, (c3,))], "strong")
        res = eu_rationalize(e, c)
        assert res.status == "infeasible"
        assert res.index is None

    def test_all_ties_are_degenerate(self):
        s = make_lottery_simplex(3, 4)
        e = enumerate_pairs(dense_subset(s))
        c = generate_choices(from_utility(s, np.zeros(s.num_points)), e, mode="strong")
        res = eu_rationalize(e, c)
        assert res.status == "degenerate"
        assert res.margin == 0.0

    def test_non_lottery_space_rejected(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "strong")
        with pytest.raises(ConfigurationError):
            eu_rationalize(e, c)


class TestLipschitzRationalize:
    def test_weak_data_rides_the_upper_band(self):
        g = make_grid_euclidean(1, 4, (0.0, 1.0))
        e, c = dataset(g, [(0, 3, (3,))], "weak")
        res = lipschitz_rationalize(e, c, 1.0, 2.0)
        assert res.status == "feasible"
        np.testing.assert_allclose(res.values, [0.0, 2.0 / 3.0, 4.0 / 3.0, 2.0], atol=1e-9)
        assert rationalizes(from_utility(g, res.values), e, c)

    def test_strict_data_margin(self):
        g = make_grid_euclidean(1, 4, (0.0, 1.0))
        e, c = dataset(g, [(0, 3, (3,)), (1, 2, (2,))], "strong")
        res = lipschitz_rationalize(e, c, 1.0, 2.0)
        assert res.status == "feasible"
        np.testing.assert_allclose(res.values, [0.0, 1.0 / 3.0, 1.0, 4.0 / 3.0], atol=1e-9)
        assert abs(res.margin - 2.0 / 3.0) < 1e-9
        assert rationalizes(from_utility(g, res.values), e, c)

    def test_band_constraints_hold(self):
        g = make_grid_euclidean(1, 5, (0.0, 1.0))
        e, c = dataset(g, [(0, 4, (4,)), (1, 3, (3,))], "strong")
        res = lipschitz_rationalize(e, c, 0.5, 3.0)
        step = g.step
        diffs = np.diff(res.values)
        assert (diffs >= 0.5 * step - 1e-9).all()
        assert (diffs <= 3.0 * step + 1e-9).all()
        assert res.values[0] == 0.0

    def test_downward_choice_is_infeasible(self):
        g = make_grid_euclidean(1, 4, (0.0, 1.0))
        e, c = dataset(g, [(0, 3, (0,))], "strong")
        res = lipschitz_rationalize(e, c, 1.0, 2.0)
        assert res.status == "infeasible"
        assert res.values is None

    def test_bad_band_rejected(self):
        g = make_grid_euclidean(1, 4, (0.0, 1.0))
        e, c = dataset(g, [(0, 3, (3,))], "weak")
        with pytest.raises(ConfigurationError):
            lipschitz_rationalize(e, c, 2.0, 1.0)
        with pytest.raises(ConfigurationError):
            lipschitz_rationalize(e, c, 0.0, 1.0)

    def test_non_grid_space_rejected(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "weak")
        with pytest.raises(ConfigurationError):
            lipschitz_rationalize(e, c, 1.0, 2.0)


class TestEnumeration:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_counts_match_recurrence(self, n):
        assert all_total_preorders(n).shape[0] == ordered_bell(n)

    def test_rows_are_dense_ranks(self):
        for row in all_total_preorders(4):
            top = int(row.max())
            assert set(int(v) for v in row) == set(range(top + 1))

    def test_matches_naive_enumeration(self):
        got = {tuple(int(v) for v in row) for row in all_total_preorders(4)}
        assert got == set(naive_preorders(4))

    def test_capacity_bound(self):
        with pytest.raises(CapacityError):
            all_total_preorders(8)

    def test_brute_force_filter(self):
        tri = from_points(np.array([0.0, 0.4, 1.0]).reshape(-1, 1))
        e, c = dataset(tri, [(0, 2, (2,))], "weak")
        got = {tuple(int(v) for v in row) for row in brute_force_rationalizations(e, c)}
        expected = {row for row in naive_preorders(3) if naive_replay(row, e, c)}
        assert got == expected


class TestDiameter:
    def test_fully_determined_data_has_zero_diameter(self, line5):
        e = enumerate_pairs(dense_subset(line5))
        c = generate_choices(from_utility(line5, line5.points[:, 0]), e, mode="strong")
        res = diameter_estimate(e, c)
        assert res.value == 0.0
        assert res.method == "exact"
        assert res.num_candidates == 1

    def test_exact_matches_naive_oracle(self):
        tri = from_points(np.array([0.0, 0.4, 1.0]).reshape(-1, 1))
        e, c = dataset(tri, [(0, 2, (2,))], "weak")
        res = diameter_estimate(e, c)
        rows = [row for row in naive_preorders(3) if naive_replay(row, e, c)]
        prefs = [from_utility(tri, np.array(row, dtype=float)) for row in rows]
        expected = max(
            brute_graph_distance(tri, a, b) for a in prefs for b in prefs
        )
        assert res.method == "exact"
        assert res.num_candidates == len(rows) == 8
        assert abs(res.value - expected) < 1e-12
        assert abs(res.value - 0.6) < 1e-12

    def test_partial_chain_values(self, chain6):
        e, c = dataset(chain6, [(0, 1, (1,)), (2, 3, (3,))], "strong")
        exact = diameter_estimate(e, c, "all")
        assert exact.method == "exact"
        assert exact.num_candidates == 919
        assert exact.value == 3.0

    def test_sampled_lower_bounds_exact(self, chain6):
        e, c = dataset(chain6, [(0, 1, (1,)), (2, 3, (3,))], "strong")
        exact = diameter_estimate(e, c, "all")
        sampled = diameter_estimate(e, c, "weak_monotone", num_samples=80, seed=0)
        assert sampled.method == "sampled"
        # the weak-monotone set is a subset, so its spread cannot exceed the full spread
        assert sampled.value <= exact.value + 1e-12

    def test_strict_monotone_chain_is_determined(self, chain6):
        e, c = dataset(chain6, [(0, 1, (1,)), (2, 3, (3,))], "strong")
        res = diameter_estimate(e, c, "strict_monotone", num_samples=40, seed=0)
        assert res.value == 0.0
        assert res.num_candidates == 1

    def test_eight_point_chunked_path(self):
        s8 = from_points(np.arange(8.0).reshape(-1, 1))
        e = enumerate_pairs(dense_subset(s8))
        c = generate_choices(from_utility(s8, np.arange(8.0)), e, mode="strong")
        res = diameter_estimate(e, c)
        assert res.method == "exact"
        assert res.value == 0.0
        assert res.num_candidates == 1

    def test_inconsistent_data_rejected(self, line5):
        e, c = dataset(line5, [(0, 1, (0,)), (0, 1, (1,))], "strong")
        with pytest.raises(PreconditionError):
            diameter_estimate(e, c)

    def test_unknown_policy_class_rejected(self, line5):
        e, c = dataset(line5, [(0, 1, (0,))], "strong")
        with pytest.raises(ConfigurationError):
            diameter_estimate(e, c, "convex")

    def test_float_conversion(self, line5):
        e, c = dataset(line5, [(0, 1, (0,))], "strong")
        res = diameter_estimate(e, c)
        assert float(res) == res.value


class TestResultJson:
    def test_document_shape(self, line5):
        e, c = dataset(line5, [(0, 3, (3,))], "strong")
        r = revealed_relation(e, c, "strong")
        p = extend_preference(r, RationalizationPolicy())
        diam = diameter_estimate(e, c)
        doc = json.loads(
            result_to_json(RationalizationPolicy(), True, preference=p, diameter=diam)
        )
        assert doc["policy"] == "canonical"
        assert doc["consistent"] is True
        assert doc["ranks"] == [0, 0, 0, 1, 0]
        assert doc["diameter"]["method"] == "exact"

    def test_witness_document(self):
        doc = json.loads(result_to_json("canonical", False, witness=(0, 1, 0)))
        assert doc["witness_cycle"] == [0, 1, 0]
        assert "ranks" not in doc

    def test_policy_validation(self):
        with pytest.raises(ConfigurationError):
            RationalizationPolicy(tag="optimist")
        with pytest.raises(ConfigurationError):
            RationalizationPolicy(monotone="loose")
