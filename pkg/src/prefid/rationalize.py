"""From finite choice data to preferences.

Builds revealed relations, decides rationalizability, extends consistent
data to full preferences under selectable policies, fits parametric
utility classes by linear programming, and estimates the diameter of the
set of rationalizations.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapacityError, ConfigurationError, DomainError, PreconditionError, ResolutionError
from .experiments import STRONG, WEAK, ChoiceSequence, ExperimentSequence
from .preferences import Preference, closed_convergence_distance, from_utility
from .spaces import OrderedSpace

__all__ = [
    "RevealedEdge",
    "RevealedRelation",
    "RationalizationPolicy",
    "ConsistencyResult",
    "revealed_relation",
    "check_consistency",
    "extend_preference",
    "adversarial_far_extension",
    "sample_extension",
    "indifference_construction",
    "eu_rationalize",
    "eu_preference",
    "lipschitz_rationalize",
    "diameter_estimate",
    "DiameterResult",
    "EuResult",
    "LipschitzResult",
    "rationalizes",
    "all_total_preorders",
    "brute_force_rationalizations",
    "result_to_json",
]

DATA = "data"
MONOTONICITY = "monotonicity"

_MARGIN_FLOOR = 1e-9
_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class RevealedEdge:
    """One directed revealed comparison: x weakly (or strictly) above y."""

    x: int
    y: int
    strict: bool
    source: str  # data | monotonicity
    pair_index: int | None = None  # 1-based position of the generating pair


@dataclass(frozen=True)
class RevealedRelation:
    """Weak and strict revealed edges over a space, with per-edge provenance."""

    space: OrderedSpace
    edges: tuple[RevealedEdge, ...]

    @property
    def weak_edges(self) -> set[tuple[int, int]]:
        return {(e.x, e.y) for e in self.edges if not e.strict}

    @property
    def strict_edges(self) -> set[tuple[int, int]]:
        return {(e.x, e.y) for e in self.edges if e.strict}

    @cached_property
    def arc_matrix(self) -> np.ndarray:
        """All edges as one adjacency matrix: [i, j] iff i revealed at-least j."""
        n = self.space.num_points
        m = np.zeros((n, n), dtype=bool)
        for e in self.edges:
            m[e.x, e.y] = True
        m.setflags(write=False)
        return m

    @cached_property
    def strict_matrix(self) -> np.ndarray:
        n = self.space.num_points
        m = np.zeros((n, n), dtype=bool)
        for e in self.edges:
            if e.strict:
                m[e.x, e.y] = True
        m.setflags(write=False)
        return m

    @cached_property
    def condensation(self) -> "_Condensation":
        return _condense(self)

    def data_edges(self) -> list[RevealedEdge]:
        return [e for e in self.edges if e.source == DATA]

    def has_monotone_edges(self) -> bool:
        return any(e.source == MONOTONICITY for e in self.edges)


@dataclass(frozen=True)
class RationalizationPolicy:
    """How to pick one preference from the rationalization set.

    tag: canonical | adversarial_indifference | adversarial_far | eu_class.
    monotone records the edge-injection class the revealed relation is
    expected to carry (none | weak | strict); the extension itself only
    relies on the injected edges.
    """

    tag: str = "canonical"
    monotone: str = "none"
    seed: int = 0
    target: Preference | None = None
    budget: int = 400

    def __post_init__(self):
        if self.tag not in ("canonical", "adversarial_indifference", "adversarial_far", "eu_class"):
            raise ConfigurationError(f"unknown policy tag {self.tag!r}")
        if self.monotone not in ("none", "weak", "strict"):
            raise ConfigurationError(f"unknown monotone class {self.monotone!r}")
        if self.tag == "adversarial_far" and self.target is None:
            raise ConfigurationError("adversarial_far needs a target preference")


@dataclass(frozen=True)
class ConsistencyResult:
    consistent: bool
    witness: tuple[int, ...] | None = None


def revealed_relation(e: ExperimentSequence, c: ChoiceSequence, mode: str, monotone: str = "none") -> RevealedRelation:
    """Revealed comparisons from the data plus optional monotonicity edges.

    Weak mode: each chosen element is revealed weakly above its opponent.
    Strong mode: a singleton choice is revealed strictly above, a
    two-element choice is revealed indifferent (weak edges both ways).
    Monotone "weak" injects weak edges along the space order; "strict"
    additionally injects strict edges along the configured dominance.
    """
    if mode not in (STRONG, WEAK):
        raise ConfigurationError(f"unknown mode {mode!r}")
    if monotone not in ("none", "weak", "strict"):
        raise ConfigurationError(f"unknown monotone class {monotone!r}")
    if len(e.pairs) != len(c.choices):
        raise DomainError("experiment and choices have different lengths")
    edges: dict[tuple, RevealedEdge] = {}

    def add(x, y, strict, source, k=None):
        key = (x, y, strict, source)
        if key not in edges:
            edges[key] = RevealedEdge(int(x), int(y), strict, source, k)

    for k, ((x, y), chosen) in enumerate(zip(e.pairs, c.choices), start=1):
        others = {x, y}
        if not set(chosen) <= others:
            raise DomainError(f"choice at k={k} is not a subset of its pair")
        if mode == WEAK:
            for z in chosen:
                for w in others - {z}:
                    add(z, w, False, DATA, k)
        else:
            if len(set(chosen)) == 1:
                z = chosen[0]
                (w,) = others - {z}
                add(z, w, True, DATA, k)
            else:
                add(x, y, False, DATA, k)
                add(y, x, False, DATA, k)
    if monotone in ("weak", "strict"):
        w = e.space.weak_order
        ii, jj = np.nonzero(w & ~np.eye(e.space.num_points, dtype=bool))
        for i, j in zip(ii, jj):
            add(i, j, False, MONOTONICITY)
    if monotone == "strict":
        ii, jj = np.nonzero(e.space.strict_order)
        for i, j in zip(ii, jj):
            add(i, j, True, MONOTONICITY)
    return RevealedRelation(e.space, tuple(edges.values()))


@dataclass(frozen=True)
class _Condensation:
    labels: np.ndarray            # point index -> component id
    num_comps: int
    weak_arcs: frozenset          # (cu, cv): cu at-least cv, between distinct comps
    strict_arcs: frozenset
    strict_inside: tuple          # strict edges whose endpoints share a component

    @cached_property
    def waiters(self) -> dict:
        # waiters[cv] = components with an arc into cv (they place after cv)
        out: dict[int, list[int]] = {}
        for cu, cv in sorted(self.weak_arcs | self.strict_arcs):
            out.setdefault(cv, []).append(cu)
        return out

    @cached_property
    def out_counts(self) -> np.ndarray:
        counts = np.zeros(self.num_comps, dtype=int)
        seen = set()
        for cu, cv in self.weak_arcs | self.strict_arcs:
            if (cu, cv) not in seen:
                seen.add((cu, cv))
                counts[cu] += 1
        return counts


def _condense(r: RevealedRelation) -> _Condensation:
    n = r.space.num_points
    adj = csr_matrix(r.arc_matrix.astype(np.int8), shape=(n, n))
    num, labels = connected_components(adj, directed=True, connection="strong")
    weak_arcs, strict_arcs, inside = set(), set(), []
    for e in r.edges:
        cu, cv = int(labels[e.x]), int(labels[e.y])
        if cu == cv:
            if e.strict:
                inside.append((e.x, e.y))
            continue
        (strict_arcs if e.strict else weak_arcs).add((cu, cv))
    weak_arcs -= strict_arcs
    return _Condensation(labels, num, frozenset(weak_arcs), frozenset(strict_arcs), tuple(inside))


def check_consistency(r: RevealedRelation) -> ConsistencyResult:
    """Decide whether any complete transitive relation respects all edges.

    The data is consistent iff no directed cycle of revealed edges crosses
    a strict edge; otherwise a minimal witness cycle (shortest, then
    lexicographically least, starting at its strict edge) is returned.
    """
    cond = r.condensation
    if not cond.strict_inside:
        return ConsistencyResult(True, None)
    n = r.space.num_points
    adj_lists = [sorted(np.nonzero(r.arc_matrix[i])[0].tolist()) for i in range(n)]
    rev_lists: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in adj_lists[i]:
            rev_lists[j].append(i)
    best: tuple[int, tuple[int, ...]] | None = None
    for u, v in sorted(cond.strict_inside):
        # shortest forward distance to u, by breadth-first search on reversed arcs
        dist = {u: 0}
        frontier = [u]
        while frontier:
            nxt = []
            for node in frontier:
                for p in rev_lists[node]:
                    if p not in dist:
                        dist[p] = dist[node] + 1
                        nxt.append(p)
            frontier = nxt
        if v not in dist:
            continue
        path = [v]
        cur = v
        while cur != u:
            cur = min(w for w in adj_lists[cur] if dist.get(w) == dist[cur] - 1)
            path.append(cur)
        cycle = (u, *path)
        cand = (len(cycle), cycle)
        if best is None or cand < best:
            best = cand
    if best is None:  # unreachable: strict edge inside a component always closes
        return ConsistencyResult(True, None)
    return ConsistencyResult(False, best[1])


def _comp_ranks_min_height(cond: _Condensation) -> np.ndarray:
    """Lowest rank assignment: each component sits just above what it must beat."""
    ranks = np.zeros(cond.num_comps, dtype=np.int64)
    remaining = cond.out_counts.copy()
    ready = sorted(np.nonzero(remaining == 0)[0].tolist())
    arcs = {}
    for cu, cv in cond.weak_arcs:
        arcs.setdefault(cu, {})[cv] = 0
    for cu, cv in cond.strict_arcs:
        arcs.setdefault(cu, {})[cv] = 1
    order = []
    while ready:
        comp = ready.pop()
        order.append(comp)
        lift = 0
        for cv, w in arcs.get(comp, {}).items():
            lift = max(lift, ranks[cv] + w)
        ranks[comp] = lift
        for waiter in cond.waiters.get(comp, []):
            remaining[waiter] -= 1
            if remaining[waiter] == 0:
                ready.append(waiter)
    if len(order) != cond.num_comps:
        raise PreconditionError("component graph has a cycle; run check_consistency first")
    return ranks


def _comp_ranks_max_height(cond: _Condensation) -> np.ndarray:
    """Highest rank assignment: each component sits just below what beats it."""
    depth = np.zeros(cond.num_comps, dtype=np.int64)
    into: dict[int, dict[int, int]] = {}
    for cu, cv in cond.weak_arcs:
        into.setdefault(cv, {})[cu] = 0
    for cu, cv in cond.strict_arcs:
        into.setdefault(cv, {})[cu] = 1
    # process tops first: reverse of the min-height order works on the same DAG
    remaining = np.zeros(cond.num_comps, dtype=int)
    for cv, srcs in into.items():
        remaining[cv] = len(srcs)
    ready = sorted(np.nonzero(remaining == 0)[0].tolist())
    fanout: dict[int, list[int]] = {}
    for cu, cv in cond.weak_arcs | cond.strict_arcs:
        fanout.setdefault(cu, []).append(cv)
    order = []
    while ready:
        comp = ready.pop()
        order.append(comp)
        d = 0
        for cu, w in into.get(comp, {}).items():
            d = max(d, depth[cu] + w)
        depth[comp] = d
        for below in fanout.get(comp, []):
            remaining[below] -= 1
            if remaining[below] == 0:
                ready.append(below)
    if len(order) != cond.num_comps:
        raise PreconditionError("component graph has a cycle; run check_consistency first")
    return depth.max() - depth


def _require_consistent(r: RevealedRelation) -> None:
    res = check_consistency(r)
    if not res.consistent:
        raise PreconditionError(f"data is not rationalizable; witness cycle {res.witness}")


def _ranks_to_preference(r: RevealedRelation, comp_ranks: np.ndarray) -> Preference:
    return Preference(r.space, comp_ranks[r.condensation.labels])


def _canonical(r: RevealedRelation) -> Preference:
    return _ranks_to_preference(r, _comp_ranks_min_height(r.condensation))


def sample_extension(r: RevealedRelation, rng, merge_prob: float = 0.5) -> Preference:
    """One random rationalizing preference.

    Draws a uniform-candidate topological order of the component graph
    (worst component first) and merges adjacent components into shared
    ranks with the given probability when no strict edge separates them.
    Every rationalizing total preorder is reachable by some draw.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    cond = r.condensation
    if cond.strict_inside:
        raise PreconditionError("data is not rationalizable")
    remaining = cond.out_counts.copy()
    ready = sorted(np.nonzero(remaining == 0)[0].tolist())
    strict_pairs = cond.strict_arcs
    blocks: list[list[int]] = []
    placed = 0
    while ready:
        comp = ready.pop(int(rng.integers(len(ready))))
        placed += 1
        can_merge = blocks and rng.random() < merge_prob
        if can_merge:
            for member in blocks[-1]:
                if (comp, member) in strict_pairs or (member, comp) in strict_pairs:
                    can_merge = False
                    break
        if can_merge:
            blocks[-1].append(comp)
        else:
            blocks.append([comp])
        for waiter in cond.waiters.get(comp, []):
            remaining[waiter] -= 1
            if remaining[waiter] == 0:
                ready.append(waiter)
    if placed != cond.num_comps:
        raise PreconditionError("component graph has a cycle; run check_consistency first")
    comp_ranks = np.zeros(cond.num_comps, dtype=np.int64)
    for level, block in enumerate(blocks):
        for comp in block:
            comp_ranks[comp] = level
    return _ranks_to_preference(r, comp_ranks)


def adversarial_far_extension(
    r: RevealedRelation,
    target: Preference,
    seed: int = 0,
    budget: int = 400,
) -> tuple[Preference, bool]:
    """Search the rationalization set for a preference far from `target`.

    Seeded restarts of sample_extension steered by hill-climbing on the
    merge probability; returns (best preference found, budget_exhausted).
    The second element is True when the iteration budget ran out while
    improvements were still being found.
    """
    _require_consistent(r)
    rng = np.random.default_rng(seed)
    best, best_d = None, -1.0
    stale = 0
    exhausted = True
    for trial in range(max(1, budget)):
        merge_prob = float(rng.choice([0.0, 0.15, 0.4, 0.7, 0.9]))
        cand = sample_extension(r, rng, merge_prob=merge_prob)
        d = closed_convergence_distance(cand, target)
        if d > best_d:
            best, best_d = cand, d
            stale = 0
        else:
            stale += 1
        if best_d >= float(r.space.distance_values[-1]) - _ZERO_TOL:
            exhausted = False  # hit the diameter of the space; cannot improve
            break
        if stale >= max(50, budget // 4):
            exhausted = False  # local search converged before the budget
            break
    return best, exhausted


def extend_preference(r: RevealedRelation, policy: RationalizationPolicy) -> Preference:
    """Extend consistent revealed data to a full preference under a policy."""
    _require_consistent(r)
    if policy.tag == "canonical":
        return _canonical(r)
    if policy.tag == "adversarial_indifference":
        if r.has_monotone_edges():
            raise ConfigurationError("the indifference construction cannot respect monotonicity edges")
        return _indifference_from_relation(r)
    if policy.tag == "adversarial_far":
        pref, _ = adversarial_far_extension(r, policy.target, policy.seed, policy.budget)
        return pref
    if policy.tag == "eu_class":
        result = _eu_from_edges(r)
        if result.status == "infeasible":
            raise PreconditionError("data admits no linear-index rationalization")
        return eu_preference(r.space, result.index)
    raise ConfigurationError(f"unknown policy tag {policy.tag!r}")


# ---------------------------------------------------------------------------
# adversarial indifference construction


def _chop(lo: int, hi: int, max_len: int) -> list[tuple[int, int]]:
    # split [lo, hi] into consecutive runs of at most max_len levels
    if lo > hi:
        return []
    total = hi - lo + 1
    q = math.ceil(total / max_len)
    base, rem = divmod(total, q)
    runs, cur = [], lo
    for i in range(q):
        size = base + (1 if i < rem else 0)
        runs.append((cur, cur + size - 1))
        cur += size
    return runs


def _partition_axis(num_levels: int, data_levels: list[int], max_len: int) -> list[tuple[int, int]]:
    """Split axis levels into runs: each data level gets its own 3-level run."""
    runs: list[tuple[int, int]] = []
    cursor = 0
    ds = sorted(set(data_levels))
    for idx, d in enumerate(ds):
        nxt = ds[idx + 1] if idx + 1 < len(ds) else num_levels
        hi_max = min(num_levels - 1, nxt - 1)
        start = min(max(cursor, d - 1), hi_max - 2)
        end = start + 2
        if start < cursor or not (start <= d <= end) or end > hi_max:
            raise ResolutionError(
                "observed alternatives are too close on the grid to isolate; refine the grid"
            )
        runs.extend(_chop(cursor, start - 1, max_len))
        runs.append((start, end))
        cursor = end + 1
    runs.extend(_chop(cursor, num_levels - 1, max_len))
    return runs


def _heights_of_subgraph(num_nodes: int, arcs: list[tuple[int, int, bool]]) -> np.ndarray:
    """Minimal-height ranks of an arbitrary small arc list (u at-least v)."""
    adj = np.zeros((num_nodes, num_nodes), dtype=bool)
    for u, v, _ in arcs:
        adj[u, v] = True
    num, labels = connected_components(csr_matrix(adj.astype(np.int8)), directed=True, connection="strong")
    lift: dict[int, dict[int, int]] = {}
    for u, v, strict in arcs:
        cu, cv = int(labels[u]), int(labels[v])
        if cu == cv:
            if strict:
                raise PreconditionError("data is not rationalizable")
            continue
        lift.setdefault(cu, {})
        lift[cu][cv] = max(lift[cu].get(cv, 0), int(strict))
    out_count = np.zeros(num, dtype=int)
    waiters: dict[int, list[int]] = {}
    for cu, targets in lift.items():
        out_count[cu] = len(targets)
        for cv in targets:
            waiters.setdefault(cv, []).append(cu)
    ranks = np.zeros(num, dtype=np.int64)
    ready = sorted(np.nonzero(out_count == 0)[0].tolist())
    done = 0
    while ready:
        comp = ready.pop()
        done += 1
        ranks[comp] = max((ranks[cv] + w for cv, w in lift.get(comp, {}).items()), default=0)
        for waiter in waiters.get(comp, []):
            out_count[waiter] -= 1
            if out_count[waiter] == 0:
                ready.append(waiter)
    if done != num:
        raise PreconditionError("data is not rationalizable")
    return ranks[labels]


def _indifference_from_relation(r: RevealedRelation) -> Preference:
    space = r.space
    if space.kind != "euclidean_grid":
        raise ConfigurationError("the indifference construction needs a euclidean grid space")
    data = r.data_edges()
    stage = max((e.pair_index or 1 for e in data), default=1)
    desc = space.descriptor
    dims, res = desc["dims"], desc["resolution"]
    bounds = np.asarray(desc["bounds"], dtype=float)
    steps = (bounds[:, 1] - bounds[:, 0]) / (res - 1)
    cell_diameter = max(1.0 / (2.0 * stage), 2.0 * float(steps.max()))

    data_nodes = sorted({e.x for e in data} | {e.y for e in data})
    node_pos = {node: i for i, node in enumerate(data_nodes)}
    local_arcs = [(node_pos[e.x], node_pos[e.y], e.strict) for e in data]
    if data_nodes:
        local = _heights_of_subgraph(len(data_nodes), local_arcs)
        top = max(int(local.max()), 1)
        anchor_vals = {node: (2.0 * local[i] - local.max()) / top for node, i in node_pos.items()}
    else:
        anchor_vals = {}

    levels = np.array(np.unravel_index(np.arange(space.num_points), (res,) * dims)).T
    axis_runs, level_to_run = [], []
    for d in range(dims):
        max_len = max(3, int(cell_diameter / steps[d] + 1e-9) + 1)
        data_levels = [int(levels[node, d]) for node in data_nodes]
        runs = _partition_axis(res, data_levels, max_len)
        axis_runs.append(runs)
        lookup = np.empty(res, dtype=int)
        for rid, (lo, hi) in enumerate(runs):
            lookup[lo:hi + 1] = rid
        level_to_run.append(lookup)

    cells: dict[tuple, list[int]] = {}
    for idx in range(space.num_points):
        key = tuple(int(level_to_run[d][levels[idx, d]]) for d in range(dims))
        cells.setdefault(key, []).append(idx)
    cell_of_node = {}
    for node in data_nodes:
        key = tuple(int(level_to_run[d][levels[node, d]]) for d in range(dims))
        if key in cell_of_node.values():
            raise ResolutionError("two observed alternatives share a cell; refine the grid")
        cell_of_node[node] = key
    occupied = {key: node for node, key in cell_of_node.items()}

    axes = [np.linspace(bounds[d, 0], bounds[d, 1], res) for d in range(dims)]
    values = np.zeros(space.num_points)
    for key, members in cells.items():
        center = np.array(
            [(axes[d][axis_runs[d][key[d]][0]] + axes[d][axis_runs[d][key[d]][1]]) / 2.0 for d in range(dims)]
        )
        anchor = occupied.get(key)
        free = [i for i in members if i != anchor]
        free.sort(key=lambda i: (float(np.abs(space.points[i] - center).max()), i))
        if anchor is not None:
            values[anchor] = anchor_vals[anchor]
            if len(free) < 2:
                raise ResolutionError("cell around an observed alternative is too small for the bands")
        if len(free) >= 2:
            values[free[0]] = 2.0
            values[free[1]] = -2.0
            for i in free[2:]:
                values[i] = 0.0
        elif free:
            values[free[0]] = 0.0
    return from_utility(space, values)


def indifference_construction(e: ExperimentSequence, c: ChoiceSequence) -> Preference:
    """A rationalization built to sit near total indifference.

    Partitions the grid into cells shrinking with the data length, keeps
    each observed alternative alone in its cell at a mid-band value, and
    plants a high and a low band point inside every cell, so the output
    strongly rationalizes the data while its graph is dense in X times X.
    """
    r = revealed_relation(e, c, c.mode, monotone="none")
    _require_consistent(r)
    return _indifference_from_relation(r)


# ---------------------------------------------------------------------------
# linear utility classes


@dataclass(frozen=True)
class EuResult:
    """Outcome of the linear-index fit: a unit vector over prizes, or failure."""

    status: str  # feasible | degenerate | infeasible
    index: np.ndarray | None
    margin: float


@dataclass(frozen=True)
class LipschitzResult:
    status: str  # feasible | degenerate | infeasible
    values: np.ndarray | None
    margin: float


def _unique_edges(r: RevealedRelation) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    strict = sorted(r.strict_edges)
    weak = sorted(r.weak_edges - r.strict_edges)
    return weak, strict


def _solve_margin_lp(diffs_weak: np.ndarray, diffs_strict: np.ndarray, num_vars: int,
                     extra_eq: tuple[np.ndarray, float] | None, box: float,
                     tie_break: np.ndarray) -> tuple[str, np.ndarray | None, float]:
    """Two-phase LP: maximize the least strict slack, then settle ties.

    Weak rows require d.u >= 0, strict rows d.u >= t with t maximized;
    with no strict rows the slack attaches to the weak rows instead. The
    second phase fixes the optimal slack and maximizes a fixed linear
    functional so the reported vector is deterministic.
    """
    num_weak, num_strict = len(diffs_weak), len(diffs_strict)
    slack_on = diffs_strict if num_strict else diffs_weak
    plain = diffs_weak if num_strict else np.zeros((0, num_vars))

    if len(slack_on):
        a_rows, b_vals = [], []
        for d in plain:
            a_rows.append(np.append(-d, 0.0))
            b_vals.append(0.0)
        for d in slack_on:
            a_rows.append(np.append(-d, 1.0))
            b_vals.append(0.0)
        a_eq = [np.append(extra_eq[0], 0.0)] if extra_eq is not None else None
        b_eq = [extra_eq[1]] if extra_eq is not None else None
        res = linprog(
            np.append(np.zeros(num_vars), -1.0),
            A_ub=np.array(a_rows),
            b_ub=np.array(b_vals),
            A_eq=np.array(a_eq) if a_eq else None,
            b_eq=b_eq,
            bounds=[(-box, box)] * num_vars + [(None, None)],
            method="highs",
        )
        if res.status == 2:
            return "infeasible", None, float("-inf")
        if res.status != 0:
            raise DomainError(f"margin program failed with solver status {res.status}")
        t_star = float(res.x[-1])
        if num_strict and t_star < _ZERO_TOL:
            return "infeasible", None, t_star
    else:
        t_star = 0.0

    # phase 2: fix the slack, settle the vector deterministically
    t_fix = t_star - max(1e-12, abs(t_star) * 1e-9)
    a2, b2 = [], []
    for d in plain:
        a2.append(-d)
        b2.append(0.0)
    for d in slack_on:
        a2.append(-d)
        b2.append(-t_fix)
    res2 = linprog(
        -tie_break,
        A_ub=np.array(a2) if a2 else None,
        b_ub=np.array(b2) if b2 else None,
        A_eq=np.array([extra_eq[0]]) if extra_eq is not None else None,
        b_eq=np.array([extra_eq[1]]) if extra_eq is not None else None,
        bounds=[(-box, box)] * num_vars,
        method="highs",
    )
    if res2.status == 2:
        return "infeasible", None, t_star
    if res2.status != 0:
        raise DomainError(f"tie-break program failed with solver status {res2.status}")
    u = np.asarray(res2.x)
    status = "feasible"
    if (num_weak or num_strict) and t_star < _MARGIN_FLOOR:
        status = "degenerate"
    return status, u, t_star


def _eu_from_edges(r: RevealedRelation) -> EuResult:
    space = r.space
    if space.kind != "lottery_simplex":
        raise ConfigurationError("linear-index fitting needs a lottery_simplex space")
    weak, strict = _unique_edges(r)
    num_prizes = space.points.shape[1]
    dw = np.array([space.points[i] - space.points[j] for i, j in weak]).reshape(len(weak), num_prizes)
    ds = np.array([space.points[i] - space.points[j] for i, j in strict]).reshape(len(strict), num_prizes)
    tie_break = np.concatenate([dw, ds]).sum(axis=0) if (len(dw) + len(ds)) else np.zeros(num_prizes)
    if not tie_break.any():
        tie_break = np.linspace(1.0, -1.0, num_prizes)  # fixed fallback functional
    status, u, t_star = _solve_margin_lp(dw, ds, num_prizes, (np.ones(num_prizes), 0.0), 1.0, tie_break)
    if status == "infeasible":
        return EuResult("infeasible", None, 0.0)
    norm = float(np.linalg.norm(u))
    if norm < _MARGIN_FLOOR:
        return EuResult("degenerate", np.zeros(num_prizes), 0.0)
    index = u / norm
    margin = float((ds @ index).min()) if len(ds) else 0.0
    return EuResult(status, index, max(margin, 0.0))


def eu_rationalize(e: ExperimentSequence, c: ChoiceSequence) -> EuResult:
    """Fit a linear prize index to lottery choice data.

    Returns a unit-norm, zero-sum index whose expected values respect
    every revealed comparison; strict comparisons hold with maximized
    minimum margin. Infeasibility is reported as a value, not an error.
    """
    r = revealed_relation(e, c, c.mode, monotone="none")
    return _eu_from_edges(r)


def eu_preference(space: OrderedSpace, index: np.ndarray) -> Preference:
    """The preference a prize index induces on a lottery space."""
    return from_utility(space, space.points @ np.asarray(index, dtype=float))


def lipschitz_rationalize(e: ExperimentSequence, c: ChoiceSequence, a: float, b: float) -> LipschitzResult:
    """Fit grid utility values with coordinatewise slope bounds.

    Neighboring grid points one level apart in coordinate d must differ by
    between a*step_d and b*step_d; revealed comparisons enter as in the
    linear-index fit. The lowest corner is pinned to zero.
    """
    if not (0 < a < b):
        raise ConfigurationError("need 0 < a < b")
    space = e.space
    if space.kind != "euclidean_grid":
        raise ConfigurationError("slope-band fitting needs a euclidean_grid space")
    r = revealed_relation(e, c, c.mode, monotone="none")
    weak, strict = _unique_edges(r)
    n = space.num_points
    desc = space.descriptor
    dims, res = desc["dims"], desc["resolution"]
    bounds_arr = np.asarray(desc["bounds"], dtype=float)
    steps = (bounds_arr[:, 1] - bounds_arr[:, 0]) / (res - 1)
    strides = [res ** (dims - 1 - d) for d in range(dims)]
    levels = np.array(np.unravel_index(np.arange(n), (res,) * dims)).T

    def row(i, j):
        d = np.zeros(n)
        d[i] += 1.0
        d[j] -= 1.0
        return d

    dw = [row(i, j) for i, j in weak]
    ds = [row(i, j) for i, j in strict]
    # slope band rows are hard constraints in both phases: fold them into the
    # weak list as shifted inequalities via auxiliary handling below
    band_rows, band_rhs = [], []
    for p in range(n):
        for d in range(dims):
            if levels[p, d] + 1 < res:
                q = p + strides[d]
                up = row(q, p)
                band_rows.append(up)
                band_rhs.append(a * steps[d])     # u_q - u_p >= a*step
                band_rows.append(-up)
                band_rhs.append(-b * steps[d])    # u_q - u_p <= b*step

    num_weak, num_strict = len(dw), len(ds)
    slack_on = ds if num_strict else dw
    plain = dw if num_strict else []
    a_rows, b_vals = [], []
    for v in plain:
        a_rows.append(np.append(-v, 0.0))
        b_vals.append(0.0)
    for v in slack_on:
        a_rows.append(np.append(-v, 1.0))
        b_vals.append(0.0)
    for v, rhs in zip(band_rows, band_rhs):
        a_rows.append(np.append(-v, 0.0))
        b_vals.append(-rhs)
    pin = np.zeros(n + 1)
    pin[0] = 1.0
    span = float((np.abs(bounds_arr).max() + 1.0) * b * dims * res)
    if slack_on:
        cost = np.append(np.zeros(n), -1.0)
        t_bounds = (None, None)
    else:  # nothing carries slack; settle on the lowest band staircase
        cost = np.append(np.ones(n), 0.0)
        t_bounds = (0.0, 0.0)
    res1 = linprog(cost, A_ub=np.array(a_rows), b_ub=np.array(b_vals),
                   A_eq=pin[None, :], b_eq=[0.0],
                   bounds=[(-span, span)] * n + [t_bounds], method="highs")
    if res1.status == 2:
        return LipschitzResult("infeasible", None, 0.0)
    if res1.status != 0:
        raise DomainError(f"band program failed with solver status {res1.status}")
    t_star = float(res1.x[-1]) if slack_on else 0.0
    if num_strict and t_star < _ZERO_TOL:
        return LipschitzResult("infeasible", None, 0.0)
    values = np.asarray(res1.x[:n])
    status = "feasible"
    if (num_weak or num_strict) and t_star < _MARGIN_FLOOR:
        status = "degenerate"
    margin = float(min(values[i] - values[j] for i, j in strict)) if strict else 0.0
    return LipschitzResult(status, values, max(margin, 0.0))


# ---------------------------------------------------------------------------
# rationalization replay and diameter


def rationalizes(p: Preference, e: ExperimentSequence, c: ChoiceSequence) -> bool:
    """Replay the data against a preference's optimal sets.

    Weak mode asks that every observed choice be optimal; strong mode asks
    that the observed set equal the optimal set.
    """
    for (x, y), chosen in zip(e.pairs, c.choices):
        optimal = set(p.optimal_of((x, y)))
        if c.mode == STRONG:
            if set(chosen) != optimal:
                return False
        else:
            if not set(chosen) <= optimal:
                return False
    return True


def all_total_preorders(n: int) -> np.ndarray:
    """Every total preorder on n points, as dense rank rows (higher = better)."""
    if n > 7:
        raise CapacityError("full enumeration is limited to 7 points")
    grid = np.array(list(itertools.product(range(n), repeat=n)), dtype=np.int8)
    maxv = grid.max(axis=1).astype(np.int64)
    present = np.zeros((grid.shape[0], n), dtype=bool)
    present[np.arange(grid.shape[0])[:, None], grid.astype(np.int64)] = True
    keep = present.sum(axis=1) == maxv + 1
    return grid[keep]


def _replay_mask(ranks: np.ndarray, e: ExperimentSequence, c: ChoiceSequence) -> np.ndarray:
    """Boolean row filter: which rank rows rationalize the data."""
    ok = np.ones(ranks.shape[0], dtype=bool)
    for (x, y), chosen in zip(e.pairs, c.choices):
        cx, cy = ranks[:, x].astype(np.int64), ranks[:, y].astype(np.int64)
        chose = set(chosen)
        if c.mode == STRONG:
            if chose == {x, y}:
                ok &= cx == cy
            elif chose == {x}:
                ok &= cx > cy
            else:
                ok &= cy > cx
        else:
            if x in chose:
                ok &= cx >= cy
            if y in chose:
                ok &= cy >= cx
    return ok


def brute_force_rationalizations(e: ExperimentSequence, c: ChoiceSequence) -> np.ndarray:
    """Rank rows of every rationalizing total preorder (spaces up to 7 points)."""
    ranks = all_total_preorders(e.space.num_points)
    return ranks[_replay_mask(ranks, e, c)]


def _set_diameter(space: OrderedSpace, ranks: np.ndarray) -> float:
    """Exact max pairwise graph distance over a set of rank rows."""
    uniq = np.unique(ranks, axis=0)
    if uniq.shape[0] <= 1:
        return 0.0
    graphs = (uniq[:, :, None] >= uniq[:, None, :]).astype(np.float32)
    union = graphs.astype(bool).any(axis=0)
    distances = space.distance_matrix
    radii = space.distance_values

    def ok(radius: float) -> bool:
        near = (distances <= radius + _ZERO_TOL).astype(np.float32)
        dilated = (near @ graphs @ near) > 0.5
        meet = dilated.all(axis=0)
        return bool(not (union & ~meet).any())

    lo, hi = 0, len(radii) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(float(radii[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(radii[lo])


@dataclass(frozen=True)
class DiameterResult:
    """Diameter of the rationalization set, with the mode that produced it."""

    value: float
    method: str  # exact | sampled
    num_candidates: int

    def __float__(self) -> float:
        return self.value


_POLICY_CLASSES = {"all": "none", "weak_monotone": "weak", "strict_monotone": "strict"}


def diameter_estimate(
    e: ExperimentSequence,
    c: ChoiceSequence,
    policy_class: str = "all",
    num_samples: int = 200,
    seed: int = 0,
) -> DiameterResult:
    """How far apart two rationalizations of the data can still be.

    Exact on spaces of at most 8 points when policy_class is "all"
    (exhaustive enumeration of total preorders filtered by replay);
    otherwise a sampled lower bound from seeded random extensions mixed
    with the two extremal height assignments.
    """
    if policy_class not in _POLICY_CLASSES:
        raise ConfigurationError(f"unknown policy class {policy_class!r}")
    space = e.space
    r = revealed_relation(e, c, c.mode, monotone=_POLICY_CLASSES[policy_class])
    res = check_consistency(r)
    if not res.consistent:
        raise PreconditionError(f"data is not rationalizable; witness cycle {res.witness}")
    n = space.num_points
    if policy_class == "all" and n <= 8:
        if n <= 7:
            ranks = brute_force_rationalizations(e, c)
        else:
            kept = []
            block = 1 << 18
            for start in range(0, n**n, block):
                flat = np.arange(start, min(start + block, n**n))
                rows = np.array(np.unravel_index(flat, (n,) * n)).T.astype(np.int8)
                maxv = rows.max(axis=1).astype(np.int64)
                present = np.zeros((rows.shape[0], n), dtype=bool)
                present[np.arange(rows.shape[0])[:, None], rows.astype(np.int64)] = True
                rows = rows[present.sum(axis=1) == maxv + 1]
                rows = rows[_replay_mask(rows, e, c)]
                if rows.size:
                    kept.append(rows)
            ranks = np.concatenate(kept) if kept else np.zeros((0, n), dtype=np.int8)
        return DiameterResult(_set_diameter(space, ranks), "exact", int(ranks.shape[0]))

    cond = r.condensation
    draws = [_comp_ranks_min_height(cond)[cond.labels], _comp_ranks_max_height(cond)[cond.labels]]
    rng = np.random.default_rng(seed)
    probs = [0.0, 0.25, 0.5, 0.85]
    for i in range(max(0, num_samples - len(draws))):
        draws.append(sample_extension(r, rng, merge_prob=probs[i % len(probs)]).rank)
    ranks = np.array([np.asarray(d, dtype=np.int64) for d in draws])
    return DiameterResult(_set_diameter(space, ranks), "sampled", int(np.unique(ranks, axis=0).shape[0]))


def result_to_json(
    policy: RationalizationPolicy | str,
    consistent: bool,
    preference: Preference | None = None,
    witness: tuple[int, ...] | None = None,
    delta_c_to_target: float | None = None,
    diameter: DiameterResult | None = None,
) -> str:
    """JSON document for one rationalization outcome."""
    doc: dict = {
        "policy": policy if isinstance(policy, str) else policy.tag,
        "consistent": bool(consistent),
    }
    if preference is not None:
        doc["ranks"] = [int(v) for v in preference.rank]
    if witness is not None:
        doc["witness_cycle"] = [int(v) for v in witness]
    if delta_c_to_target is not None:
        doc["delta_c_to_target"] = float(delta_c_to_target)
    if diameter is not None:
        doc["diameter"] = {"value": diameter.value, "method": diameter.method}
    return json.dumps(doc, indent=2)
