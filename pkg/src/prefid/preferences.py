"""Total preorders, structural property tests, and the convergence metric.

Preferences are stored as dense integer ranks (higher = weakly better),
which makes completeness and transitivity hold by construction. Possibly
intransitive limit relations are plain boolean matrices.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError
from .spaces import OrderedSpace, space_from_descriptor, space_to_descriptor

__all__ = [
    "Preference",
    "BinaryRelation",
    "from_utility",
    "total_indifference",
    "is_weakly_monotone",
    "is_strictly_monotone",
    "is_locally_strict",
    "is_quasitransitive",
    "closed_convergence_distance",
    "li_ls_limit",
    "preference_to_json",
    "preference_from_json",
    "relation_pairs",
    "graph_to_csv",
]

_EPS = 1e-12


def same_space(a: OrderedSpace, b: OrderedSpace) -> bool:
    return a is b or (a.kind == b.kind and a.points.shape == b.points.shape and np.array_equal(a.points, b.points))


@dataclass(frozen=True, eq=False)
class Preference:
    """A complete transitive relation, represented by ranks.

    Attributes:
        space: the OrderedSpace the preference lives on.
        rank: (n,) int array, dense from 0; rank[i] >= rank[j] means i is
            weakly preferred to j.
    """

    space: OrderedSpace
    rank: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rank)
        if r.shape != (self.space.num_points,):
            raise DomainError("rank must assign one integer per point")
        # densify so equality of preorders is array equality
        _, dense = np.unique(r, return_inverse=True)
        dense = np.ascontiguousarray(dense.astype(np.int64))
        dense.setflags(write=False)
        object.__setattr__(self, "rank", dense)

    @cached_property
    def graph(self) -> np.ndarray:
        """Boolean matrix of the relation: [i, j] true iff i weakly preferred to j."""
        g = self.rank[:, None] >= self.rank[None, :]
        g.setflags(write=False)
        return g

    @cached_property
    def strict(self) -> np.ndarray:
        s = self.rank[:, None] > self.rank[None, :]
        s.setflags(write=False)
        return s

    def relation(self) -> "BinaryRelation":
        return BinaryRelation(self.space, self.graph)

    def num_classes(self) -> int:
        return int(self.rank.max()) + 1

    def optimal_of(self, indices) -> list[int]:
        """The maximal elements of a menu (list of point indices)."""
        idx = list(indices)
        best = max(self.rank[i] for i in idx)
        return [i for i in idx if self.rank[i] == best]

    def __eq__(self, other):
        if not isinstance(other, Preference):
            return NotImplemented
        return same_space(self.space, other.space) and np.array_equal(self.rank, other.rank)

    def __hash__(self):
        return hash((self.space.kind, self.space.num_points, self.rank.tobytes()))


@dataclass(frozen=True, eq=False)
class BinaryRelation:
    """An arbitrary relation on a space's points, as a boolean matrix."""

    space: OrderedSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=bool)
        n = self.space.num_points
        if m.shape != (n, n):
            raise DomainError("relation matrix shape must be (n, n)")
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def pairs(self) -> set[tuple[int, int]]:
        ii, jj = np.nonzero(self.matrix)
        return {(int(i), int(j)) for i, j in zip(ii, jj)}

    def is_complete(self) -> bool:
        return bool((self.matrix | self.matrix.T).all())

    def __eq__(self, other):
        if not isinstance(other, BinaryRelation):
            return NotImplemented
        return same_space(self.space, other.space) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.space.kind, self.space.num_points, self.matrix.tobytes()))


def _as_relation(obj) -> BinaryRelation:
    if isinstance(obj, Preference):
        return obj.relation()
    if isinstance(obj, BinaryRelation):
        return obj
    raise DomainError(f"expected Preference or BinaryRelation, got {type(obj).__name__}")


def from_utility(space: OrderedSpace, values) -> Preference:
    """Preference represented by a utility assignment.

    `values` may be an array over point indices, a dict index -> value, or
    a callable on coordinate vectors. Exactly equal values tie.
    """
    if callable(values):
        vals = np.array([float(values(p)) for p in space.points])
    elif isinstance(values, dict):
        try:
            vals = np.array([float(values[i]) for i in range(space.num_points)])
        except KeyError as miss:
            raise DomainError(f"missing value for point {miss.args[0]}") from None
    else:
        vals = np.asarray(values, dtype=float)
        if vals.shape != (space.num_points,):
            raise DomainError("need one value per point")
    if not np.isfinite(vals).all():
        raise DomainError("utility values must be finite")
    _, ranks = np.unique(vals, return_inverse=True)
    return Preference(space, ranks)


def total_indifference(space: OrderedSpace) -> Preference:
    """The degenerate preference whose graph is all of X times X."""
    return Preference(space, np.zeros(space.num_points, dtype=int))


def is_weakly_monotone(p: Preference) -> bool:
    """True iff every space-order pair is weakly preferred."""
    return bool(not (p.space.weak_order & ~p.graph).any())


def is_strictly_monotone(p: Preference) -> bool:
    """True iff every configured strict-dominance pair is strictly preferred."""
    return bool(not (p.space.strict_order & ~p.strict).any())


def is_locally_strict(p: Preference, radius: float):
    """Test that every weak pair has a strict pair within `radius` of it.

    Returns (ok, violating (i, j) pairs). Neighborhoods are closed
    max-metric balls around each side of the pair.
    """
    near = (p.space.distance_matrix <= radius + _EPS).astype(np.float64)
    strict = p.strict.astype(np.float64)
    witnessed = (near @ strict @ near) > 0.5
    bad = p.graph & ~witnessed
    ii, jj = np.nonzero(bad)
    violations = [(int(i), int(j)) for i, j in zip(ii, jj)]
    return len(violations) == 0, violations


def is_quasitransitive(r) -> bool:
    """True iff the strict part of a complete relation is transitive."""
    rel = _as_relation(r)
    m = rel.matrix
    if not rel.is_complete():
        raise DomainError("quasitransitivity is defined for complete relations")
    strict = m & ~m.T
    two_step = (strict.astype(np.float64) @ strict.astype(np.float64)) > 0.5
    return bool(not (two_step & ~strict).any())


def _dilate(graph_f: np.ndarray, near_f: np.ndarray) -> np.ndarray:
    # pairs whose ball meets the graph, under the product max metric
    return (near_f @ graph_f @ near_f) > 0.5


def closed_convergence_distance(p, q) -> float:
    """Hausdorff distance between two relation graphs in X times X.

    The product space carries the max of the two coordinate distances, so
    the distance is found by a threshold search over the finite set of
    point distances, using boolean dilation at each candidate radius.
    """
    rp, rq = _as_relation(p), _as_relation(q)
    if not same_space(rp.space, rq.space):
        raise DomainError("relations live on different spaces")
    if not rp.matrix.any() or not rq.matrix.any():
        raise DomainError("closed convergence distance needs nonempty relations")
    if np.array_equal(rp.matrix, rq.matrix):
        return 0.0
    space = rp.space
    D = space.distance_matrix
    radii = space.distance_values
    gp = rp.matrix.astype(np.float64)
    gq = rq.matrix.astype(np.float64)

    def within(r: float) -> bool:
        near = (D <= r + _EPS).astype(np.float64)
        return bool(
            not (rp.matrix & ~_dilate(gq, near)).any()
            and not (rq.matrix & ~_dilate(gp, near)).any()
        )

    lo, hi = 0, len(radii) - 1
    # radii[hi] always works: it is the diameter of X
    while lo < hi:
        mid = (lo + hi) // 2
        if within(float(radii[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(radii[lo])


def li_ls_limit(seq, radius_schedule, tail_starts=None):
    """Topological lower and upper limits of a relation sequence.

    The finite-sequence reading of "all but finitely many" stretches the
    decreasing radius schedule across the sequence: the j-th radius
    constrains every term from index floor(j*N/m) on (Li) or some term
    from that index on (Ls). Explicit `tail_starts` (one 0-based index per
    radius) override the default stretch.
    """
    rels = [_as_relation(r) for r in seq]
    if not rels:
        raise DomainError("empty sequence")
    space = rels[0].space
    for r in rels[1:]:
        if not same_space(space, r.space):
            raise DomainError("relations live on different spaces")
    schedule = [float(r) for r in radius_schedule]
    if not schedule:
        raise DomainError("empty radius schedule")
    if any(b > a + _EPS for a, b in zip(schedule, schedule[1:])):
        raise DomainError("radius schedule must be decreasing")
    n_terms, m = len(rels), len(schedule)
    if tail_starts is None:
        tail_starts = [min(n_terms - 1, (j * n_terms) // m) for j in range(m)]
    else:
        tail_starts = [int(t) for t in tail_starts]
        if len(tail_starts) != m or any(t < 0 or t >= n_terms for t in tail_starts):
            raise DomainError("need one valid 0-based tail start per radius")
    D = space.distance_matrix
    n = space.num_points
    li = np.ones((n, n), dtype=bool)
    ls = np.ones((n, n), dtype=bool)
    for r, start in zip(schedule, tail_starts):
        near = (D <= r + _EPS).astype(np.float64)
        met_all = np.ones((n, n), dtype=bool)
        met_any = np.zeros((n, n), dtype=bool)
        for rel in rels[start:]:
            met = _dilate(rel.matrix.astype(np.float64), near)
            met_all &= met
            met_any |= met
        li &= met_all
        ls &= met_any
    return BinaryRelation(space, li), BinaryRelation(space, ls)


def preference_to_json(p: Preference) -> str:
    doc = {"space_ref": space_to_descriptor(p.space), "ranks": [int(r) for r in p.rank]}
    return json.dumps(doc, indent=2)


def preference_from_json(text: str, space: OrderedSpace | None = None) -> Preference:
    doc = json.loads(text)
    sp = space if space is not None else space_from_descriptor(doc["space_ref"])
    return Preference(sp, np.asarray(doc["ranks"], dtype=int))


def relation_pairs(r) -> list[list[int]]:
    """Sorted pair list of a relation, for JSON embedding."""
    rel = _as_relation(r)
    return [[int(i), int(j)] for i, j in sorted(rel.pairs)]


def graph_to_csv(r) -> str:
    """CSV text of a relation's graph, columns (i, j)."""
    rel = _as_relation(r)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["i", "j"])
    for i, j in sorted(rel.pairs):
        writer.writerow([i, j])
    return buf.getvalue()
