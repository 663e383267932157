"""Discretized ordered metric spaces.

Every space is a finite list of coordinate vectors with a partial order,
a configured strict-dominance order, the max-coordinate metric, and an
optional totally ordered reference chain used for certainty equivalents.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CapacityError, ConfigurationError, DomainError

__all__ = [
    "OrderedSpace",
    "DenseSubset",
    "make_grid_euclidean",
    "make_lottery_simplex",
    "make_dated_rewards",
    "make_aa_acts",
    "from_points",
    "dense_subset",
    "fosd_compare",
    "squeeze_envelopes",
    "check_countable_order_property",
    "space_to_descriptor",
    "space_from_descriptor",
]

GREATER = "greater"
LESS = "less"
EQUAL = "equal"
INCOMPARABLE = "incomparable"

_AA_POINT_BUDGET = 4096


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class OrderedSpace:
    """A finite set of alternatives with a partial order and a metric.

    Attributes:
        kind: one of euclidean_grid | lottery_simplex | dated_rewards |
            aa_acts | euclidean_points.
        points: (n, d) float array, one coordinate vector per alternative.
        weak_order: (n, n) bool, entry [i, j] true iff point i >= point j
            in the space's partial order.
        strict_order: (n, n) bool, the configured strict-dominance order
            (coordinatewise >> on euclidean grids, the strict part of the
            partial order elsewhere).
        chain: ascending tuple of point indices forming the reference
            chain, empty when the space has none.
        step: scalar grid resolution, the tolerance unit for convergence
            statements about this space.
        descriptor: construction parameters, enough to rebuild the space.
    """

    kind: str
    points: np.ndarray
    weak_order: np.ndarray
    strict_order: np.ndarray
    chain: tuple[int, ...]
    step: float
    descriptor: dict = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen(np.asarray(self.points, dtype=float)))
        object.__setattr__(self, "weak_order", _frozen(np.asarray(self.weak_order, dtype=bool)))
        object.__setattr__(self, "strict_order", _frozen(np.asarray(self.strict_order, dtype=bool)))

    @property
    def num_points(self) -> int:
        return self.points.shape[0]

    def __len__(self) -> int:
        return self.num_points

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """Pairwise max-coordinate distances, shape (n, n)."""
        diff = self.points[:, None, :] - self.points[None, :, :]
        return _frozen(np.abs(diff).max(axis=2))

    @cached_property
    def distance_values(self) -> np.ndarray:
        """Sorted distinct values of the distance matrix."""
        return _frozen(np.unique(self.distance_matrix))

    def index_of(self, vector: Sequence[float], tol: float = 1e-9) -> int:
        """Index of the point matching `vector` within `tol`, else DomainError."""
        v = np.asarray(vector, dtype=float)
        hits = np.nonzero(np.abs(self.points - v).max(axis=1) <= tol)[0]
        if hits.size == 0:
            raise DomainError(f"no point within {tol} of {vector!r}")
        return int(hits[0])


@dataclass(frozen=True)
class DenseSubset:
    """A subset of a space's points together with its exact covering radius."""

    space: OrderedSpace
    members: tuple[int, ...]
    covering_radius: float


def _validate_chain(points: np.ndarray, weak: np.ndarray, strict: np.ndarray, chain: Sequence[int]) -> None:
    # ascending, strictly ordered, and bounding the whole space
    chain = list(chain)
    if len(chain) < 2:
        raise ConfigurationError("reference chain needs at least 2 elements")
    for lo, hi in zip(chain, chain[1:]):
        if not strict[hi, lo]:
            raise ConfigurationError("reference chain is not strictly increasing")
    top, bottom = chain[-1], chain[0]
    if not weak[top, :].all() or not weak[:, bottom].all():
        raise ConfigurationError("reference chain does not bound the space")


def _order_from_aligned(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Weak/strict order matrices from coordinates on which >= is the order."""
    diff = coords[:, None, :] - coords[None, :, :]
    weak = (diff >= 0).all(axis=2)
    strict_all = (diff > 0).all(axis=2)
    return weak, strict_all


def make_grid_euclidean(dims: int, resolution: int, bounds) -> OrderedSpace:
    """Regular lattice on a box, ordered coordinatewise.

    `bounds` is either one (lo, hi) pair applied to every dimension or a
    sequence of per-dimension pairs. The strict order is coordinatewise >>
    (strictly greater in every coordinate).
    """
    if dims < 1 or resolution < 2:
        raise ConfigurationError("need dims >= 1 and resolution >= 2")
    bounds = np.asarray(bounds, dtype=float)
    if bounds.ndim == 1:
        bounds = np.tile(bounds, (dims, 1))
    if bounds.shape != (dims, 2) or not (bounds[:, 1] > bounds[:, 0]).all():
        raise ConfigurationError("bounds must be nondegenerate intervals, one per dim")
    axes = [np.linspace(bounds[i, 0], bounds[i, 1], resolution) for i in range(dims)]
    levels = list(itertools.product(range(resolution), repeat=dims))
    points = np.array([[axes[i][lv[i]] for i in range(dims)] for lv in levels])
    weak, strict = _order_from_aligned(points)
    # equal-coordinates diagonal: level (l, ..., l) for each l
    ratio = (resolution**dims - 1) // (resolution - 1)
    chain = tuple(l * ratio for l in range(resolution))
    step = float((bounds[:, 1] - bounds[:, 0]).max() / (resolution - 1))
    desc = {"kind": "euclidean_grid", "dims": dims, "resolution": resolution, "bounds": bounds.tolist()}
    _validate_chain(points, weak, strict, chain)
    return OrderedSpace("euclidean_grid", points, weak, strict, chain, step, desc)


def _compositions(total: int, parts: int):
    # all nonnegative integer vectors of given length summing to total
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def make_lottery_simplex(num_prizes: int, resolution: int) -> OrderedSpace:
    """Probability grid over a ranked prize set, ordered by stochastic dominance.

    Prize 0 is the best prize. Cumulative comparisons are done on integer
    counts, so the dominance relation is exact.
    """
    if num_prizes < 2:
        raise ConfigurationError("need num_prizes >= 2")
    if resolution < 1:
        raise ConfigurationError("need resolution >= 1")
    counts = np.array(list(_compositions(resolution, num_prizes)), dtype=int)
    points = counts / resolution
    cum = np.cumsum(counts, axis=1)  # cumulative from the best prize
    ge = (cum[:, None, :] >= cum[None, :, :]).all(axis=2)
    eq = (counts[:, None, :] == counts[None, :, :]).all(axis=2)
    weak = ge
    strict = ge & ~eq
    # chain: two-point mixtures of worst and best, worst-heavy first
    chain = []
    for m in range(resolution + 1):
        target = np.zeros(num_prizes, dtype=int)
        target[0] = m
        target[-1] = resolution - m
        chain.append(int(np.nonzero((counts == target).all(axis=1))[0][0]))
    desc = {"kind": "lottery_simplex", "num_prizes": num_prizes, "resolution": resolution}
    space = OrderedSpace("lottery_simplex", points, weak, strict, tuple(chain), 1.0 / resolution, desc)
    _validate_chain(points, weak, strict, chain)
    return space


def make_dated_rewards(money_resolution: int, time_resolution: int, bounds) -> OrderedSpace:
    """Grid of (money, time) pairs: more money weakly better, earlier weakly better.

    `bounds` = ((money_lo, money_hi), (time_lo, time_hi)). The chain walks
    money up at the latest date, then time down at the highest money.
    """
    if money_resolution < 2 or time_resolution < 2:
        raise ConfigurationError("need both resolutions >= 2")
    bounds = np.asarray(bounds, dtype=float)
    if bounds.shape != (2, 2) or not (bounds[:, 1] > bounds[:, 0]).all():
        raise ConfigurationError("bounds must be ((money_lo, money_hi), (time_lo, time_hi))")
    money = np.linspace(bounds[0, 0], bounds[0, 1], money_resolution)
    times = np.linspace(bounds[1, 0], bounds[1, 1], time_resolution)
    points = np.array([(m, t) for m in money for t in times])
    aligned = np.column_stack([points[:, 0], -points[:, 1]])
    weak, _ = _order_from_aligned(aligned)
    eq = weak & weak.T
    strict = weak & ~eq
    chain = [mi * time_resolution + (time_resolution - 1) for mi in range(money_resolution)]
    chain += [(money_resolution - 1) * time_resolution + ti for ti in range(time_resolution - 2, -1, -1)]
    step = float(max((bounds[0, 1] - bounds[0, 0]) / (money_resolution - 1),
                     (bounds[1, 1] - bounds[1, 0]) / (time_resolution - 1)))
    desc = {
        "kind": "dated_rewards",
        "money_resolution": money_resolution,
        "time_resolution": time_resolution,
        "bounds": bounds.tolist(),
    }
    _validate_chain(points, weak, strict, chain)
    return OrderedSpace("dated_rewards", points, weak, strict, tuple(chain), step, desc)


def make_aa_acts(num_states: int, lottery: OrderedSpace, point_budget: int = _AA_POINT_BUDGET) -> OrderedSpace:
    """State-contingent lotteries ordered by statewise stochastic dominance.

    Points are concatenations of one lottery per state. Raises CapacityError
    when the product grid exceeds `point_budget` acts.
    """
    if num_states < 1:
        raise ConfigurationError("need num_states >= 1")
    if lottery.kind != "lottery_simplex":
        raise ConfigurationError("underlying space must be a lottery_simplex")
    m = lottery.num_points
    if m**num_states > point_budget:
        raise CapacityError(f"{m}^{num_states} acts exceed the budget of {point_budget}")
    combos = list(itertools.product(range(m), repeat=num_states))
    points = np.array([np.concatenate([lottery.points[i] for i in combo]) for combo in combos])
    lw = lottery.weak_order
    weak = np.ones((len(combos), len(combos)), dtype=bool)
    for s in range(num_states):
        idx = np.array([c[s] for c in combos])
        weak &= lw[np.ix_(idx, idx)]
    eq = weak & weak.T
    strict = weak & ~eq
    index_of = {c: i for i, c in enumerate(combos)}
    chain = tuple(index_of[(ci,) * num_states] for ci in lottery.chain)
    desc = {
        "kind": "aa_acts",
        "num_states": num_states,
        "num_prizes": lottery.descriptor["num_prizes"],
        "resolution": lottery.descriptor["resolution"],
    }
    _validate_chain(points, weak, strict, chain)
    return OrderedSpace("aa_acts", points, weak, strict, chain, lottery.step, desc)


def from_points(points, chain: Sequence[int] = ()) -> OrderedSpace:
    """Euclidean space over an explicit point list, ordered coordinatewise.

    For irregular alternatives sets (disconnected intervals, scattered
    points). `step` is the smallest positive pairwise distance.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.shape[0] < 2:
        raise ConfigurationError("need at least 2 points")
    weak, strict = _order_from_aligned(points)
    diff = np.abs(points[:, None, :] - points[None, :, :]).max(axis=2)
    off_diagonal = diff[~np.eye(points.shape[0], dtype=bool)]
    if (off_diagonal == 0).any():
        raise ConfigurationError("points must be distinct")
    desc = {"kind": "euclidean_points", "points": points.tolist()}
    if chain:
        _validate_chain(points, weak, strict, chain)
    return OrderedSpace("euclidean_points", points, weak, strict, tuple(chain), float(off_diagonal.min()), desc)


def dense_subset(space: OrderedSpace, members: Sequence[int] | None = None, stride: int = 1) -> DenseSubset:
    """Designate observed alternatives; covering radius is computed exactly.

    With no arguments the subset is the full point set (radius 0). A stride
    keeps every stride-th point index.
    """
    if members is None:
        members = range(0, space.num_points, stride)
    members = tuple(int(i) for i in members)
    if not members:
        raise DomainError("empty subset")
    if any(i < 0 or i >= space.num_points for i in members):
        raise DomainError("member index out of range")
    radius = float(space.distance_matrix[:, members].min(axis=1).max())
    return DenseSubset(space, members, radius)


def fosd_compare(x, y, tol: float = 1e-9):
    """Compare two probability vectors by first-order stochastic dominance.

    Index 0 is the best prize. Returns one of greater | less | equal |
    incomparable.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("need two probability vectors of equal length")
    for v in (x, y):
        if (v < -tol).any() or abs(v.sum() - 1.0) > tol:
            raise DomainError("input is not a probability vector")
    cx, cy = np.cumsum(x), np.cumsum(y)
    eps = 1e-12
    ge = bool((cx >= cy - eps).all())
    le = bool((cy >= cx - eps).all())
    if ge and le:
        return EQUAL
    if ge:
        return GREATER
    if le:
        return LESS
    return INCOMPARABLE


def _to_lattice_coords(space: OrderedSpace, seq: np.ndarray) -> np.ndarray:
    """Map points to coordinates on which the order is coordinatewise >=."""
    if space.kind in ("euclidean_grid", "euclidean_points"):
        return seq
    if space.kind == "dated_rewards":
        return np.column_stack([seq[:, 0], -seq[:, 1]])
    if space.kind == "lottery_simplex":
        return np.cumsum(seq, axis=1)
    if space.kind == "aa_acts":
        p = space.descriptor["num_prizes"]
        return np.concatenate(
            [np.cumsum(seq[:, s * p:(s + 1) * p], axis=1) for s in range(seq.shape[1] // p)], axis=1
        )
    raise DomainError(f"space kind {space.kind} has no lattice structure")


def _from_lattice_coords(space: OrderedSpace, coords: np.ndarray) -> np.ndarray:
    if space.kind in ("euclidean_grid", "euclidean_points"):
        return coords
    if space.kind == "dated_rewards":
        return np.column_stack([coords[:, 0], -coords[:, 1]])
    if space.kind == "lottery_simplex":
        return np.diff(coords, axis=1, prepend=0.0)
    if space.kind == "aa_acts":
        p = space.descriptor["num_prizes"]
        return np.concatenate(
            [np.diff(coords[:, s * p:(s + 1) * p], axis=1, prepend=0.0) for s in range(coords.shape[1] // p)],
            axis=1,
        )
    raise DomainError(f"space kind {space.kind} has no lattice structure")


def squeeze_envelopes(space: OrderedSpace, sequence) -> tuple[np.ndarray, np.ndarray]:
    """Tail inf and tail sup of a point sequence in the space's lattice.

    Returns (lower, upper): lower[n] = inf of the tail from n on, upper[n]
    the sup. The lower envelope is nondecreasing, the upper nonincreasing,
    and they bracket the input pointwise.
    """
    seq = np.asarray(sequence, dtype=float)
    if seq.ndim == 1:
        seq = seq[:, None]
    if seq.size == 0:
        raise DomainError("empty sequence")
    coords = _to_lattice_coords(space, seq)
    lower = np.minimum.accumulate(coords[::-1], axis=0)[::-1]
    upper = np.maximum.accumulate(coords[::-1], axis=0)[::-1]
    return _from_lattice_coords(space, lower), _from_lattice_coords(space, upper)


def check_countable_order_property(space: OrderedSpace, B: DenseSubset, radius: float):
    """Test whether B order-brackets every point at the given radius.

    True iff every x has members b', b'' of B within `radius` with
    b' <= x <= b''. Returns (ok, violating point indices).
    """
    if radius <= 0:
        raise DomainError("radius must be positive")
    members = list(B.members)
    near = space.distance_matrix[:, members] <= radius + 1e-12
    below = space.weak_order[:, members]      # [x, b] : x >= b
    above = space.weak_order[members, :].T    # [x, b] : b >= x
    ok = (near & below).any(axis=1) & (near & above).any(axis=1)
    witnesses = [int(i) for i in np.nonzero(~ok)[0]]
    return len(witnesses) == 0, witnesses


def space_to_descriptor(space: OrderedSpace, emit_points: bool = False) -> dict:
    """JSON-ready descriptor; points included only on request (or for raw spaces)."""
    desc = dict(space.descriptor)
    if emit_points and "points" not in desc:
        desc["points"] = space.points.tolist()
    return desc


def space_from_descriptor(desc: dict | str) -> OrderedSpace:
    """Rebuild a space from its descriptor (dict or JSON text)."""
    if isinstance(desc, str):
        desc = json.loads(desc)
    kind = desc.get("kind")
    if kind == "euclidean_grid":
        return make_grid_euclidean(desc["dims"], desc["resolution"], desc["bounds"])
    if kind == "lottery_simplex":
        return make_lottery_simplex(desc["num_prizes"], desc["resolution"])
    if kind == "dated_rewards":
        return make_dated_rewards(desc["money_resolution"], desc["time_resolution"], desc["bounds"])
    if kind == "aa_acts":
        lottery = make_lottery_simplex(desc["num_prizes"], desc["resolution"])
        return make_aa_acts(desc["num_states"], lottery)
    if kind == "euclidean_points":
        return from_points(desc["points"])
    raise ConfigurationError(f"unknown space kind: {kind!r}")
