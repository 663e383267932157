"""Utility representations anchored to a space's reference chain.

The central construction maps each alternative to the least chain element
weakly preferred to it and reads the utility off a base function on the
chain. That selection is what makes utilities of nearby preferences stay
near each other; arbitrary representations do not (see the gallery).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, PreconditionError
from .preferences import Preference, from_utility, is_strictly_monotone, is_weakly_monotone, same_space
from .spaces import OrderedSpace

__all__ = [
    "UtilityFunction",
    "chain_base",
    "certainty_equivalent_utility",
    "chain_step_bound",
    "ordinal_equivalent",
    "max_norm_distance",
    "select_convergent_utilities",
    "utility_to_csv",
    "utility_from_csv",
    "utility_to_json",
]


@dataclass(frozen=True, eq=False)
class UtilityFunction:
    """A total assignment of real values to a space's points."""

    space: OrderedSpace
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.space.num_points,):
            raise DomainError("values must cover every point exactly once")
        if not np.isfinite(vals).all():
            raise DomainError("values must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, index: int) -> float:
        return float(self.values[index])

    def preference(self) -> Preference:
        return from_utility(self.space, self.values)

    def __eq__(self, other):
        if not isinstance(other, UtilityFunction):
            return NotImplemented
        return same_space(self.space, other.space) and np.array_equal(self.values, other.values)


def _resolve_base(space: OrderedSpace, base) -> np.ndarray:
    """Base values along the chain from a callable, dict, array, or UtilityFunction."""
    chain = space.chain
    if not chain:
        raise ConfigurationError("space has no reference chain")
    if isinstance(base, UtilityFunction):
        vals = [base(i) for i in chain]
    elif callable(base):
        vals = [float(base(space.points[i])) for i in chain]
    elif isinstance(base, dict):
        try:
            vals = [float(base[i]) for i in chain]
        except KeyError as missing:
            raise DomainError(f"base is missing chain index {missing}") from None
    else:
        vals = [float(v) for v in np.asarray(base, dtype=float)]
        if len(vals) != len(chain):
            raise DomainError("base array must have one value per chain element")
    arr = np.asarray(vals, dtype=float)
    if not (np.diff(arr) > 0).all():
        raise PreconditionError("base must be strictly increasing along the chain")
    return arr


def chain_base(space: OrderedSpace) -> np.ndarray:
    """Default base: arc position along the chain, 0 at the bottom to 1 at the top."""
    if not space.chain:
        raise ConfigurationError("space has no reference chain")
    m = len(space.chain)
    return np.linspace(0.0, 1.0, m)


def certainty_equivalent_utility(p: Preference, base) -> UtilityFunction:
    """Utility of x = base value of the least chain element weakly above x.

    Requires a weakly and strictly monotone preference so every point is
    bracketed by the chain and chain ranks increase strictly. The result
    represents a preference within one chain step of p, exactly on points
    whose indifference class meets the chain.
    """
    space = p.space
    base_vals = _resolve_base(space, base)
    if not is_weakly_monotone(p) or not is_strictly_monotone(p):
        raise PreconditionError("preference must be weakly and strictly monotone")
    chain = np.asarray(space.chain, dtype=int)
    chain_ranks = p.rank[chain]
    # strict monotonicity makes these strictly increasing; bracketing holds
    # because the chain top dominates the space and the bottom is dominated
    positions = np.searchsorted(chain_ranks, p.rank, side="left")
    values = base_vals[positions]
    return UtilityFunction(space, values)


def chain_step_bound(space: OrderedSpace, base) -> float:
    """Largest base gap between consecutive chain elements.

    This is the per-instance error radius of the chain selection: matching
    preferences yield utilities within this bound of the base's extension.
    """
    base_vals = _resolve_base(space, base)
    return float(np.diff(base_vals).max())


def ordinal_equivalent(u: UtilityFunction, v: UtilityFunction) -> bool:
    """True iff some strictly increasing transform carries u onto v.

    On a finite space that is exactly agreement of the induced preferences.
    """
    if not same_space(u.space, v.space):
        raise DomainError("utilities live on different spaces")
    return u.preference() == v.preference()


def max_norm_distance(u: UtilityFunction, v: UtilityFunction, region=None) -> float:
    """Max of |u - v| over the region (default: the whole space)."""
    if not same_space(u.space, v.space):
        raise DomainError("utilities live on different spaces")
    gap = np.abs(u.values - v.values)
    if region is not None:
        idx = np.asarray(list(region), dtype=int)
        if idx.size == 0:
            raise DomainError("empty region")
        gap = gap[idx]
    return float(gap.max())


def select_convergent_utilities(prefs, u_star: UtilityFunction) -> list[UtilityFunction]:
    """Chain-anchored representations of each preference, based on u_star.

    Restricts u_star to the chain and applies the certainty-equivalent
    construction to every preference in the list. When the preferences
    converge to the one u_star represents, these utilities converge to
    u_star in max norm, up to one chain step.
    """
    prefs = list(prefs)
    if not prefs:
        return []
    space = prefs[0].space
    base_vals = _resolve_base(space, u_star)
    return [certainty_equivalent_utility(p, base_vals) for p in prefs]


def utility_to_csv(u: UtilityFunction) -> str:
    """Rows of point coordinates followed by the value."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    dims = u.space.points.shape[1]
    writer.writerow([f"x{d}" for d in range(dims)] + ["value"])
    for i in range(u.space.num_points):
        writer.writerow([repr(float(c)) for c in u.space.points[i]] + [repr(float(u.values[i]))])
    return buf.getvalue()


def utility_from_csv(text: str, space: OrderedSpace) -> UtilityFunction:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if not header or header[-1] != "value":
        raise DomainError("expected a coordinate/value CSV with a 'value' column")
    values = np.full(space.num_points, np.nan)
    for row in reader:
        if not row:
            continue
        coords = [float(v) for v in row[:-1]]
        values[space.index_of(coords)] = float(row[-1])
    if np.isnan(values).any():
        raise DomainError("CSV does not cover every point of the space")
    return UtilityFunction(space, values)


def utility_to_json(u: UtilityFunction) -> str:
    doc = {
        "space": u.space.descriptor,
        "values": [float(v) for v in u.values],
    }
    return json.dumps(doc, indent=2)
