import dataclasses
import itertools
import logging
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ._exceptions import (
    EmptyFamilyError,
    EmptyMemberError,
    FunctionalError,
    InternalConsistencyError,
    LatticeMismatchError,
    NotAConeError,
)
from ._lattice import Lattice, is_distributive
from ._models import Verdict
from ._settings import get_guards

__all__ = [
    "SetFamily",
    "Cone",
    "is_cone",
    "extend_to_ultracone",
    "is_ultracone",
    "crosscut_values",
    "find_crosscut_violation",
    "transversals",
    "minimal_masks",
    "blocker",
    "minimal_members",
    "up_closure",
    "DualityValues",
    "check_blocker_duality",
    "verify_complete_distributivity",
    "check_complete_distributive_law",
]

logger = logging.getLogger(__name__)


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _bits(mask: int) -> List[int]:
    return [b for b in range(mask.bit_length()) if mask >> b & 1]


def _order_key(mask: int) -> Tuple[int, List[int]]:
    return _popcount(mask), _bits(mask)


def _all_masks(size: int) -> List[int]:
    """Nonempty subsets of a size-element ground set, by size then lexicographically."""
    return [
        sum(1 << b for b in combo)
        for r in range(1, size + 1)
        for combo in itertools.combinations(range(size), r)
    ]


@dataclasses.dataclass(frozen=True)
class SetFamily:
    """
    A family of nonempty subsets of a finite ground set, stored as bitmasks.

    Bit b stands for labels[b]: element b of a lattice (of_elements) or
    position b + 1 of an index set {1..k} (of_positions).
    """

    size: int
    members: FrozenSet[int]
    labels: Tuple[str, ...]

    def __post_init__(self) -> None:
        members = frozenset(int(m) for m in self.members)
        if len(self.labels) != self.size:
            raise FunctionalError(f"{len(self.labels)} labels for a ground set of size {self.size}")
        for m in members:
            if m == 0:
                raise EmptyMemberError("set families cannot contain the empty set")
            if m >> self.size:
                raise FunctionalError(f"member {m:b} exceeds the ground set")
        object.__setattr__(self, "members", members)

    @classmethod
    def of_elements(cls, lattice: Lattice, sets: Iterable[Iterable[int]]) -> "SetFamily":
        masks = []
        for s in sets:
            mask = 0
            for e in s:
                mask |= 1 << lattice.check_element(e)
            masks.append(mask)
        return cls(lattice.n, frozenset(masks), lattice.names)

    @classmethod
    def of_positions(cls, k: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        masks = []
        for s in sets:
            mask = 0
            for i in s:
                if not 1 <= int(i) <= k:
                    raise FunctionalError(f"position {i} outside 1..{k}")
                mask |= 1 << (int(i) - 1)
            masks.append(mask)
        return cls(k, frozenset(masks), tuple(str(i) for i in range(1, k + 1)))

    def with_members(self, members: Iterable[int]) -> "SetFamily":
        return SetFamily(self.size, frozenset(members), self.labels)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, mask: object) -> bool:
        return mask in self.members

    def ordered(self) -> List[int]:
        return sorted(self.members, key=_order_key)

    def sets(self) -> List[FrozenSet[int]]:
        """Members as sets of bit positions, by size then lexicographically."""
        return [frozenset(_bits(m)) for m in self.ordered()]

    def format(self) -> str:
        return ",".join("{" + ",".join(self.labels[b] for b in _bits(m)) + "}" for m in self.ordered())

    def to_list(self) -> List[List[str]]:
        return [[self.labels[b] for b in _bits(m)] for m in self.ordered()]


def _meets_all(candidates: np.ndarray, family: Iterable[int]) -> np.ndarray:
    others = np.fromiter(family, dtype=np.int64)
    if len(others) == 0:
        return np.ones(len(candidates), dtype=bool)
    return ((candidates[:, None] & others[None, :]) != 0).all(axis=1)


@dataclasses.dataclass(frozen=True)
class Cone:
    """A pair (H, K) of families of subsets of a lattice, every H meeting every K."""

    lattice: Lattice
    h: SetFamily
    k: SetFamily

    def __post_init__(self) -> None:
        for family in (self.h, self.k):
            if family.size != self.lattice.n:
                raise LatticeMismatchError("cone families must live over the lattice elements")
        hs = np.array(self.h.ordered(), dtype=np.int64)
        ks = np.array(self.k.ordered(), dtype=np.int64)
        if len(hs) and len(ks):
            disjoint = (hs[:, None] & ks[None, :]) == 0
            if disjoint.any():
                i, j = np.argwhere(disjoint)[0]
                raise NotAConeError(
                    f"{self.h.with_members([int(hs[i])]).format()} and "
                    f"{self.k.with_members([int(ks[j])]).format()} are disjoint"
                )

    @classmethod
    def of_elements(
        cls, lattice: Lattice, h: Iterable[Iterable[int]], k: Iterable[Iterable[int]]
    ) -> "Cone":
        return cls(lattice, SetFamily.of_elements(lattice, h), SetFamily.of_elements(lattice, k))

    def to_dict(self) -> Dict[str, Any]:
        return {"h": self.h.to_list(), "k": self.k.to_list()}


def is_cone(lattice: Lattice, h: SetFamily, k: SetFamily) -> bool:
    try:
        Cone(lattice, h, k)
    except NotAConeError:
        return False
    return True


def _candidates(lattice: Lattice) -> np.ndarray:
    get_guards().check("max_cone_elements", lattice.n)
    return lattice.memo("cone candidates", lambda: np.array(_all_masks(lattice.n), dtype=np.int64))


def _addable(lattice: Lattice, family: SetFamily, other: SetFamily) -> List[int]:
    cands = _candidates(lattice)
    ok = _meets_all(cands, other.members)
    return [int(m) for m in cands[ok] if int(m) not in family.members]


def extend_to_ultracone(lattice: Lattice, cone: Cone) -> Cone:
    """
    Saturate H, then K, with every subset that keeps the cone property,
    scanning subsets by size then lexicographically, until nothing changes.
    """
    h, k = cone.h, cone.k
    while True:
        add_h = _addable(lattice, h, k)
        h = h.with_members(h.members | frozenset(add_h))
        add_k = _addable(lattice, k, h)
        k = k.with_members(k.members | frozenset(add_k))
        if not add_h and not add_k:
            break
    out = Cone(lattice, h, k)
    if not is_ultracone(lattice, out):
        raise InternalConsistencyError("saturation did not reach an ultracone")
    return out


def is_ultracone(lattice: Lattice, cone: Cone) -> bool:
    """No subset can be added to either family without breaking the cone property."""
    return not _addable(lattice, cone.h, cone.k) and not _addable(lattice, cone.k, cone.h)


def crosscut_values(lattice: Lattice, cone: Cone) -> Tuple[int, int]:
    """(join over H of meet H, meet over K of join K)."""
    lower = lattice.join_set(lattice.meet_set(_bits(m)) for m in cone.h.ordered())
    upper = lattice.meet_set(lattice.join_set(_bits(m)) for m in cone.k.ordered())
    return lower, upper


def find_crosscut_violation(
    lattice: Lattice, max_member_size: int = 3, max_members: int = 2
) -> Optional[Cone]:
    """
    First ultracone with unequal cross-cut values reached by saturating
    (empty, K0) over seed families K0 of up to max_members subsets of size
    up to max_member_size, seeds in a fixed order.
    """
    seeds = [m for m in _all_masks(lattice.n) if _popcount(m) <= max_member_size]
    empty = SetFamily(lattice.n, frozenset(), lattice.names)
    for r in range(1, max_members + 1):
        for combo in itertools.combinations(seeds, r):
            cone = Cone(lattice, empty, empty.with_members(combo))
            ultra = extend_to_ultracone(lattice, cone)
            lower, upper = crosscut_values(lattice, ultra)
            if lower != upper:
                logger.debug("cross-cut violation on %r from seed %s", lattice, cone.k.format())
                return ultra
    return None


# Blockers


def transversals(size: int, members: Iterable[int]) -> List[int]:
    """
    Every subset of the ground set meeting every member, as masks in subset
    order. The empty family gives all subsets (the empty one included); a
    family containing the empty set gives none.
    """
    members = list(members)
    everything = [0] + _all_masks(size)
    if not members:
        return everything
    cands = np.array(everything, dtype=np.int64)
    return [int(m) for m in cands[_meets_all(cands, members)]]


def minimal_masks(masks: Iterable[int]) -> List[int]:
    masks = sorted(set(masks), key=_order_key)
    return [m for m in masks if not any(o != m and o & m == o for o in masks)]


def minimal_members(family: SetFamily) -> SetFamily:
    return family.with_members(minimal_masks(family.members))


def up_closure(family: SetFamily) -> SetFamily:
    """Every superset of some member."""
    return family.with_members(
        m for m in _all_masks(family.size) if any(x & m == x for x in family.members)
    )


def blocker(family: SetFamily) -> SetFamily:
    """All subsets B with B & X nonempty for every member X."""
    if not family.members:
        raise EmptyFamilyError("the blocker of an empty family is undefined here")
    return family.with_members(transversals(family.size, family.members))


class DualityValues(NamedTuple):
    lower: int
    upper: int
    equal: bool


def _fold_family(lattice: Lattice, family: Iterable[int], values: Sequence[int], inner: str) -> int:
    if inner == "meet":
        return lattice.join_set(lattice.meet_set(values[b] for b in _bits(m)) for m in family)
    return lattice.meet_set(lattice.join_set(values[b] for b in _bits(m)) for m in family)


def check_blocker_duality(lattice: Lattice, k: int, family: SetFamily, f: Sequence[int]) -> DualityValues:
    """
    P_A(f) = join over X in A of meet f(X), against P^B(f) = meet over
    blockers B of join f(B). The value over minimal blockers is asserted
    equal to the value over all blockers.
    """
    if family.size != k:
        raise FunctionalError(f"family is over {family.size} positions, expected {k}")
    if len(f) != k:
        raise FunctionalError(f"input must have {k} coordinates, got {len(f)}")
    if not family.members:
        raise EmptyFamilyError("family must have at least one member")
    values = [lattice.check_element(v) for v in f]
    blockers = transversals(k, family.members)
    lower = _fold_family(lattice, family.members, values, "meet")
    upper = _fold_family(lattice, blockers, values, "join")
    fast = _fold_family(lattice, minimal_masks(blockers), values, "join")
    if fast != upper:
        raise InternalConsistencyError("minimal blockers and all blockers give different values")
    return DualityValues(lower, upper, lower == upper)


def _families(size: int) -> Iterator[List[int]]:
    """Nonempty families of nonempty subsets, by bitmask over the subset order."""
    subsets = _all_masks(size)
    for code in range(1, 1 << len(subsets)):
        yield [subsets[i] for i in range(len(subsets)) if code >> i & 1]


def _ground_families(lattice: Lattice, max_ground: int) -> Iterator[Tuple[Tuple[int, ...], List[int]]]:
    for size in range(1, min(max_ground, lattice.n) + 1):
        for ground in itertools.combinations(range(lattice.n), size):
            for members in _families(size):
                yield ground, members


def verify_complete_distributivity(
    lattice: Lattice, max_ground: int = 3, max_families: Optional[int] = None
) -> Verdict:
    """
    Blocker duality with f the identity on every A of at most max_ground
    elements, A scanned by size then lexicographically. The scan stops after
    max_families families when that is given.

    A pass only means no violation exists up to the budget; with
    max_ground >= 3 the outcome is asserted against is_distributive, since
    a failing distributive triple is itself a violating ground set.
    """
    candidates: Iterator[Tuple[Tuple[int, ...], List[int]]] = _ground_families(lattice, max_ground)
    if max_families is not None:
        candidates = itertools.islice(candidates, max_families)
    checked = 0
    witness: Optional[Dict[str, Any]] = None
    for ground, members in candidates:
        checked += 1
        size = len(ground)
        lower = _fold_family(lattice, members, ground, "meet")
        upper = _fold_family(lattice, transversals(size, members), ground, "join")
        if lower != upper:
            labels = tuple(lattice.names[e] for e in ground)
            family = SetFamily(size, frozenset(members), labels)
            witness = {
                "ground": list(labels),
                "family": family.to_list(),
                "lower": lattice.names[lower],
                "upper": lattice.names[upper],
            }
            break
    logger.debug("checked %d families on %r", checked, lattice)
    verdict = Verdict(witness is None, witness)
    if max_ground >= 3 and max_families is None and verdict.holds != is_distributive(lattice).holds:
        raise InternalConsistencyError(
            f"blocker duality gives {verdict.holds} but distributivity gives {not verdict.holds} on {lattice!r}"
        )
    return verdict


def check_complete_distributive_law(lattice: Lattice, grid: Sequence[Sequence[int]]) -> DualityValues:
    """
    meet over rows of (join of the row), against join over choice functions
    c of (meet over rows i of grid[i][c(i)]).
    """
    rows = [[lattice.check_element(v) for v in row] for row in grid]
    if not rows or any(len(row) != len(rows[0]) for row in rows) or not rows[0]:
        raise FunctionalError("grid must be a nonempty rectangular array")
    get_guards().check("max_choice_functions", len(rows[0]) ** len(rows))
    lhs = lattice.meet_set(lattice.join_set(row) for row in rows)
    rhs = lattice.join_set(
        lattice.meet_set(row[j] for row, j in zip(rows, choice))
        for choice in itertools.product(range(len(rows[0])), repeat=len(rows))
    )
    return DualityValues(lhs, rhs, lhs == rhs)
