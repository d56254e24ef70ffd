import itertools
import logging
from functools import cached_property, reduce
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Sequence,
    Tuple,
)

import numpy as np

from ._exceptions import (
    CyclicCoversError,
    DuplicateNameError,
    LatticeError,
    LatticeMismatchError,
    NoBoundedStructureError,
    NotALatticeError,
    UnknownElementError,
)
from ._models import Verdict
from ._settings import get_guards

__all__ = [
    "ElementSet",
    "Lattice",
    "lattice_from_covers",
    "chain",
    "boolean_lattice",
    "product",
    "n5",
    "m3",
    "CATALOG",
    "catalog_lattice",
    "is_distributive",
    "is_completely_distributive",
    "validate_lattice",
    "check_same_lattice",
]

logger = logging.getLogger(__name__)

ElementSet = FrozenSet[int]


class Lattice:
    """
    Immutable finite bounded lattice.

    Elements are the integers range(n); names[i] is the display name of i.

        leq[i, j]   True iff i <= j        (read-only bool matrix)
        meet[i, j]  greatest lower bound   (read-only int matrix)
        join[i, j]  least upper bound      (read-only int matrix)

    Equality is structural (same names, same order); the display `name` is
    not part of it.
    """

    def __init__(self, names: Sequence[str], leq: Any, name: str = "") -> None:
        names = [str(x) for x in names]
        n = len(names)
        if n == 0:
            raise LatticeError("a lattice needs at least one element")
        get_guards().check("max_elements", n)
        _check_unique(names)
        rel = np.array(leq, dtype=bool)
        if rel.shape != (n, n):
            raise LatticeError(f"order relation must be {n}x{n}, got {rel.shape}")
        if not _is_partial_order(rel):
            raise LatticeError("order relation is not a partial order")
        rel.flags.writeable = False

        self.name = name
        self.names: Tuple[str, ...] = tuple(names)
        self.n = n
        self.leq = rel
        self._index = {nm: i for i, nm in enumerate(names)}
        self._memo: Dict[Any, Any] = {}
        self.bottom, self.top = _bounds(rel, self.names)
        self.join = _bound_table(rel, self.names, "join")
        self.meet = _bound_table(rel.T, self.names, "meet")
        logger.debug("built lattice %s with %d elements", name or "<anonymous>", n)

    def __repr__(self) -> str:
        return f"Lattice({self.name!r}, n={self.n})"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.names == other.names and bool(np.array_equal(self.leq, other.leq))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.names, self.leq.tobytes()))

    def __getstate__(self) -> Dict[str, Any]:
        state = dict(self.__dict__)
        state["_memo"] = {}
        return state

    def __setstate__(self, state: Dict[str, Any]) -> None:
        self.__dict__.update(state)
        for table in (self.leq, self.meet, self.join):
            table.flags.writeable = False

    def memo(self, key: Any, factory: Callable[[], Any]) -> Any:
        """Per-lattice cache for derived index structures."""
        if key not in self._memo:
            self._memo[key] = factory()
        return self._memo[key]

    # Names

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElementError(
                f"unknown element {name!r} in lattice {self.name or '<anonymous>'}",
                payload={"element": name},
            ) from None

    def indices(self, names: Iterable[str]) -> List[int]:
        return [self.index(nm) for nm in names]

    def element_set(self, names: Iterable[str]) -> ElementSet:
        return frozenset(self.indices(names))

    def format_set(self, s: Iterable[int]) -> str:
        return "{" + ",".join(self.names[i] for i in sorted(s)) + "}"

    def check_element(self, i: int) -> int:
        if not 0 <= int(i) < self.n:
            raise UnknownElementError(f"element index {i} out of range for {self!r}")
        return int(i)

    # Order structure

    @cached_property
    def covers(self) -> np.ndarray:
        """covers[i, j] iff j covers i."""
        lt = self.leq.copy()
        lt[np.diag_indices_from(lt)] = False
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        out = lt & ~between
        out.flags.writeable = False
        return out

    @cached_property
    def cover_pairs(self) -> Tuple[Tuple[int, int], ...]:
        lo, hi = np.nonzero(self.covers)
        return tuple(zip(lo.tolist(), hi.tolist()))

    @cached_property
    def down_size(self) -> np.ndarray:
        """Number of elements below each element (itself included)."""
        out = self.leq.sum(axis=0)
        out.flags.writeable = False
        return out

    @cached_property
    def linear_extension(self) -> Tuple[int, ...]:
        """Elements ordered by down-set size, ties by index."""
        return tuple(sorted(range(self.n), key=lambda i: (int(self.down_size[i]), i)))

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    # Folds

    def meet_set(self, s: Iterable[int]) -> int:
        """Meet of s; the empty meet is top."""
        return int(reduce(lambda acc, b: self.meet[acc, b], s, self.top))

    def join_set(self, s: Iterable[int]) -> int:
        """Join of s; the empty join is bottom."""
        return int(reduce(lambda acc, b: self.join[acc, b], s, self.bottom))

    def convex_hull(self, s: Iterable[int]) -> ElementSet:
        """{c : a <= c <= b for some a, b in s}."""
        members = sorted(set(s))
        if not members:
            return frozenset()
        above_some = self.leq[members, :].any(axis=0)
        below_some = self.leq[:, members].any(axis=1)
        return frozenset(np.flatnonzero(above_some & below_some).tolist())


def _check_unique(names: Sequence[str]) -> None:
    seen = set()
    for nm in names:
        if nm in seen:
            raise DuplicateNameError(f"duplicate element name {nm!r}", payload={"element": nm})
        seen.add(nm)


def _is_partial_order(rel: np.ndarray) -> bool:
    n = len(rel)
    if not rel[np.diag_indices_from(rel)].all():
        return False
    if (rel & rel.T).sum() > n:
        return False
    rel2 = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    return not bool((~rel & rel2).any())


def _bounds(rel: np.ndarray, names: Sequence[str]) -> Tuple[int, int]:
    bottoms = np.flatnonzero(rel.all(axis=1)).tolist()
    tops = np.flatnonzero(rel.all(axis=0)).tolist()
    if not bottoms:
        minimal = [names[i] for i in np.flatnonzero(rel.sum(axis=0) == 1)]
        raise NoBoundedStructureError(
            f"no bottom element; minimal elements: {', '.join(minimal)}",
            payload={"minimal": minimal},
        )
    if not tops:
        maximal = [names[i] for i in np.flatnonzero(rel.sum(axis=1) == 1)]
        raise NoBoundedStructureError(
            f"no top element; maximal elements: {', '.join(maximal)}",
            payload={"maximal": maximal},
        )
    return bottoms[0], tops[0]


def _bound_table(rel: np.ndarray, names: Sequence[str], kind: str) -> np.ndarray:
    """
    Least upper bounds with respect to rel: the bound of i and j is the unique
    k whose up-set is the intersection of the up-sets of i and j.
    """
    n = len(names)
    ident = {tuple(rel[i, :]): i for i in range(n)}
    table = np.zeros((n, n), dtype=np.intp)
    for i in range(n):
        for j in range(i, n):
            common = tuple(rel[i, :] & rel[j, :])
            if common not in ident:
                pair = (names[i], names[j])
                raise NotALatticeError(
                    f"not a lattice: {pair[0]} and {pair[1]} have no {kind}",
                    pair=pair,
                    payload={"pair": list(pair), "missing": kind},
                )
            table[i, j] = table[j, i] = ident[common]
    table.flags.writeable = False
    return table


def lattice_from_covers(
    names: Sequence[str],
    covers: Iterable[Tuple[str, str]],
    name: str = "",
) -> Lattice:
    """
    Build a lattice from a Hasse diagram; (x, y) means y covers x.

    Checks run in a fixed order: duplicate names, unknown names, cycles,
    bounds, then existence of every meet and join.
    """
    names = [str(x) for x in names]
    if not names:
        raise LatticeError("a lattice needs at least one element")
    get_guards().check("max_elements", len(names))
    _check_unique(names)
    covers = [(str(lo), str(hi)) for lo, hi in covers]
    index = {nm: i for i, nm in enumerate(names)}
    n = len(names)
    rel = np.eye(n, dtype=bool)
    for lo, hi in covers:
        for nm in (lo, hi):
            if nm not in index:
                raise UnknownElementError(f"cover references unknown element {nm!r}", payload={"element": nm})
        rel[index[lo], index[hi]] = True
    for k in range(n):
        rel |= rel[:, k, None] & rel[None, k, :]
    cyclic = rel & rel.T
    cyclic[np.diag_indices_from(cyclic)] = False
    loops = [lo for lo, hi in covers if lo == hi]
    if cyclic.any() or loops:
        if cyclic.any():
            i, j = np.argwhere(cyclic)[0].tolist()
        else:
            i = j = index[loops[0]]
        raise CyclicCoversError(
            f"cover relation is cyclic through {names[i]} and {names[j]}",
            payload={"pair": [names[i], names[j]]},
        )
    return Lattice(names, rel, name=name)


def _letter(i: int) -> str:
    return chr(ord("a") + i) if i < 26 else f"e{i}"


def chain(n: int) -> Lattice:
    """0 < a < b < ... < 1 with n elements; chain(1) is the single element 0."""
    if n < 1:
        raise LatticeError(f"chain length must be positive, got {n}")
    get_guards().check("max_elements", n)
    if n == 1:
        names = ["0"]
    else:
        names = ["0"] + [_letter(i) for i in range(n - 2)] + ["1"]
    idx = np.arange(n)
    return Lattice(names, idx[:, None] <= idx[None, :], name=f"chain{n}")


def boolean_lattice(k: int) -> Lattice:
    """
    Subsets of a k-set ordered by inclusion, listed by size then
    lexicographically; 0 and 1 name the empty and the full set.
    """
    if k < 0:
        raise LatticeError(f"boolean lattice rank must be nonnegative, got {k}")
    get_guards().check("max_elements", 2**k)
    subsets = [c for r in range(k + 1) for c in itertools.combinations(range(k), r)]
    masks = [sum(1 << i for i in c) for c in subsets]
    full = (1 << k) - 1

    def label(c: Tuple[int, ...], mask: int) -> str:
        if mask == full:
            return "1"
        if mask == 0:
            return "0"
        return "".join(_letter(i) for i in c)

    names = [label(c, m) for c, m in zip(subsets, masks)]
    m = np.array(masks)
    leq = (m[:, None] & ~m[None, :]) == 0
    return Lattice(names, leq, name=f"bool{k}")


def product(l1: Lattice, l2: Lattice) -> Lattice:
    """Componentwise order on pairs; (i1, i2) has index i1 * n2 + i2."""
    get_guards().check("max_elements", l1.n * l2.n)
    names = [f"({a},{b})" for a in l1.names for b in l2.names]
    leq = (l1.leq[:, None, :, None] & l2.leq[None, :, None, :]).reshape(l1.n * l2.n, l1.n * l2.n)
    return Lattice(names, leq, name=f"{l1.name}x{l2.name}")


def n5() -> Lattice:
    """The pentagon: 0 < x < z < 1 and 0 < y < 1."""
    return lattice_from_covers(
        ["0", "x", "y", "z", "1"],
        [("0", "x"), ("x", "z"), ("z", "1"), ("0", "y"), ("y", "1")],
        name="n5",
    )


def m3() -> Lattice:
    """The diamond with three atoms a, b, c."""
    return lattice_from_covers(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        name="m3",
    )


CATALOG: Dict[str, Callable[[], Lattice]] = {
    "chain2": lambda: chain(2),
    "chain3": lambda: chain(3),
    "chain4": lambda: chain(4),
    "chain5": lambda: chain(5),
    "bool2": lambda: boolean_lattice(2),
    "bool3": lambda: boolean_lattice(3),
    "chain3xchain2": lambda: product(chain(3), chain(2)),
    "n5": n5,
    "m3": m3,
}


def catalog_lattice(name: str) -> Lattice:
    try:
        factory = CATALOG[name]
    except KeyError:
        raise UnknownElementError(
            f"unknown catalog lattice {name!r}; known: {', '.join(CATALOG)}",
            payload={"lattice": name},
        ) from None
    return factory()


def check_same_lattice(*lattices: Lattice) -> Lattice:
    first = lattices[0]
    for other in lattices[1:]:
        if other != first:
            raise LatticeMismatchError(f"objects live over different lattices: {first!r} and {other!r}")
    return first


def is_distributive(lattice: Lattice) -> Verdict:
    """
    a & (b | c) == (a & b) | (a & c) for every triple.

    On failure the witness is the first violating (a, b, c) in index order.
    """
    meet, join = lattice.meet, lattice.join
    for a in range(lattice.n):
        diff = meet[a, join] != join[np.ix_(meet[a, :], meet[a, :])]
        if diff.any():
            b, c = (int(v) for v in np.argwhere(diff)[0])
            nm = lattice.names
            return Verdict(
                False,
                {
                    "triple": [nm[a], nm[b], nm[c]],
                    "lhs": nm[meet[a, join[b, c]]],
                    "rhs": nm[join[meet[a, b], meet[a, c]]],
                },
            )
    return Verdict(True)


def is_completely_distributive(lattice: Lattice) -> Verdict:
    """Finite lattices are complete, and there distributive and completely distributive coincide."""
    return is_distributive(lattice)


def validate_lattice(lattice: Lattice) -> Verdict:
    """Exhaustive check of the lattice axioms on the precomputed tables."""
    n = lattice.n
    meet, join, leq = lattice.meet, lattice.join, lattice.leq
    idx = np.arange(n)
    checks: List[Tuple[str, np.ndarray]] = []
    for label, op in (("meet", meet), ("join", join)):
        checks.append((f"{label} commutative", op == op.T))
        checks.append((f"{label} idempotent", op[idx, idx] == idx))
        checks.append((f"{label} associative", _associative(op)))
    checks.append(("absorption meet", meet[idx[:, None], join] == idx[:, None]))
    checks.append(("absorption join", join[idx[:, None], meet] == idx[:, None]))
    checks.append(("leq iff meet", leq == (meet == idx[:, None])))
    checks.append(("leq iff join", leq == (join == idx[None, :])))
    checks.append(("meet is lower bound", leq[meet, idx[:, None]] & leq[meet, idx[None, :]]))
    checks.append(("join is upper bound", leq[idx[:, None], join] & leq[idx[None, :], join]))
    checks.append(("bounds", leq[lattice.bottom, :] & leq[:, lattice.top]))
    for label, ok in checks:
        ok = np.asarray(ok)
        if not ok.all():
            where = [int(v) for v in np.argwhere(~ok)[0]]
            return Verdict(False, {"axiom": label, "elements": [lattice.names[i] for i in where]})
    return Verdict(True)


def _associative(op: np.ndarray) -> np.ndarray:
    n = len(op)
    idx = np.arange(n)
    left = op[op[:, :, None], idx[None, None, :]]
    right = op[idx[:, None, None], op[None, :, :]]
    return left == right
