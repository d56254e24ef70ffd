"""
Tables over L^k.

Inputs f = (f(1), ..., f(k)) are encoded mixed-radix with position 1 least
significant: index(f) = sum_i f(i) * n**(i-1). Subsets X of {1..k} are
frozensets of 1-based positions; internally they are bitmasks with bit i-1
standing for position i.
"""

import dataclasses
import itertools
from functools import cached_property
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from ._exceptions import (
    CapacityNotMonotoneError,
    CapacityNotNormalizedError,
    FunctionalError,
    LatticeMismatchError,
    UnknownElementError,
)
from ._lattice import Lattice
from ._settings import get_guards

__all__ = [
    "Subset",
    "InputSpace",
    "input_space",
    "FunctionalTable",
    "Capacity",
    "subset_to_mask",
    "mask_to_subset",
    "format_subset",
    "subset_masks",
    "lower_form_values",
    "upper_form_values",
]

Subset = FrozenSet[int]


def subset_to_mask(x: Iterable[int], k: int) -> int:
    mask = 0
    for i in x:
        if not 1 <= int(i) <= k:
            raise FunctionalError(f"position {i} outside 1..{k}")
        mask |= 1 << (int(i) - 1)
    return mask


def mask_to_subset(mask: int) -> Subset:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def format_subset(x: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(x)) + "}"


def subset_masks(k: int) -> List[int]:
    """All masks ordered by size, then lexicographically by sorted positions."""
    return [
        sum(1 << i for i in combo)
        for r in range(k + 1)
        for combo in itertools.combinations(range(k), r)
    ]


class InputSpace:
    """Precomputed index tables for the input space L^k."""

    def __init__(self, lattice: Lattice, k: int) -> None:
        guards = get_guards()
        if k < 0:
            raise FunctionalError(f"arity must be nonnegative, got {k}")
        guards.check("max_arity", k)
        guards.check("max_inputs", lattice.n**k)
        self.lattice = lattice
        self.k = k
        self.n = lattice.n
        self.size = lattice.n**k
        self.full = (1 << k) - 1
        self.weights = lattice.n ** np.arange(k, dtype=np.int64)
        digits = (np.arange(self.size, dtype=np.int64)[:, None] // self.weights[None, :]) % self.n
        self.digits = digits.astype(np.intp)
        self.digits.flags.writeable = False

    def __repr__(self) -> str:
        return f"InputSpace({self.lattice!r}, k={self.k})"

    def encode(self, f: Sequence[int]) -> int:
        if len(f) != self.k:
            raise FunctionalError(f"input must have {self.k} coordinates, got {len(f)}")
        return int(sum(int(self.lattice.check_element(v)) * int(w) for v, w in zip(f, self.weights)))

    def encode_many(self, digits: np.ndarray) -> np.ndarray:
        """Indices of the rows of an (..., k) digit array."""
        return (np.asarray(digits, dtype=np.int64) * self.weights).sum(axis=-1).astype(np.intp)

    def decode(self, index: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.digits[index])

    def names_of(self, index: int) -> List[str]:
        return [self.lattice.names[v] for v in self.digits[index]]

    @cached_property
    def diagonal(self) -> np.ndarray:
        """diagonal[c] is the index of the constant input (c, ..., c)."""
        return self.encode_many(np.repeat(np.arange(self.n)[:, None], self.k, axis=1))

    @cached_property
    def characteristic(self) -> np.ndarray:
        """characteristic[mask] is the index of I_X."""
        bits = (np.arange(self.full + 1)[:, None] >> np.arange(self.k)[None, :]) & 1
        digits = np.where(bits == 1, self.lattice.top, self.lattice.bottom)
        return self.encode_many(digits)

    @cached_property
    def cover_steps(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        (lo, hi) index arrays of all cover-adjacent input pairs: hi raises one
        coordinate of lo by one cover step. Ordered by lo, then position,
        then the raised value.
        """
        lows: List[np.ndarray] = []
        highs: List[np.ndarray] = []
        keys: List[np.ndarray] = []
        idx = np.arange(self.size)
        for pos in range(self.k):
            for u, v in self.lattice.cover_pairs:
                sel = idx[self.digits[:, pos] == u]
                lows.append(sel)
                highs.append(sel + (v - u) * int(self.weights[pos]))
                keys.append(np.stack([sel, np.full_like(sel, pos), np.full_like(sel, v)], axis=1))
        if not lows:
            empty = np.zeros(0, dtype=np.intp)
            return empty, empty
        lo = np.concatenate(lows)
        hi = np.concatenate(highs)
        key = np.concatenate(keys)
        order = np.lexsort((key[:, 2], key[:, 1], key[:, 0]))
        return lo[order].astype(np.intp), hi[order].astype(np.intp)

    @cached_property
    def meet_shift(self) -> np.ndarray:
        """meet_shift[c, i] is the index of f & c for f = decode(i)."""
        shifted = self.lattice.meet[self.digits[None, :, :], np.arange(self.n)[:, None, None]]
        return self.encode_many(shifted)

    @cached_property
    def join_shift(self) -> np.ndarray:
        shifted = self.lattice.join[self.digits[None, :, :], np.arange(self.n)[:, None, None]]
        return self.encode_many(shifted)

    def compose_index(self, images: np.ndarray) -> np.ndarray:
        """For maps given as a (G, n) image array: out[g, i] = index(g o f)."""
        images = np.asarray(images, dtype=np.intp)
        return self.encode_many(images[:, self.digits])

    @cached_property
    def subset_meets(self) -> np.ndarray:
        """subset_meets[mask, i]: meet of f(j) over j in X; top for X empty."""
        return self._subset_folds(self.lattice.meet, self.lattice.top)

    @cached_property
    def subset_joins(self) -> np.ndarray:
        """subset_joins[mask, i]: join of f(j) over j in X; bottom for X empty."""
        return self._subset_folds(self.lattice.join, self.lattice.bottom)

    def _subset_folds(self, op: np.ndarray, unit: int) -> np.ndarray:
        get_guards().check("max_inputs", (self.full + 1) * self.size)
        out = np.empty((self.full + 1, self.size), dtype=np.intp)
        out[0] = unit
        for mask in range(1, self.full + 1):
            low = (mask & -mask).bit_length() - 1
            out[mask] = op[out[mask & (mask - 1)], self.digits[:, low]]
        out.flags.writeable = False
        return out


def input_space(lattice: Lattice, k: int) -> InputSpace:
    return lattice.memo(("space", k), lambda: InputSpace(lattice, k))


@dataclasses.dataclass(frozen=True, eq=False)
class FunctionalTable:
    """
    A functional F: L^k -> L as a lookup table over mixed-radix indices.
    """

    lattice: Lattice
    k: int
    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.intp).reshape(-1)
        expected = self.lattice.n**self.k
        if len(values) != expected:
            raise FunctionalError(f"table must have {expected} entries, got {len(values)}")
        if len(values) and (values.min() < 0 or values.max() >= self.lattice.n):
            raise UnknownElementError("table entry is not an element of the lattice")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __repr__(self) -> str:
        label = f" {self.label!r}" if self.label else ""
        return f"FunctionalTable{label}({self.lattice!r}, k={self.k})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionalTable):
            return NotImplemented
        return (
            self.lattice == other.lattice
            and self.k == other.k
            and bool(np.array_equal(self.values, other.values))
        )

    def __hash__(self) -> int:
        return hash((self.lattice, self.k, self.values.tobytes()))

    @property
    def space(self) -> InputSpace:
        return input_space(self.lattice, self.k)

    def __call__(self, f: Sequence[int]) -> int:
        return int(self.values[self.space.encode(f)])

    def rows(self) -> Iterator[Tuple[Tuple[int, ...], int]]:
        space = self.space
        for i in range(space.size):
            yield space.decode(i), int(self.values[i])

    def characteristic_values(self) -> np.ndarray:
        """F(I_X) indexed by mask."""
        return self.values[self.space.characteristic]

    def same_lattice(self, other: "FunctionalTable") -> None:
        if other.lattice != self.lattice or other.k != self.k:
            raise LatticeMismatchError(f"{self!r} and {other!r} live over different input spaces")

    @classmethod
    def from_function(
        cls, lattice: Lattice, k: int, fn: Callable[[Tuple[int, ...]], int], label: str = ""
    ) -> "FunctionalTable":
        space = input_space(lattice, k)
        return cls(lattice, k, np.array([fn(space.decode(i)) for i in range(space.size)]), label)

    @classmethod
    def constant(cls, lattice: Lattice, k: int, c: int, label: str = "") -> "FunctionalTable":
        c = lattice.check_element(c)
        return cls(lattice, k, np.full(lattice.n**k, c), label or f"const {lattice.names[c]}")

    @classmethod
    def projection(cls, lattice: Lattice, k: int, i: int) -> "FunctionalTable":
        """x_i, with i 1-based."""
        if not 1 <= i <= k:
            raise FunctionalError(f"projection index {i} outside 1..{k}")
        return cls(lattice, k, input_space(lattice, k).digits[:, i - 1], f"x{i}")

    def to_dict(self) -> Dict[str, Any]:
        names = self.lattice.names
        return {
            "lattice": self.lattice.name,
            "k": self.k,
            "values": [names[v] for v in self.values],
        }


@dataclasses.dataclass(frozen=True, eq=False)
class Capacity:
    """
    A nondecreasing set function v on the subsets of {1..k}, valued in the
    lattice; values[mask] = v(X).

    Normalization v({}) = 0, v({1..k}) = 1 is only required by the Sugeno
    integral and checked there.
    """

    lattice: Lattice
    k: int
    values: np.ndarray

    def __post_init__(self) -> None:
        get_guards().check("max_arity", self.k)
        values = np.array(self.values, dtype=np.intp).reshape(-1)
        if len(values) != 1 << self.k:
            raise FunctionalError(f"capacity must assign all {1 << self.k} subsets, got {len(values)}")
        for v in values:
            self.lattice.check_element(int(v))
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        bad = self.monotonicity_defect()
        if bad is not None:
            small, large = bad
            names = self.lattice.names
            raise CapacityNotMonotoneError(
                f"capacity not monotone: v{format_subset(mask_to_subset(small))} = {names[values[small]]} "
                f"is not below v{format_subset(mask_to_subset(large))} = {names[values[large]]}",
                payload={"subsets": [sorted(mask_to_subset(small)), sorted(mask_to_subset(large))]},
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Capacity):
            return NotImplemented
        return self.lattice == other.lattice and self.k == other.k and bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.lattice, self.k, self.values.tobytes()))

    @classmethod
    def from_mapping(cls, lattice: Lattice, k: int, values: Mapping[Subset, int]) -> "Capacity":
        table = np.full(1 << k, -1, dtype=np.intp)
        for x, v in values.items():
            table[subset_to_mask(x, k)] = lattice.check_element(v)
        missing = [format_subset(mask_to_subset(m)) for m in range(1 << k) if table[m] < 0]
        if missing:
            raise FunctionalError(f"capacity misses subsets: {', '.join(missing)}")
        return cls(lattice, k, table)

    @classmethod
    def from_family(cls, lattice: Lattice, k: int, family: Iterable[Iterable[int]]) -> "Capacity":
        """The {0,1}-valued capacity whose support is the up-closure of family."""
        members = [subset_to_mask(x, k) for x in family]
        values = [
            lattice.top if any(m & mask == m for m in members) else lattice.bottom
            for mask in range(1 << k)
        ]
        return cls(lattice, k, np.array(values))

    def value(self, x: Iterable[int]) -> int:
        return int(self.values[subset_to_mask(x, self.k)])

    def monotonicity_defect(self) -> Optional[Tuple[int, int]]:
        leq = self.lattice.leq
        for mask in range(1 << self.k):
            for i in range(self.k):
                if not mask >> i & 1:
                    bigger = mask | 1 << i
                    if not leq[self.values[mask], self.values[bigger]]:
                        return mask, bigger
        return None

    def is_normalized(self) -> bool:
        return (
            int(self.values[0]) == self.lattice.bottom
            and int(self.values[(1 << self.k) - 1]) == self.lattice.top
        )

    def check_normalized(self) -> None:
        if not self.is_normalized():
            names = self.lattice.names
            raise CapacityNotNormalizedError(
                f"capacity must satisfy v({{}}) = {names[self.lattice.bottom]} and "
                f"v(full) = {names[self.lattice.top]}, got {names[self.values[0]]} and "
                f"{names[self.values[-1]]}"
            )

    def support_minimal(self) -> List[Subset]:
        """Minimal subsets X with v(X) != 0."""
        support = [m for m in range(1 << self.k) if self.values[m] != self.lattice.bottom]
        minimal = [m for m in support if not any(o != m and o & m == o for o in support)]
        rank = {m: r for r, m in enumerate(subset_masks(self.k))}
        return [mask_to_subset(m) for m in sorted(minimal, key=rank.__getitem__)]

    def is_boolean(self) -> bool:
        return bool(np.isin(self.values, [self.lattice.bottom, self.lattice.top]).all())


def lower_form_values(space: InputSpace, coefficients: np.ndarray) -> np.ndarray:
    """
    Batch DNF evaluation: for a (T, 2^k) coefficient array a, returns the
    (T, N) values of join over X of ( a_X & meet_{i in X} f(i) ).
    """
    lattice = space.lattice
    coefficients = np.asarray(coefficients, dtype=np.intp)
    acc = np.full((len(coefficients), space.size), lattice.bottom, dtype=np.intp)
    meets = space.subset_meets
    for mask in range(space.full + 1):
        clause = lattice.meet[coefficients[:, mask, None], meets[mask][None, :]]
        acc = lattice.join[acc, clause]
    return acc


def upper_form_values(space: InputSpace, coefficients: np.ndarray) -> np.ndarray:
    """Batch CNF evaluation: meet over X of ( b_X | join_{i in X} f(i) )."""
    lattice = space.lattice
    coefficients = np.asarray(coefficients, dtype=np.intp)
    acc = np.full((len(coefficients), space.size), lattice.top, dtype=np.intp)
    joins = space.subset_joins
    for mask in range(space.full + 1):
        clause = lattice.join[coefficients[:, mask, None], joins[mask][None, :]]
        acc = lattice.meet[acc, clause]
    return acc
