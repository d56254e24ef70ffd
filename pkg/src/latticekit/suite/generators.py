"""
Exhaustive and seeded random instances.

Every random generator is a pure function of its arguments and the seed,
drawing from `numpy.random.default_rng(seed)`.
"""

import logging
from typing import FrozenSet, Iterator, List, Optional, Sequence

import numpy as np

from .._duality import Cone, SetFamily
from .._exceptions import FunctionalError
from .._lattice import Lattice
from .._settings import get_guards
from .._space import Capacity, FunctionalTable, InputSpace, input_space, subset_masks
from .._terms import Const, Join, Meet, Term, Var, check_variables

__all__ = [
    "nondecreasing_tables",
    "enumerate_nondecreasing",
    "all_tables",
    "enumerate_all",
    "monotone_set_functions",
    "random_nondecreasing",
    "random_capacity",
    "random_term",
    "random_cone",
    "random_family",
]

logger = logging.getLogger(__name__)


def _predecessors(space: InputSpace) -> List[List[int]]:
    lo, hi = space.cover_steps
    preds: List[List[int]] = [[] for _ in range(space.size)]
    for low, high in zip(lo.tolist(), hi.tolist()):
        preds[high].append(low)
    return preds


def _input_order(space: InputSpace) -> np.ndarray:
    """A linear extension of the product order: by summed down-set sizes, then index."""
    rank = space.lattice.down_size[space.digits].sum(axis=1)
    return np.lexsort((np.arange(space.size), rank))


def nondecreasing_tables(lattice: Lattice, k: int) -> np.ndarray:
    """
    (T, N) array of every nondecreasing table, in lexicographic order of the
    values assigned along the input order.

    Inputs are filled one at a time; each partial table branches into every
    value above the join of its already assigned predecessors. Partial
    tables always extend (by top), so the running count never exceeds the
    final one and is checked against max_tables as it grows.
    """
    space = input_space(lattice, k)
    guards = get_guards()
    preds = _predecessors(space)
    tables = np.full((1, space.size), -1, dtype=np.intp)
    for i in _input_order(space).tolist():
        floor = np.full(len(tables), lattice.bottom, dtype=np.intp)
        for p in preds[i]:
            floor = lattice.join[floor, tables[:, p]]
        rows, values = np.nonzero(lattice.leq[floor])
        tables = tables[rows]
        tables[:, i] = values
        guards.check("max_tables", len(tables))
    logger.debug("%d nondecreasing tables on %r, k=%d", len(tables), lattice, k)
    return tables


def enumerate_nondecreasing(lattice: Lattice, k: int) -> Iterator[FunctionalTable]:
    for values in nondecreasing_tables(lattice, k):
        yield FunctionalTable(lattice, k, values)


def all_tables(lattice: Lattice, k: int) -> np.ndarray:
    """(n^N, N) array of every table, table t holding digit i of t in base n."""
    space = input_space(lattice, k)
    get_guards().check("max_tables", lattice.n**space.size)
    count = lattice.n**space.size
    weights = lattice.n ** np.arange(space.size, dtype=np.int64)
    return ((np.arange(count, dtype=np.int64)[:, None] // weights[None, :]) % lattice.n).astype(np.intp)


def enumerate_all(lattice: Lattice, k: int) -> Iterator[FunctionalTable]:
    for values in all_tables(lattice, k):
        yield FunctionalTable(lattice, k, values)


def monotone_set_functions(k: int) -> List[List[int]]:
    """
    Every monotone {0,1}-valued set function on {1..k}, as its list of
    minimal true subsets (masks). The constant 0 function is [] and the
    constant 1 function is [0].
    """
    get_guards().check("max_arity", k)
    size = 1 << k
    get_guards().check("max_tables", 1 << size)
    out: List[List[int]] = []
    for code in range(1 << size):
        true = [m for m in range(size) if code >> m & 1]
        if all(code >> (m | 1 << b) & 1 for m in true for b in range(k)):
            minimal = [m for m in true if not any(o != m and o & m == o for o in true)]
            out.append(sorted(minimal, key=lambda m: (bin(m).count("1"), m)))
    return out


def random_nondecreasing(lattice: Lattice, k: int, seed: int) -> FunctionalTable:
    """Values along the input order, uniform over the elements above the predecessors' join."""
    rng = np.random.default_rng(seed)
    space = input_space(lattice, k)
    preds = _predecessors(space)
    values = np.full(space.size, -1, dtype=np.intp)
    for i in _input_order(space).tolist():
        floor = lattice.join_set(int(values[p]) for p in preds[i])
        allowed = np.flatnonzero(lattice.leq[floor])
        values[i] = allowed[rng.integers(len(allowed))]
    return FunctionalTable(lattice, k, values, label=f"random seed={seed}")


def random_capacity(lattice: Lattice, k: int, seed: int, normalized: bool = True) -> Capacity:
    """Values along subsets by size, uniform over the elements above the join of the immediate subsets."""
    if normalized and k < 1:
        raise FunctionalError("a normalized capacity needs k >= 1")
    rng = np.random.default_rng(seed)
    full = (1 << k) - 1
    values = np.full(full + 1, -1, dtype=np.intp)
    for mask in subset_masks(k):
        if normalized and mask == 0:
            values[mask] = lattice.bottom
            continue
        if normalized and mask == full:
            values[mask] = lattice.top
            continue
        floor = lattice.join_set(int(values[mask & ~(1 << b)]) for b in range(k) if mask >> b & 1)
        allowed = np.flatnonzero(lattice.leq[floor])
        values[mask] = allowed[rng.integers(len(allowed))]
    return Capacity(lattice, k, values)


def _random_term(
    lattice: Lattice, variables: Sequence[str], rng: np.random.Generator, depth: int
) -> Term:
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.75:
            return Var(variables[int(rng.integers(len(variables)))])
        return Const(lattice.names[int(rng.integers(lattice.n))])
    children = [_random_term(lattice, variables, rng, depth - 1) for _ in range(int(rng.integers(2, 4)))]
    return Meet(*children) if rng.random() < 0.5 else Join(*children)


def random_term(lattice: Lattice, variables: Sequence[str], seed: int, depth: int = 3) -> Term:
    """A random term of depth at most `depth`; depth 0 gives a leaf."""
    if depth < 0:
        raise FunctionalError(f"depth must be nonnegative, got {depth}")
    variables = check_variables(variables, lattice)
    return _random_term(lattice, variables, np.random.default_rng(seed), depth)


def random_family(k: int, seed: int, max_members: Optional[int] = None) -> List[FrozenSet[int]]:
    """A random nonempty family of nonempty subsets of {1..k}, as 1-based sets."""
    if k < 1:
        raise FunctionalError(f"a family of nonempty subsets needs k >= 1, got {k}")
    rng = np.random.default_rng(seed)
    masks = subset_masks(k)[1:]
    limit = max_members if max_members is not None else min(len(masks), 4)
    count = int(rng.integers(1, limit + 1))
    picked = sorted(rng.choice(len(masks), size=count, replace=False).tolist())
    return [frozenset(b + 1 for b in range(k) if masks[i] >> b & 1) for i in picked]


def random_cone(lattice: Lattice, seed: int, max_members: int = 3, max_size: int = 3) -> Cone:
    """
    K0 is one to max_members random subsets of at most max_size elements;
    H0 holds a single set picking one random element of each member of K0.
    """
    rng = np.random.default_rng(seed)
    n = lattice.n
    members = []
    for _ in range(int(rng.integers(1, max_members + 1))):
        size = int(rng.integers(1, min(max_size, n) + 1))
        members.append(sorted(rng.choice(n, size=size, replace=False).tolist()))
    transversal = {int(m[int(rng.integers(len(m)))]) for m in members}
    return Cone(
        lattice,
        SetFamily.of_elements(lattice, [transversal]),
        SetFamily.of_elements(lattice, members),
    )
