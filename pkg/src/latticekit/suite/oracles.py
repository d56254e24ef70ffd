"""Independent counts used to cross-check the enumerators."""

from typing import Dict, List

import numpy as np

from .._exceptions import FunctionalError
from .._settings import get_guards
from .._space import InputSpace

__all__ = ["MONOTONE_BOOLEAN_COUNTS", "product_order", "down_sets", "count_monotone_into_chain"]

# Monotone Boolean functions of k variables (Dedekind numbers).
MONOTONE_BOOLEAN_COUNTS: Dict[int, int] = {0: 2, 1: 3, 2: 6, 3: 20, 4: 168, 5: 7581}


def product_order(space: InputSpace) -> np.ndarray:
    """(N, N) componentwise order on the inputs of a space."""
    d = space.digits
    return space.lattice.leq[d[:, None, :], d[None, :, :]].all(axis=2)


def down_sets(leq: np.ndarray) -> List[int]:
    """Every down-closed subset of a poset, as bitmasks in increasing order."""
    leq = np.asarray(leq, dtype=bool)
    n = len(leq)
    get_guards().check("max_tables", 1 << n)
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(len(masks), dtype=bool)
    for i in range(n):
        below = int(sum(1 << j for j in np.flatnonzero(leq[:, i]).tolist()))
        has_i = (masks >> i) & 1 == 1
        ok &= ~has_i | ((below & ~masks) == 0)
    return masks[ok].tolist()


def count_monotone_into_chain(leq: np.ndarray, m: int) -> int:
    """
    Monotone maps from a poset into the m-element chain, counted as
    multichains D1 <= ... <= D(m-1) of down-sets (D_j is where the map is
    below its j-th value).
    """
    if m < 1:
        raise FunctionalError("the chain needs at least one element")
    ideals = down_sets(leq)
    if m == 1:
        return 1
    counts = {d: 1 for d in ideals}
    for _ in range(m - 2):
        counts = {d: sum(c for e, c in counts.items() if e & d == e) for d in ideals}
    return sum(counts.values())
