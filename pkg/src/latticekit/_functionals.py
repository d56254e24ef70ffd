import dataclasses
import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ._exceptions import (
    EmptyFamilyError,
    EmptyMemberError,
    InternalConsistencyError,
    LatticeMismatchError,
)
from ._lattice import ElementSet, Lattice, chain, is_distributive
from ._maps import EndoMap, enumerate_continuous
from ._models import Verdict
from ._settings import get_guards, strict_continuity
from ._space import (
    Capacity,
    FunctionalTable,
    InputSpace,
    Subset,
    format_subset,
    input_space,
    lower_form_values,
    mask_to_subset,
    subset_to_mask,
    upper_form_values,
)

__all__ = [
    "characteristic_input",
    "med",
    "is_nondecreasing",
    "is_idempotent",
    "is_homogeneous",
    "range_hull",
    "is_range_homogeneous",
    "clamp_to_range",
    "is_invariant",
    "invariance_defect",
    "sugeno_integral",
    "sugeno_table",
    "p_lower",
    "p_upper",
    "is_polynomial",
    "is_sugeno",
    "is_term_functional",
    "is_aggregation",
    "ClassificationReport",
    "classify",
    "term_functional_from_family",
    "extension_from_boolean",
    "median_table",
    "homogeneous_non_monotone_example",
    "nondecreasing_mask",
    "idempotent_mask",
    "homogeneous_by_constant",
    "hull_masks",
    "invariant_mask",
    "lower_values",
    "upper_values",
]

logger = logging.getLogger(__name__)

# Batch kernels. `tables` is a (T, N) array of T tables over one input space;
# each kernel returns one flag per table (or per table and constant).

_CHUNK = 1 << 22


def nondecreasing_mask(space: InputSpace, tables: np.ndarray) -> np.ndarray:
    lo, hi = space.cover_steps
    leq = space.lattice.leq
    tables = np.asarray(tables, dtype=np.intp)
    return leq[tables[:, lo], tables[:, hi]].all(axis=1)


def idempotent_mask(space: InputSpace, tables: np.ndarray) -> np.ndarray:
    tables = np.asarray(tables, dtype=np.intp)
    return (tables[:, space.diagonal] == np.arange(space.n)[None, :]).all(axis=1)


def homogeneous_by_constant(space: InputSpace, tables: np.ndarray) -> np.ndarray:
    """(T, n) flags: both identities hold for the constant c."""
    lattice = space.lattice
    tables = np.asarray(tables, dtype=np.intp)
    out = np.empty((len(tables), space.n), dtype=bool)
    for c in range(space.n):
        meet_ok = (tables[:, space.meet_shift[c]] == lattice.meet[tables, c]).all(axis=1)
        join_ok = (tables[:, space.join_shift[c]] == lattice.join[tables, c]).all(axis=1)
        out[:, c] = meet_ok & join_ok
    return out


def hull_masks(space: InputSpace, tables: np.ndarray) -> np.ndarray:
    """(T, n) membership of each element in the convex hull of each range."""
    tables = np.asarray(tables, dtype=np.intp)
    present = np.zeros((len(tables), space.n), dtype=np.int64)
    present[np.arange(len(tables))[:, None], tables] = 1
    leq = space.lattice.leq.astype(np.int64)
    above_some = (present @ leq) > 0
    below_some = (present @ leq.T) > 0
    return above_some & below_some


def invariant_mask(space: InputSpace, tables: np.ndarray, images: np.ndarray) -> np.ndarray:
    """All maps g in the (G, n) image array satisfy F(g o f) = g(F(f))."""
    tables = np.asarray(tables, dtype=np.intp)
    images = np.asarray(images, dtype=np.intp)
    out = np.ones(len(tables), dtype=bool)
    if len(images) == 0:
        return out
    composed = space.compose_index(images)
    step = max(1, _CHUNK // max(1, len(images) * space.size))
    for start in range(0, len(tables), step):
        block = tables[start : start + step]
        lhs = block[:, composed]
        rhs = images[np.arange(len(images))[None, :, None], block[:, None, :]]
        out[start : start + step] = (lhs == rhs).all(axis=(1, 2))
    return out


def lower_values(space: InputSpace, tables: np.ndarray) -> np.ndarray:
    """P_F for each table: coefficients F(I_X)."""
    tables = np.asarray(tables, dtype=np.intp)
    return lower_form_values(space, tables[:, space.characteristic])


def upper_values(space: InputSpace, tables: np.ndarray) -> np.ndarray:
    """P^F for each table: coefficients F(I_{A-X})."""
    tables = np.asarray(tables, dtype=np.intp)
    complement = space.characteristic[space.full ^ np.arange(space.full + 1)]
    return upper_form_values(space, tables[:, complement])


# Single tables


def _names(lattice: Lattice, values: Iterable[int]) -> List[str]:
    return [lattice.names[int(v)] for v in values]


def characteristic_input(lattice: Lattice, k: int, x: Iterable[int]) -> Tuple[int, ...]:
    """I_X: top on the 1-based positions in X, bottom elsewhere."""
    mask = subset_to_mask(x, k)
    return tuple(lattice.top if mask >> i & 1 else lattice.bottom for i in range(k))


def med(lattice: Lattice, x: int, y: int, z: int) -> int:
    """(x & y) | (x & z) | (y & z)"""
    m, j = lattice.meet, lattice.join
    return int(j[j[m[x, y], m[x, z]], m[y, z]])


def is_nondecreasing(table: FunctionalTable) -> Verdict:
    """
    f <= g implies F(f) <= F(g); scanned over cover-adjacent inputs.

    The witness is the first violating pair in the order of
    InputSpace.cover_steps.
    """
    space = table.space
    lo, hi = space.cover_steps
    values = table.values
    ok = space.lattice.leq[values[lo], values[hi]]
    if ok.all():
        return Verdict(True)
    first = int(np.argmin(ok))
    a, b = int(lo[first]), int(hi[first])
    return Verdict(
        False,
        {
            "lower": space.names_of(a),
            "upper": space.names_of(b),
            "values": _names(table.lattice, (values[a], values[b])),
        },
    )


def is_idempotent(table: FunctionalTable) -> Verdict:
    """F(c, ..., c) = c for every c."""
    space = table.space
    diag = table.values[space.diagonal]
    for c in range(space.n):
        if diag[c] != c:
            return Verdict(False, {"c": table.lattice.names[c], "value": table.lattice.names[diag[c]]})
    return Verdict(True)


def _homogeneity_defect(table: FunctionalTable, constants: Iterable[int]) -> Verdict:
    lattice = table.lattice
    space = table.space
    values = table.values
    for c in constants:
        for op, shift, ltab in (
            ("meet", space.meet_shift[c], lattice.meet),
            ("join", space.join_shift[c], lattice.join),
        ):
            bad = values[shift] != ltab[values, c]
            if bad.any():
                i = int(np.argmax(bad))
                return Verdict(
                    False,
                    {
                        "c": lattice.names[c],
                        "input": space.names_of(i),
                        "operation": op,
                        "lhs": lattice.names[values[shift[i]]],
                        "rhs": lattice.names[ltab[values[i], c]],
                    },
                )
    return Verdict(True)


def is_homogeneous(table: FunctionalTable) -> Verdict:
    """
    F(f & c) = F(f) & c and F(f | c) = F(f) | c for every constant c.

    The witness names c, the input f and which identity failed.
    """
    return _homogeneity_defect(table, range(table.lattice.n))


def range_hull(table: FunctionalTable) -> ElementSet:
    """
    Convex hull of the realized range; for nondecreasing F this is the
    interval [F(0...0), F(1...1)].
    """
    lattice = table.lattice
    hull = lattice.convex_hull(np.unique(table.values).tolist())
    space = table.space
    low, high = int(table.values[space.diagonal[lattice.bottom]]), int(table.values[space.diagonal[lattice.top]])
    if nondecreasing_mask(space, table.values[None, :])[0]:
        interval = frozenset(np.flatnonzero(lattice.leq[low, :] & lattice.leq[:, high]).tolist())
        if interval != hull:
            raise InternalConsistencyError(
                f"range hull {lattice.format_set(hull)} of a nondecreasing functional is not "
                f"[{lattice.names[low]}, {lattice.names[high]}]"
            )
    return hull


def is_range_homogeneous(table: FunctionalTable) -> Verdict:
    """Homogeneity restricted to constants in the range hull."""
    return _homogeneity_defect(table, sorted(range_hull(table)))


def clamp_to_range(table: FunctionalTable, x: int) -> int:
    """med(m, x, M) where m and M are the meet and join of the range hull."""
    lattice = table.lattice
    hull = range_hull(table)
    return med(lattice, lattice.meet_set(hull), lattice.check_element(x), lattice.join_set(hull))


def invariance_defect(table: FunctionalTable, g: EndoMap, f: Sequence[int]) -> Verdict:
    """Checks the single equation F(g o f) = g(F(f))."""
    if g.lattice != table.lattice:
        raise LatticeMismatchError(f"map is over {g.lattice!r}, table over {table.lattice!r}")
    lhs = table(tuple(g.image[int(v)] for v in f))
    rhs = g.image[table(f)]
    if lhs == rhs:
        return Verdict(True)
    names = table.lattice.names
    return Verdict(
        False,
        {
            "map": g.to_dict(),
            "input": _names(table.lattice, f),
            "lhs": names[lhs],
            "rhs": names[rhs],
        },
    )


def is_invariant(table: FunctionalTable, strict: Optional[bool] = None) -> Verdict:
    """
    F(g o f) = g(F(f)) for every continuous g and every input f.

    Maps are scanned in lexicographic order of their images, inputs by index.
    """
    lattice = table.lattice
    space = table.space
    maps = enumerate_continuous(lattice, strict)
    if not maps:
        return Verdict(True)
    images = np.array([g.image for g in maps], dtype=np.intp)
    composed = space.compose_index(images)
    values = table.values
    bad = values[composed] != images[np.arange(len(maps))[:, None], values[None, :]]
    if not bad.any():
        return Verdict(True)
    gi, i = (int(v) for v in np.argwhere(bad)[0])
    return invariance_defect(table, maps[gi], space.decode(i))


def _check_normalized_capacity(v: Capacity) -> None:
    v.check_normalized()


def sugeno_integral(v: Capacity, f: Sequence[int]) -> int:
    """join over X of ( v(X) & meet_{i in X} f(i) ) for a normalized capacity."""
    _check_normalized_capacity(v)
    lattice = v.lattice
    space = input_space(lattice, v.k)
    index = space.encode(f)
    clauses = lattice.meet[v.values, space.subset_meets[:, index]]
    return lattice.join_set(clauses.tolist())


def sugeno_table(v: Capacity) -> FunctionalTable:
    _check_normalized_capacity(v)
    space = input_space(v.lattice, v.k)
    return FunctionalTable(v.lattice, v.k, lower_form_values(space, v.values[None, :])[0], label="sugeno")


def p_lower(table: FunctionalTable) -> FunctionalTable:
    """P_F: the DNF with coefficients F(I_X)."""
    return FunctionalTable(table.lattice, table.k, lower_values(table.space, table.values[None, :])[0], label="P_F")


def p_upper(table: FunctionalTable) -> FunctionalTable:
    """P^F: the CNF with coefficients F(I_{A-X})."""
    return FunctionalTable(table.lattice, table.k, upper_values(table.space, table.values[None, :])[0], label="P^F")


def _first_difference(table: FunctionalTable, other: FunctionalTable, label: str) -> Dict[str, Any]:
    i = int(np.argmax(table.values != other.values))
    names = table.lattice.names
    return {
        "input": table.space.names_of(i),
        "value": names[table.values[i]],
        label: names[other.values[i]],
    }


def is_polynomial(table: FunctionalTable) -> Verdict:
    """
    Nondecreasing and equal to P_F.

    On distributive lattices the result is cross-checked against
    "nondecreasing and range-homogeneous".
    """
    monotone = is_nondecreasing(table)
    if not monotone:
        by_form: Verdict = Verdict(False, {"nondecreasing": monotone.witness})
    else:
        lower = p_lower(table)
        by_form = Verdict(True) if lower == table else Verdict(False, _first_difference(table, lower, "p_lower"))
    if is_distributive(table.lattice):
        by_range = bool(monotone) and bool(is_range_homogeneous(table))
        if by_range != by_form.holds:
            raise InternalConsistencyError(
                f"polynomial test disagrees: F = P_F gives {by_form.holds}, "
                f"range-homogeneity gives {by_range}"
            )
    return by_form


def is_sugeno(table: FunctionalTable) -> Verdict:
    """
    Polynomial and idempotent.

    On distributive lattices cross-checked against "nondecreasing and
    homogeneous".
    """
    polynomial = is_polynomial(table)
    idempotent = is_idempotent(table)
    if not polynomial:
        by_form: Verdict = Verdict(False, {"polynomial": polynomial.witness})
    elif not idempotent:
        by_form = Verdict(False, {"idempotent": idempotent.witness})
    else:
        by_form = Verdict(True)
    if is_distributive(table.lattice):
        by_homogeneity = bool(is_nondecreasing(table)) and bool(is_homogeneous(table))
        if by_homogeneity != by_form.holds:
            raise InternalConsistencyError(
                f"Sugeno test disagrees: polynomial and idempotent gives {by_form.holds}, "
                f"nondecreasing and homogeneous gives {by_homogeneity}"
            )
    return by_form


def is_term_functional(table: FunctionalTable) -> Verdict:
    """A Sugeno integral whose coefficients F(I_X) are all bottom or top."""
    sugeno = is_sugeno(table)
    if not sugeno:
        return Verdict(False, {"sugeno": sugeno.witness})
    lattice = table.lattice
    chi = table.characteristic_values()
    for mask, value in enumerate(chi):
        if value not in (lattice.bottom, lattice.top):
            return Verdict(
                False,
                {"subset": format_subset(mask_to_subset(mask)), "coefficient": lattice.names[value]},
            )
    return Verdict(True)


def is_aggregation(table: FunctionalTable) -> Verdict:
    """Nondecreasing with F(0...0) = 0 and F(1...1) = 1."""
    monotone = is_nondecreasing(table)
    if not monotone:
        return monotone
    lattice = table.lattice
    space = table.space
    for bound in (lattice.bottom, lattice.top):
        value = int(table.values[space.diagonal[bound]])
        if value != bound:
            return Verdict(False, {"boundary": lattice.names[bound], "value": lattice.names[value]})
    return Verdict(True)


_FLAGS = (
    "nondecreasing",
    "idempotent",
    "homogeneous",
    "range_homogeneous",
    "invariant",
    "polynomial",
    "sugeno",
    "term_functional",
)


@dataclasses.dataclass(frozen=True)
class ClassificationReport:
    """
    All predicates of one functional; invariant is None when the lattice is
    too large to enumerate its continuous maps.
    """

    nondecreasing: bool
    idempotent: bool
    homogeneous: bool
    range_homogeneous: bool
    invariant: Optional[bool]
    polynomial: bool
    sugeno: bool
    term_functional: bool
    witnesses: Dict[str, Any] = dataclasses.field(default_factory=dict)
    strict_continuity: bool = False

    def flags(self) -> Dict[str, Optional[bool]]:
        return {name: getattr(self, name) for name in _FLAGS}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "flags": {k: ("skipped" if v is None else v) for k, v in self.flags().items()},
            "witnesses": self.witnesses,
            "strict_continuity": self.strict_continuity,
        }

    def summary(self) -> str:
        return " ".join(
            f"{name}={'skipped' if value is None else str(value).lower()}"
            for name, value in self.flags().items()
        )


def classify(table: FunctionalTable, strict: Optional[bool] = None) -> ClassificationReport:
    """Run every predicate and assert the implications between them."""
    strict = strict_continuity(strict)
    lattice = table.lattice
    verdicts: Dict[str, Optional[Verdict]] = {
        "nondecreasing": is_nondecreasing(table),
        "idempotent": is_idempotent(table),
        "homogeneous": is_homogeneous(table),
        "range_homogeneous": is_range_homogeneous(table),
        "polynomial": is_polynomial(table),
        "sugeno": is_sugeno(table),
        "term_functional": is_term_functional(table),
    }
    if lattice.n <= get_guards().max_continuous_elements:
        verdicts["invariant"] = is_invariant(table, strict)
    else:
        logger.info("invariance skipped: %r exceeds max_continuous_elements", lattice)
        verdicts["invariant"] = None

    flags = {name: (None if v is None else v.holds) for name, v in verdicts.items()}
    witnesses = {name: v.witness for name, v in verdicts.items() if v is not None and not v.holds}
    report = ClassificationReport(
        nondecreasing=bool(flags["nondecreasing"]),
        idempotent=bool(flags["idempotent"]),
        homogeneous=bool(flags["homogeneous"]),
        range_homogeneous=bool(flags["range_homogeneous"]),
        invariant=flags["invariant"],
        polynomial=bool(flags["polynomial"]),
        sugeno=bool(flags["sugeno"]),
        term_functional=bool(flags["term_functional"]),
        witnesses=witnesses,
        strict_continuity=strict,
    )
    _check_implications(table, report)
    return report


def _check_implications(table: FunctionalTable, report: ClassificationReport) -> None:
    lattice = table.lattice
    implications = [
        ("term_functional", "sugeno", True),
        ("sugeno", "polynomial", True),
        ("sugeno", "idempotent", True),
        ("polynomial", "nondecreasing", True),
        ("homogeneous", "range_homogeneous", True),
        ("homogeneous", "idempotent", True),
        (
            "invariant",
            "homogeneous",
            not report.strict_continuity and bool(is_distributive(lattice)),
        ),
    ]
    for premise, conclusion, applies in implications:
        if applies and getattr(report, premise) and not getattr(report, conclusion):
            raise InternalConsistencyError(f"{premise} holds but {conclusion} does not")
    if report.range_homogeneous and report.nondecreasing:
        space = table.space
        for c in sorted(range_hull(table)):
            if table.values[space.diagonal[c]] != c:
                raise InternalConsistencyError(
                    f"range-homogeneous functional is not idempotent at {lattice.names[c]}"
                )


def term_functional_from_family(lattice: Lattice, k: int, family: Iterable[Iterable[int]]) -> FunctionalTable:
    """join over X in family of meet_{i in X} f(i)."""
    members = [frozenset(int(i) for i in x) for x in family]
    if not members:
        raise EmptyFamilyError("family must have at least one member")
    if any(not x for x in members):
        raise EmptyMemberError("family members must be nonempty")
    space = input_space(lattice, k)
    meets = space.subset_meets
    masks = sorted({subset_to_mask(x, k) for x in members})
    values = meets[masks[0]]
    for mask in masks[1:]:
        values = lattice.join[values, meets[mask]]
    label = " | ".join(" & ".join(f"x{i}" for i in sorted(mask_to_subset(m))) for m in masks)
    return FunctionalTable(lattice, k, values, label=label)


def extension_from_boolean(lattice: Lattice, k: int, values: Dict[Subset, int]) -> FunctionalTable:
    """
    The polynomial functional taking the given values on the characteristic
    inputs I_X; the values must be nondecreasing in X.
    """
    v = Capacity.from_mapping(lattice, k, values)
    space = input_space(lattice, k)
    return FunctionalTable(lattice, k, lower_form_values(space, v.values[None, :])[0], label="extension")


def median_table(lattice: Lattice) -> FunctionalTable:
    """The ternary median."""
    space = input_space(lattice, 3)
    d = space.digits
    m, j = lattice.meet, lattice.join
    values = j[j[m[d[:, 0], d[:, 1]], m[d[:, 0], d[:, 2]]], m[d[:, 1], d[:, 2]]]
    return FunctionalTable(lattice, 3, values, label="median")


def homogeneous_non_monotone_example(lattice: Optional[Lattice] = None) -> FunctionalTable:
    """
    A symmetric ternary functional on the chain 0 < a < 1 that is homogeneous
    but not nondecreasing:

        F(x, x, x) = x
        F(f) = a      when two coordinates are 0 and the third is a or 1
        F(f) = f(i)   when f(i) is 0 or a and the other two are a or 1

    Every input is covered and overlapping clauses agree; both are checked.
    """
    lattice = lattice if lattice is not None else chain(3)
    if lattice.names != ("0", "a", "1") or not lattice.le(1, 2):
        raise LatticeMismatchError(f"needs the chain 0 < a < 1, got {lattice!r}")
    zero, a, one = 0, 1, 2
    space = input_space(lattice, 3)
    values = np.full(space.size, -1, dtype=np.intp)
    for i in range(space.size):
        f = space.decode(i)
        candidates = set()
        if f[0] == f[1] == f[2]:
            candidates.add(f[0])
        if sorted(f)[:2] == [zero, zero] and sorted(f)[2] in (a, one):
            candidates.add(a)
        for pos in range(3):
            others = [f[q] for q in range(3) if q != pos]
            if f[pos] in (zero, a) and all(o in (a, one) for o in others):
                candidates.add(f[pos])
        if len(candidates) != 1:
            raise InternalConsistencyError(
                f"clauses give {sorted(candidates)} at {space.names_of(i)}"
            )
        values[i] = candidates.pop()
    return FunctionalTable(lattice, 3, values, label="homogeneous, not nondecreasing")
