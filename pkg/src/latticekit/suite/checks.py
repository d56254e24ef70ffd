"""
The suite's checks.

Each check runs on one catalog lattice and compares predicate sets or
values computed along independent routes. Checks of a law that fails on
the non-distributive lattices (n5, m3) pass there only when they find a
counterexample, recorded as the outcome witness.
"""

import dataclasses
import itertools
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .._duality import (
    check_complete_distributive_law,
    crosscut_values,
    extend_to_ultracone,
    find_crosscut_violation,
    transversals,
    verify_complete_distributivity,
)
from .._functionals import (
    homogeneous_by_constant,
    homogeneous_non_monotone_example,
    hull_masks,
    idempotent_mask,
    invariance_defect,
    invariant_mask,
    is_homogeneous,
    is_invariant,
    is_nondecreasing,
    is_idempotent,
    is_sugeno,
    lower_values,
    median_table,
    nondecreasing_mask,
    sugeno_table,
    term_functional_from_family,
    upper_values,
)
from .._lattice import Lattice, catalog_lattice, is_distributive, validate_lattice
from .._maps import EndoMap, enumerate_continuous
from .._space import FunctionalTable, InputSpace, input_space, mask_to_subset
from .._terms import dnf_of, equivalent, parse, table_of, term_of
from .config import SuiteConfig
from .generators import (
    all_tables,
    monotone_set_functions,
    nondecreasing_tables,
    random_capacity,
    random_cone,
    random_family,
    random_nondecreasing,
    random_term,
)
from .oracles import MONOTONE_BOOLEAN_COUNTS, count_monotone_into_chain, product_order

__all__ = ["Outcome", "Check", "CHECKS", "NON_DISTRIBUTIVE", "checks_for"]

logger = logging.getLogger(__name__)

NON_DISTRIBUTIVE = frozenset({"n5", "m3"})
DISTRIBUTIVE = ("chain2", "chain3", "chain4", "chain5", "bool2", "bool3", "chain3xchain2")
CATALOG_ORDER = DISTRIBUTIVE + ("n5", "m3")
SMALL = ("chain2", "chain3", "chain4", "bool2", "n5", "m3")

# Failures recorded per check; further ones are only counted.
MAX_RECORDED = 10


@dataclasses.dataclass
class Outcome:
    instances: int = 0
    failures: List[Tuple[Optional[int], Dict[str, Any]]] = dataclasses.field(default_factory=list)
    failed: int = 0
    witness: Optional[Dict[str, Any]] = None

    def fail(self, seed: Optional[int], witness: Dict[str, Any]) -> None:
        self.failed += 1
        if len(self.failures) < MAX_RECORDED:
            self.failures.append((seed, witness))


CheckFn = Callable[[str, Lattice, SuiteConfig], Outcome]


@dataclasses.dataclass(frozen=True)
class Check:
    """
    One verified law. `claim` names the selection of the published command
    line (thm32, thm34, thm43, prop45, thm47, thm48, cones, examples) the
    check belongs to; it is empty for checks outside those selections.
    """

    name: str
    suite: str
    lattices: Tuple[str, ...]
    run: CheckFn
    claim: str = ""


def _names(lattice: Lattice, values: Any) -> List[str]:
    return [lattice.names[int(v)] for v in values]


def _images(lattice: Lattice, strict: bool) -> np.ndarray:
    maps = enumerate_continuous(lattice, strict)
    return np.array([g.image for g in maps], dtype=np.intp).reshape(len(maps), lattice.n)


def _table_witness(space: InputSpace, values: np.ndarray, **extra: Any) -> Dict[str, Any]:
    out: Dict[str, Any] = {"table": _names(space.lattice, values)}
    out.update(extra)
    return out


def _first_difference(space: InputSpace, a: np.ndarray, b: np.ndarray) -> Dict[str, Any]:
    i = int(np.flatnonzero(a != b)[0])
    names = space.lattice.names
    return {"input": space.names_of(i), "left": names[int(a[i])], "right": names[int(b[i])]}


def _compare_forms(
    out: Outcome, space: InputSpace, tables: np.ndarray, seeds: Sequence[Optional[int]], exact: bool = False
) -> None:
    """
    The lower and upper canonical forms of each table must agree; with
    exact, both must also reproduce the table.
    """
    lower = lower_values(space, tables)
    upper = upper_values(space, tables)
    if not exact:
        for t in np.flatnonzero(~(lower == upper).all(axis=1)).tolist():
            out.fail(seeds[t], {"form": "lower vs upper", **_first_difference(space, lower[t], upper[t])})
        return
    for t in np.flatnonzero(~((lower == tables) & (upper == tables)).all(axis=1)).tolist():
        form, side = ("lower", lower[t]) if not np.array_equal(lower[t], tables[t]) else ("upper", upper[t])
        out.fail(seeds[t], {"form": form, **_first_difference(space, tables[t], side)})


# lattices


def check_lattice_axioms(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    out = Outcome(instances=1)
    axioms = validate_lattice(lattice)
    if not axioms:
        out.fail(None, axioms.witness or {})
    distributive = is_distributive(lattice)
    expected = key not in NON_DISTRIBUTIVE
    if distributive.holds != expected:
        out.fail(None, {"distributive": distributive.holds, "expected": expected})
    if not distributive.holds:
        out.witness = distributive.witness
    return out


# normal-forms


def check_normal_forms_exhaustive(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    k = 2
    space = input_space(lattice, k)
    tables = nondecreasing_tables(lattice, k)
    out = Outcome(instances=len(tables))
    expected = count_monotone_into_chain(product_order(space), lattice.n)
    if len(tables) != expected:
        out.fail(None, {"enumerated": len(tables), "oracle": expected})
    if len(np.unique(tables, axis=0)) != len(tables):
        out.fail(None, {"duplicates": len(tables) - len(np.unique(tables, axis=0))})
    for t in np.flatnonzero(~nondecreasing_mask(space, tables)).tolist():
        out.fail(None, _table_witness(space, tables[t], reason="enumerated table is not nondecreasing"))
    _compare_forms(out, space, tables, [None] * len(tables))
    return out


def check_normal_forms_random(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    k = 2
    space = input_space(lattice, k)
    seeds = [config.seed + i for i in range(config.random_tables)]
    tables = np.array([random_nondecreasing(lattice, k, s).values for s in seeds])
    out = Outcome(instances=len(tables))
    for t in np.flatnonzero(~nondecreasing_mask(space, tables)).tolist():
        out.fail(seeds[t], _table_witness(space, tables[t], reason="generated table is not nondecreasing"))
    _compare_forms(out, space, tables, seeds)
    return out


def check_normal_forms_terms(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    variables = ("x1", "x2", "x3")
    space = input_space(lattice, len(variables))
    out = Outcome(instances=config.term_samples)
    for i in range(config.term_samples):
        seed = config.seed + i
        term = random_term(lattice, variables, seed)
        table = table_of(lattice, term, variables)
        before = out.failed
        _compare_forms(out, space, table.values[None, :], [seed], exact=True)
        normal = term_of(dnf_of(lattice, term, variables), lattice)
        if out.failed == before and not equivalent(lattice, term, normal, variables):
            out.fail(seed, {"term": repr(term), "reason": "term differs from its disjunctive form"})
    return out


# term-blockers


def check_term_blockers(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    """Join of clause meets over a family against meet of blocker joins, for every monotone {0,1} set function."""
    out = Outcome()
    for k in (1, 2, 3):
        families = monotone_set_functions(k)
        if len(families) != MONOTONE_BOOLEAN_COUNTS[k]:
            out.fail(None, {"k": k, "enumerated": len(families), "expected": MONOTONE_BOOLEAN_COUNTS[k]})
        space = input_space(lattice, k)
        for family in families:
            out.instances += 1
            lower = np.full(space.size, lattice.bottom, dtype=np.intp)
            for m in family:
                lower = lattice.join[lower, space.subset_meets[m]]
            upper = np.full(space.size, lattice.top, dtype=np.intp)
            for b in transversals(k, family):
                upper = lattice.meet[upper, space.subset_joins[b]]
            if not np.array_equal(lower, upper):
                members = [sorted(mask_to_subset(m)) for m in family]
                out.fail(None, {"k": k, "family": members, **_first_difference(space, lower, upper)})
    return out


# blocker-duality


def check_blocker_duality(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    out = Outcome(instances=1)
    verdict = verify_complete_distributivity(lattice, config.max_ground)
    if key in NON_DISTRIBUTIVE:
        if verdict.holds:
            out.fail(None, {"reason": f"no violating family on ground sets of size <= {config.max_ground}"})
        else:
            out.witness = verdict.witness
    elif not verdict.holds:
        out.fail(None, verdict.witness or {})
    return out


def check_distributive_law(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    out = Outcome()
    names = lattice.names
    if key in NON_DISTRIBUTIVE:
        for flat in itertools.product(range(lattice.n), repeat=4):
            out.instances += 1
            grid = [flat[:2], flat[2:]]
            lhs, rhs, equal = check_complete_distributive_law(lattice, grid)
            if not equal:
                out.witness = {"grid": [_names(lattice, row) for row in grid], "lhs": names[lhs], "rhs": names[rhs]}
                return out
        out.fail(None, {"reason": "no violating 2x2 grid"})
        return out
    for i in range(config.grid_samples):
        seed = config.seed + i
        rng = np.random.default_rng(seed)
        rows, cols = (int(v) for v in rng.integers(2, 4, size=2))
        grid = rng.integers(lattice.n, size=(rows, cols)).tolist()
        out.instances += 1
        lhs, rhs, equal = check_complete_distributive_law(lattice, grid)
        if not equal:
            out.fail(seed, {"grid": [_names(lattice, row) for row in grid], "lhs": names[lhs], "rhs": names[rhs]})
    return out


# cones


def check_cones(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    out = Outcome(instances=config.cone_samples)
    names = lattice.names
    for i in range(config.cone_samples):
        seed = config.seed + i
        seed_cone = random_cone(lattice, seed)
        ultra = extend_to_ultracone(lattice, seed_cone)
        lower, upper = crosscut_values(lattice, ultra)
        if lower == upper:
            continue
        witness = {"seed_cone": seed_cone.to_dict(), "lower": names[lower], "upper": names[upper]}
        if key in NON_DISTRIBUTIVE:
            out.witness = witness
            return out
        out.fail(seed, witness)
    if key in NON_DISTRIBUTIVE:
        found = find_crosscut_violation(lattice)
        if found is None:
            out.fail(None, {"reason": "no ultracone with unequal cross-cuts"})
        else:
            lower, upper = crosscut_values(lattice, found)
            out.witness = {"ultracone": found.to_dict(), "lower": names[lower], "upper": names[upper]}
    return out


# sugeno-samples


def check_sugeno_samples(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    out = Outcome(instances=config.capacity_samples)
    for i in range(config.capacity_samples):
        seed = config.seed + i
        k = 1 + i % 3
        table = sugeno_table(random_capacity(lattice, k, seed))
        space = table.space
        values = table.values[None, :]
        if not (nondecreasing_mask(space, values)[0] and homogeneous_by_constant(space, values).all()):
            out.fail(
                seed,
                {
                    "k": k,
                    "nondecreasing": is_nondecreasing(table).to_dict(),
                    "homogeneous": is_homogeneous(table).to_dict(),
                },
            )
        elif not is_sugeno(table):
            out.fail(seed, {"k": k, "reason": "Sugeno table not recognised as a Sugeno integral"})
    return out


def check_term_invariance_samples(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    out = Outcome(instances=config.term_samples)
    images = _images(lattice, config.strict_continuity)
    for i in range(config.term_samples):
        seed = config.seed + i
        k = 1 + i % 3
        family = random_family(k, seed)
        table = term_functional_from_family(lattice, k, family)
        if not invariant_mask(table.space, table.values[None, :], images)[0]:
            verdict = is_invariant(table, config.strict_continuity)
            out.fail(seed, {"family": [sorted(x) for x in family], "invariant": verdict.to_dict()})
    return out


# term-invariance


def check_term_invariance(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    """{0,1} on characteristic inputs, nondecreasing and invariant, against the term functionals."""
    k = 2
    space = input_space(lattice, k)
    tables = all_tables(lattice, k)
    out = Outcome(instances=len(tables))
    boolean = np.isin(tables[:, space.characteristic], [lattice.bottom, lattice.top]).all(axis=1)
    invariant = invariant_mask(space, tables, _images(lattice, config.strict_continuity))
    selected = boolean & nondecreasing_mask(space, tables) & invariant
    found = {tuple(row) for row in tables[selected].tolist()}

    terms = set()
    for family in monotone_set_functions(k):
        if family in ([], [0]):
            if config.strict_continuity:
                bound = lattice.bottom if not family else lattice.top
                terms.add(tuple(FunctionalTable.constant(lattice, k, bound).values.tolist()))
            continue
        table = term_functional_from_family(lattice, k, [mask_to_subset(m) for m in family])
        terms.add(tuple(table.values.tolist()))

    for values in sorted(found - terms):
        out.fail(None, _table_witness(space, values, reason="selected but not a term functional"))
    for values in sorted(terms - found):
        out.fail(None, _table_witness(space, values, reason="term functional not selected"))
    return out


# chain-monotonicity

_MONOTONICITY_ARITY = {"chain3": 2, "chain4": 1}


def check_invariant_monotone(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    k = _MONOTONICITY_ARITY[key]
    space = input_space(lattice, k)
    tables = all_tables(lattice, k)
    out = Outcome(instances=len(tables))
    invariant = invariant_mask(space, tables, _images(lattice, config.strict_continuity))
    for t in np.flatnonzero(invariant & ~nondecreasing_mask(space, tables)).tolist():
        out.fail(None, _table_witness(space, tables[t], reason="invariant but not nondecreasing"))
    return out


def check_boolean_boundary(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    """On {0,1}, under the lenient reading: invariant iff idempotent; parity is invariant, not nondecreasing."""
    out = Outcome()
    images = _images(lattice, False)
    for k in (1, 2, 3):
        space = input_space(lattice, k)
        tables = all_tables(lattice, k)
        out.instances += len(tables)
        invariant = invariant_mask(space, tables, images)
        idempotent = idempotent_mask(space, tables)
        for t in np.flatnonzero(invariant != idempotent).tolist():
            out.fail(None, _table_witness(space, tables[t], k=k, invariant=bool(invariant[t])))
    space = input_space(lattice, 3)
    parity = space.digits.sum(axis=1) % 2
    flags = {
        "invariant": bool(invariant_mask(space, parity[None, :], images)[0]),
        "nondecreasing": bool(nondecreasing_mask(space, parity[None, :])[0]),
    }
    if flags != {"invariant": True, "nondecreasing": False}:
        out.fail(None, {"parity": flags})
    return out


# characterizations


def _characterization_flags(key: str, lattice: Lattice) -> Tuple[InputSpace, np.ndarray, Dict[str, np.ndarray]]:
    k = _MONOTONICITY_ARITY[key]
    space = input_space(lattice, k)
    tables = all_tables(lattice, k)
    by_constant = homogeneous_by_constant(space, tables)
    flags = {
        "nondecreasing": nondecreasing_mask(space, tables),
        "idempotent": idempotent_mask(space, tables),
        "homogeneous": by_constant.all(axis=1),
        "range_homogeneous": (by_constant | ~hull_masks(space, tables)).all(axis=1),
        "polynomial": (lower_values(space, tables) == tables).all(axis=1),
    }
    return space, tables, flags


def _compare_sets(out: Outcome, space: InputSpace, tables: np.ndarray, left: np.ndarray, right: np.ndarray) -> None:
    out.instances = len(tables)
    for t in np.flatnonzero(left != right).tolist():
        out.fail(None, _table_witness(space, tables[t], left=bool(left[t]), right=bool(right[t])))


def check_sugeno_characterization(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    """nondecreasing and homogeneous iff polynomial and idempotent."""
    out = Outcome()
    space, tables, f = _characterization_flags(key, lattice)
    _compare_sets(out, space, tables, f["nondecreasing"] & f["homogeneous"], f["polynomial"] & f["idempotent"])
    return out


def check_polynomial_characterization(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    """nondecreasing and range-homogeneous iff equal to the lower canonical form."""
    out = Outcome()
    space, tables, f = _characterization_flags(key, lattice)
    _compare_sets(out, space, tables, f["nondecreasing"] & f["range_homogeneous"], f["polynomial"])
    return out


# examples


def _expect(out: Outcome, name: str, actual: Dict[str, bool], expected: Dict[str, bool]) -> None:
    out.instances += 1
    if actual != expected:
        out.fail(None, {"example": name, "flags": actual, "expected": expected})


def check_examples(key: str, lattice: Lattice, config: SuiteConfig) -> Outcome:
    out = Outcome()
    strict = config.strict_continuity
    if key == "chain2":
        space = input_space(lattice, 3)
        parity = FunctionalTable(lattice, 3, space.digits.sum(axis=1) % 2, label="parity")
        _expect(
            out,
            "parity",
            {
                "invariant": bool(is_invariant(parity, False)),
                "idempotent": bool(is_idempotent(parity)),
                "homogeneous": bool(is_homogeneous(parity)),
                "nondecreasing": bool(is_nondecreasing(parity)),
            },
            {"invariant": True, "idempotent": True, "homogeneous": True, "nondecreasing": False},
        )
    elif key == "chain3":
        example = homogeneous_non_monotone_example(lattice)
        _expect(
            out,
            "homogeneous, not nondecreasing",
            {"homogeneous": bool(is_homogeneous(example)), "nondecreasing": bool(is_nondecreasing(example))},
            {"homogeneous": True, "nondecreasing": False},
        )
        _expect(out, "median", {"invariant": bool(is_invariant(median_table(lattice), strict))}, {"invariant": True})
        constant = FunctionalTable.constant(lattice, 2, lattice.index("a"))
        _expect(out, "constant a", {"homogeneous": bool(is_homogeneous(constant))}, {"homogeneous": False})
    elif key == "chain4":
        variables = ("x1", "x2")
        table = table_of(lattice, parse("x1 & a | x1 & x2 | a & x2", variables, lattice), variables)
        g = EndoMap(lattice, tuple(lattice.indices(["0", "b", "b", "1"])))
        _expect(
            out,
            "med(x1, a, x2)",
            {
                "sugeno": bool(is_sugeno(table)),
                "invariant": bool(is_invariant(table, strict)),
                "named_witness": bool(invariance_defect(table, g, lattice.indices(["0", "1"]))),
            },
            {"sugeno": True, "invariant": False, "named_witness": False},
        )
    return out


CHECKS: Tuple[Check, ...] = (
    Check("lattice-axioms", "lattices", CATALOG_ORDER, check_lattice_axioms),
    Check("normal-forms-exhaustive", "normal-forms", ("chain3",), check_normal_forms_exhaustive, "thm32"),
    Check("normal-forms-random", "normal-forms", ("chain4", "bool2"), check_normal_forms_random, "thm32"),
    Check(
        "normal-forms-terms", "normal-forms", ("chain3", "bool2", "chain3xchain2"), check_normal_forms_terms, "thm32"
    ),
    Check("term-blockers", "term-blockers", ("chain3", "bool2"), check_term_blockers, "thm34"),
    Check("blocker-duality", "blocker-duality", CATALOG_ORDER, check_blocker_duality, "thm34"),
    Check("complete-distributive-law", "blocker-duality", CATALOG_ORDER, check_distributive_law, "thm34"),
    Check("cones", "cones", CATALOG_ORDER, check_cones, "cones"),
    Check("sugeno-samples", "sugeno-samples", DISTRIBUTIVE, check_sugeno_samples, "thm47"),
    Check("term-invariance-samples", "sugeno-samples", SMALL, check_term_invariance_samples, "thm43"),
    Check("term-invariance", "term-invariance", ("chain3",), check_term_invariance, "thm43"),
    Check("invariant-monotone", "chain-monotonicity", ("chain3", "chain4"), check_invariant_monotone, "prop45"),
    Check("boolean-boundary", "chain-monotonicity", ("chain2",), check_boolean_boundary, "prop45"),
    Check("sugeno-characterization", "characterizations", ("chain3", "chain4"), check_sugeno_characterization, "thm47"),
    Check(
        "polynomial-characterization",
        "characterizations",
        ("chain3", "chain4"),
        check_polynomial_characterization,
        "thm48",
    ),
    Check("examples", "examples", ("chain2", "chain3", "chain4"), check_examples, "examples"),
)

_BY_NAME = {check.name: check for check in CHECKS}


def checks_for(suite: str) -> Tuple[Check, ...]:
    """Checks of a suite, selected by suite name or by claim name."""
    return tuple(c for c in CHECKS if suite in ("all", c.suite, c.claim))


def run_check(name: str, key: str, config: SuiteConfig) -> Outcome:
    lattice = catalog_lattice(key)
    logger.debug("running %s on %s", name, key)
    return _BY_NAME[name].run(key, lattice, config)
