"""Subcommand handlers. Each takes the parsed arguments and an output stream and returns an exit code."""

import argparse
import json
from typing import Any, Dict, List, Optional, TextIO

from .._duality import Cone, crosscut_values, extend_to_ultracone, verify_complete_distributivity
from .._formats import (
    functional_to_text,
    lattice_to_text,
    load_lattice,
    parse_assignment,
    parse_family,
    parse_map,
    parse_values,
    parse_variables,
    read_capacity,
    read_functional,
)
from .._functionals import (
    classify,
    homogeneous_non_monotone_example,
    median_table,
    sugeno_integral,
)
from .._lattice import CATALOG, catalog_lattice, chain, is_distributive, validate_lattice
from .._maps import continuity_defect
from .._settings import get_guards
from .._space import FunctionalTable, input_space
from .._terms import cnf_of, dnf_of, equivalent, evaluate, parse, print_term, term_of
from ..suite import SuiteConfig, run_suite

__all__ = ["HANDLERS", "EXAMPLES"]


def _dump(out: TextIO, payload: Any) -> None:
    out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _line(out: TextIO, text: str = "") -> None:
    out.write(text + "\n")


def _witness_tuple(witness: Dict[str, Any]) -> str:
    return "(" + ",".join(witness["triple"]) + ")"


# lattice


def lattice_check(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    axioms = validate_lattice(lattice)
    distributive = is_distributive(lattice)
    if args.json:
        _dump(
            out,
            {
                "lattice": lattice.name,
                "elements": list(lattice.names),
                "valid": axioms.to_dict(),
                "distributive": distributive.to_dict(),
            },
        )
        return 0
    if not axioms:
        _line(out, f"invalid lattice: {json.dumps(axioms.witness, sort_keys=True)}")
        return 0
    text = f"valid lattice; distributive: {str(distributive.holds).lower()}"
    if distributive.witness is not None:
        text += f"; witness: {_witness_tuple(distributive.witness)}"
    _line(out, text)
    return 0


def lattice_list(args: argparse.Namespace, out: TextIO) -> int:
    rows = []
    for name in CATALOG:
        lattice = catalog_lattice(name)
        rows.append({"name": name, "elements": lattice.n, "distributive": is_distributive(lattice).holds})
    if args.json:
        _dump(out, rows)
        return 0
    for row in rows:
        _line(out, f"{row['name']:<14} {row['elements']:>2} elements  distributive: {str(row['distributive']).lower()}")
    return 0


def lattice_show(args: argparse.Namespace, out: TextIO) -> int:
    out.write(lattice_to_text(load_lattice(args.lattice)))
    return 0


# expr


def _variables(args: argparse.Namespace, fallback: Optional[List[str]] = None) -> List[str]:
    if args.vars:
        return list(parse_variables(args.vars))
    return list(fallback or [])


def expr_normalize(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    variables = _variables(args)
    term = parse(args.expr, variables, lattice)
    nf = (dnf_of if args.form == "dnf" else cnf_of)(lattice, term, variables)
    canonical = print_term(term_of(nf), variables, lattice)
    if args.json:
        _dump(
            out,
            {
                "form": args.form,
                "variables": variables,
                "term": canonical,
                "coefficients": [line.split(" -> ") for line in nf.listing()],
            },
        )
        return 0
    _line(out, canonical)
    for line in nf.listing():
        _line(out, line)
    return 0


def expr_eval(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    assignment = parse_assignment(args.at, lattice)
    variables = _variables(args, list(assignment))
    term = parse(args.expr, variables, lattice)
    value = lattice.names[evaluate(lattice, term, assignment)]
    if args.json:
        _dump(out, {"value": value})
    else:
        _line(out, value)
    return 0


def expr_equiv(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    variables = _variables(args)
    t1 = parse(args.left, variables, lattice)
    t2 = parse(args.right, variables, lattice)
    same = equivalent(lattice, t1, t2, variables)
    if args.json:
        _dump(out, {"equivalent": same})
    else:
        _line(out, "equivalent" if same else "not equivalent")
    return 0 if same else 1


# functional


def functional_classify(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    table = read_functional(args.table, lattice)
    report = classify(table)
    if args.json:
        _dump(out, report.to_dict())
        return 0
    _line(out, report.summary())
    for name, witness in report.witnesses.items():
        _line(out, f"  {name}: {json.dumps(witness, sort_keys=True)}")
    return 0


def _parity() -> FunctionalTable:
    lattice = chain(2)
    space = input_space(lattice, 3)
    return FunctionalTable(lattice, 3, space.digits.sum(axis=1) % 2, label="parity")


EXAMPLES = {
    "homogeneous-non-monotone": lambda lattice: homogeneous_non_monotone_example(lattice or chain(3)),
    "median": lambda lattice: median_table(lattice or chain(3)),
    "parity": lambda lattice: _parity(),
}


def functional_example(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice) if args.lattice else None
    out.write(functional_to_text(EXAMPLES[args.name](lattice)))
    return 0


# sugeno


def sugeno_eval(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    capacity = read_capacity(args.capacity, lattice)
    value = lattice.names[sugeno_integral(capacity, parse_values(args.at, lattice))]
    if args.json:
        _dump(out, {"value": value})
    else:
        _line(out, value)
    return 0


# duality


def duality_check_cd(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    verdict = verify_complete_distributivity(lattice, args.max_ground)
    if args.json:
        _dump(out, {"max_ground": args.max_ground, **verdict.to_dict()})
    elif verdict:
        _line(out, f"PASS (no violation on ground sets of size <= {args.max_ground})")
    else:
        w = verdict.witness or {}
        _line(out, "FAIL")
        _line(out, "ground: {" + ",".join(w["ground"]) + "}")
        _line(out, "family: " + ",".join("{" + ",".join(s) + "}" for s in w["family"]))
        _line(out, f"lower: {w['lower']}")
        _line(out, f"upper: {w['upper']}")
    return 0 if verdict else 1


def duality_crosscut(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    cone = Cone(lattice, parse_family(args.hfamily, lattice), parse_family(args.kfamily, lattice))
    names = lattice.names
    lower, upper = crosscut_values(lattice, cone)
    ultra = extend_to_ultracone(lattice, cone)
    u_lower, u_upper = crosscut_values(lattice, ultra)
    if args.json:
        _dump(
            out,
            {
                "cone": {"lower": names[lower], "upper": names[upper]},
                "ultracone": {
                    "h": ultra.h.to_list(),
                    "k": ultra.k.to_list(),
                    "lower": names[u_lower],
                    "upper": names[u_upper],
                    "equal": u_lower == u_upper,
                },
            },
        )
        return 0
    _line(out, f"cone: lower {names[lower]} upper {names[upper]}")
    _line(out, f"ultracone: lower {names[u_lower]} upper {names[u_upper]} equal: {str(u_lower == u_upper).lower()}")
    _line(out, f"  H: {ultra.h.format()}")
    _line(out, f"  K: {ultra.k.format()}")
    return 0


# map


def map_check(args: argparse.Namespace, out: TextIO) -> int:
    lattice = load_lattice(args.lattice)
    g = parse_map(args.map, lattice)
    verdict = continuity_defect(lattice, g)
    if args.json:
        _dump(out, {"map": g.to_dict(), **verdict.to_dict()})
    elif verdict:
        _line(out, "continuous")
    else:
        _line(out, f"not continuous: {json.dumps(verdict.witness, sort_keys=True)}")
    return 0 if verdict else 1


# verify


def verify(args: argparse.Namespace, out: TextIO) -> int:
    options: Dict[str, Any] = {}
    for name in ("random_tables", "term_samples", "capacity_samples", "cone_samples", "grid_samples"):
        if getattr(args, name) is not None:
            options[name] = getattr(args, name)
    config = SuiteConfig(
        suite=args.suite,
        seed=args.seed,
        lattices=tuple(args.only) if args.only else None,
        max_ground=args.max_ground,
        jobs=args.jobs,
        deterministic=args.deterministic,
        strict_continuity=get_guards().strict_continuity,
        **options,
    )
    report = run_suite(config)
    if args.json:
        out.write(report.to_json() + "\n")
    else:
        _line(out, report.summary())
    return 0 if report.passed else 1


HANDLERS = {
    ("lattice", "check"): lattice_check,
    ("lattice", "list"): lattice_list,
    ("lattice", "show"): lattice_show,
    ("expr", "normalize"): expr_normalize,
    ("expr", "eval"): expr_eval,
    ("expr", "equiv"): expr_equiv,
    ("functional", "classify"): functional_classify,
    ("functional", "example"): functional_example,
    ("sugeno", "eval"): sugeno_eval,
    ("duality", "check-cd"): duality_check_cd,
    ("duality", "crosscut"): duality_crosscut,
    ("map", "check"): map_check,
    ("verify", None): verify,
}
