import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, TextIO

from .._exceptions import LatticeKitError, exit_code_for
from .._settings import Guards, configure, get_guards
from ..suite import SUITES
from ._commands import EXAMPLES, HANDLERS

__all__ = ["build_parser", "main"]

logger = logging.getLogger(__name__)

FORMATS_HELP = """\
lattices:
  A catalog name (chain2 chain3 chain4 chain5 bool2 bool3 chain3xchain2 n5 m3)
  or a lattice file:

    lattice n5
    elements: 0 x y z 1
    covers: 0<x x<z z<1 0<y y<1

  `x<y` means y covers x; bottom and top are inferred. `#` starts a comment.

functional tables (one line per input, all inputs exactly once):

    functional k=1 lattice=chain3
    0 -> 0
    a -> a
    1 -> 1

capacities (all 2^k subsets, `{}` is the empty set):

    capacity k=2 lattice=chain3
    {} -> 0
    {1} -> a
    {2} -> 0
    {1,2} -> 1

expressions: `&` (or /\\ ∧) binds tighter than `|` (or \\/ ∨); identifiers are
variables when listed in --vars and lattice elements otherwise; names that are
not plain words go between backquotes, e.g. `(0,a)`.

maps: `map: 0->0 a->1 1->1`, every element once.
families: `{x},{y,z}`.

exit status: 0 success, 1 failed check, 2 usage or input error.
"""

_GUARD_FLAGS = {
    "max_elements": "elements of any lattice",
    "max_continuous_elements": "lattice size for enumerating continuous maps",
    "max_arity": "number of variables",
    "max_inputs": "size of L^k for exhaustive evaluation",
    "max_tables": "size of exhaustively enumerated table spaces",
    "max_choice_functions": "choice functions of the complete distributive law",
    "max_cone_elements": "lattice size for cone saturation",
}


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--strict-continuity",
        action="store_true",
        help="continuous maps must also fix bottom and top",
    )
    guards = common.add_argument_group("size guards")
    for field, text in _GUARD_FLAGS.items():
        flags = ["--" + field.replace("_", "-")]
        if field == "max_elements":
            flags.append("--max-size")
        guards.add_argument(*flags, dest=field, type=int, metavar="N", help=text)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="latticekit",
        description="Finite lattices, lattice polynomials, Sugeno integrals and their characterizations.",
        epilog=FORMATS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    groups = parser.add_subparsers(dest="command", metavar="command", required=True)

    def sub(group: Any, name: str, help_text: str) -> argparse.ArgumentParser:
        return group.add_parser(
            name,
            help=help_text,
            parents=[common],
            epilog=FORMATS_HELP,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )

    lattice = groups.add_parser("lattice", help="validate and list lattices").add_subparsers(
        dest="action", metavar="action", required=True
    )
    p = sub(lattice, "check", "validate a lattice and test distributivity")
    p.add_argument("lattice")
    sub(lattice, "list", "list the catalog")
    p = sub(lattice, "show", "print a lattice in file format")
    p.add_argument("lattice")

    expr = groups.add_parser("expr", help="lattice expressions").add_subparsers(
        dest="action", metavar="action", required=True
    )
    p = sub(expr, "normalize", "canonical DNF or CNF of an expression")
    p.add_argument("--lattice", required=True)
    p.add_argument("--vars", required=True, help="comma-separated variables, e.g. x1,x2")
    p.add_argument("--form", choices=("dnf", "cnf"), default="dnf")
    p.add_argument("expr")
    p = sub(expr, "eval", "evaluate an expression at an assignment")
    p.add_argument("--lattice", default="chain3", help="catalog name or lattice file (default: chain3)")
    p.add_argument("--vars", help="variables (default: those of --at)")
    p.add_argument("--at", required=True, help="assignment, e.g. x1=a,x2=1")
    p.add_argument("expr")
    p = sub(expr, "equiv", "decide whether two expressions induce the same functional")
    p.add_argument("--lattice", required=True)
    p.add_argument("--vars", required=True)
    p.add_argument("left")
    p.add_argument("right")

    functional = groups.add_parser("functional", help="functional tables").add_subparsers(
        dest="action", metavar="action", required=True
    )
    p = sub(functional, "classify", "run every predicate on a table")
    p.add_argument("--lattice", required=True)
    p.add_argument("--table", required=True)
    p = sub(functional, "example", "print a built-in example table")
    p.add_argument("name", choices=sorted(EXAMPLES))
    p.add_argument("--lattice")

    sugeno = groups.add_parser("sugeno", help="Sugeno integrals").add_subparsers(
        dest="action", metavar="action", required=True
    )
    p = sub(sugeno, "eval", "Sugeno integral of a capacity at an input")
    p.add_argument("--lattice", required=True)
    p.add_argument("--capacity", required=True)
    p.add_argument("--at", required=True, help="input values, e.g. a,1,0")

    duality = groups.add_parser("duality", help="distributivity through families of sets").add_subparsers(
        dest="action", metavar="action", required=True
    )
    p = sub(duality, "check-cd", "search for a blocker duality violation")
    p.add_argument("--lattice", required=True)
    p.add_argument("--max-ground", type=int, default=3)
    p = sub(duality, "crosscut", "cross-cut values of a cone and of its ultracone")
    p.add_argument("--lattice", required=True)
    p.add_argument("--hfamily", required=True)
    p.add_argument("--kfamily", required=True)

    maps = groups.add_parser("map", help="self-maps").add_subparsers(dest="action", metavar="action", required=True)
    p = sub(maps, "check", "test continuity of a map")
    p.add_argument("--lattice", required=True)
    p.add_argument("map")

    p = sub(groups, "verify", "run the verification suite")
    p.set_defaults(action=None)
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lattice", dest="only", action="append", help="restrict to a catalog lattice (repeatable)")
    p.add_argument("--deterministic", action="store_true", help="zero all timing fields")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-ground", type=int, default=3)
    p.add_argument("--random-tables", type=int)
    p.add_argument("--term-samples", type=int)
    p.add_argument("--capacity-samples", type=int)
    p.add_argument("--cone-samples", type=int)
    p.add_argument("--grid-samples", type=int)
    return parser


def _setup_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _guard_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        field: getattr(args, field) for field in _GUARD_FLAGS if getattr(args, field, None) is not None
    }
    if getattr(args, "strict_continuity", False):
        overrides["strict_continuity"] = True
    return overrides


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    _setup_logging(args.verbose)

    previous: Guards = get_guards()
    try:
        configure(previous, **_guard_overrides(args))
        return HANDLERS[(args.command, args.action)](args, out)
    except LatticeKitError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc.message}", file=sys.stderr)
        return exit_code_for(exc)
    finally:
        configure(previous)
