"""
Line-based text formats.

Lattice file::

    lattice n5
    elements: 0 x y z 1
    covers: 0<x x<z z<1 0<y y<1

Functional table file (one line per input, element names)::

    functional k=2 lattice=chain3
    0 0 -> 0
    ...

Capacity file (`{}` is the empty set)::

    capacity k=2 lattice=chain3
    {} -> 0
    {1} -> a
    {2} -> 0
    {1,2} -> 1

Lines starting with `#` and blank lines are ignored everywhere.
"""

import os
import re
import warnings
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

import numpy as np

from ._duality import SetFamily
from ._exceptions import FormatError, UnknownElementError
from ._lattice import CATALOG, Lattice, catalog_lattice, lattice_from_covers
from ._maps import EndoMap
from ._space import Capacity, FunctionalTable, format_subset, input_space, mask_to_subset
from ._terms import check_variables

__all__ = [
    "parse_lattice",
    "lattice_to_text",
    "read_lattice",
    "load_lattice",
    "parse_functional",
    "functional_to_text",
    "read_functional",
    "parse_capacity",
    "capacity_to_text",
    "read_capacity",
    "parse_map",
    "parse_family",
    "parse_assignment",
    "parse_values",
    "parse_variables",
]

PathLike = Union[str, "os.PathLike[str]"]

_HEADER = re.compile(r"^(functional|capacity)\s+k=(\d+)(?:\s+lattice=(\S+))?\s*$")
_SET = re.compile(r"\{([^{}]*)\}")


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _read(path: PathLike) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {os.fspath(path)}: {exc.strerror}") from None


# Lattices


def parse_lattice(text: str) -> Lattice:
    name: Optional[str] = None
    elements: Optional[List[str]] = None
    covers: List[Tuple[str, str]] = []
    for number, line in _lines(text):
        if name is None:
            head, _, rest = line.partition(" ")
            if head != "lattice" or not rest.strip():
                raise FormatError("expected 'lattice <name>'", line=number)
            name = rest.strip()
        elif elements is None:
            if not line.startswith("elements:"):
                raise FormatError("expected 'elements: e1 e2 ...'", line=number)
            elements = line[len("elements:"):].split()
            if not elements:
                raise FormatError("no elements listed", line=number)
        else:
            if not line.startswith("covers:"):
                raise FormatError("expected 'covers: a<b ...'", line=number)
            for token in line[len("covers:"):].split():
                lo, sep, hi = token.partition("<")
                if not sep or not lo or not hi:
                    raise FormatError(f"malformed cover {token!r}", line=number)
                covers.append((lo, hi))
    if name is None or elements is None:
        raise FormatError("incomplete lattice file: header and elements line are required")
    return lattice_from_covers(elements, covers, name=name)


def lattice_to_text(lattice: Lattice) -> str:
    names = lattice.names
    pairs = " ".join(f"{names[lo]}<{names[hi]}" for lo, hi in lattice.cover_pairs)
    lines = [
        f"lattice {lattice.name or 'unnamed'}",
        "elements: " + " ".join(names),
    ]
    if pairs:
        lines.append("covers: " + pairs)
    return "\n".join(lines) + "\n"


def read_lattice(path: PathLike) -> Lattice:
    return parse_lattice(_read(path))


def load_lattice(ref: str) -> Lattice:
    """A catalog name (chain3, n5, ...) or the path of a lattice file."""
    if ref in CATALOG:
        return catalog_lattice(ref)
    if os.path.exists(ref):
        return read_lattice(ref)
    raise FormatError(f"{ref!r} is neither a catalog lattice ({', '.join(CATALOG)}) nor a file")


# Functional tables and capacities


def _header(line: str, number: int, kind: str, lattice: Lattice) -> int:
    match = _HEADER.match(line)
    if match is None or match.group(1) != kind:
        raise FormatError(f"expected '{kind} k=<arity> lattice=<name>'", line=number)
    declared = match.group(3)
    if declared is not None and lattice.name and declared != lattice.name:
        warnings.warn(
            f"{kind} file declares lattice {declared!r} but {lattice.name!r} was supplied",
            RuntimeWarning,
            stacklevel=3,
        )
    return int(match.group(2))


def _element(lattice: Lattice, name: str, number: Optional[int] = None) -> int:
    try:
        return lattice.index(name)
    except UnknownElementError as exc:
        raise FormatError(exc.message, line=number) from None


def parse_functional(text: str, lattice: Lattice, label: str = "") -> FunctionalTable:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty functional file")
    k = _header(lines[0][1], lines[0][0], "functional", lattice)
    space = input_space(lattice, k)
    values = np.full(space.size, -1, dtype=np.intp)
    for number, line in lines[1:]:
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise FormatError("expected 'v1 ... vk -> w'", line=number)
        args = lhs.split()
        if len(args) != k:
            raise FormatError(f"expected {k} arguments, got {len(args)}", line=number)
        index = space.encode([_element(lattice, a, number) for a in args])
        if values[index] >= 0:
            raise FormatError(f"duplicate input {' '.join(args)}", line=number)
        values[index] = _element(lattice, rhs.strip(), number)
    missing = np.flatnonzero(values < 0)
    if len(missing):
        first = " ".join(space.names_of(int(missing[0])))
        raise FormatError(f"{len(missing)} inputs have no value, first: {first}")
    return FunctionalTable(lattice, k, values, label=label)


def functional_to_text(table: FunctionalTable) -> str:
    lattice = table.lattice
    names = lattice.names
    out = [f"functional k={table.k} lattice={lattice.name or 'unnamed'}"]
    for f, w in table.rows():
        out.append(" ".join(names[v] for v in f) + f" -> {names[w]}")
    return "\n".join(out) + "\n"


def read_functional(path: PathLike, lattice: Lattice) -> FunctionalTable:
    return parse_functional(_read(path), lattice, label=os.path.basename(os.fspath(path)))


def _parse_positions(body: str, k: int, number: int) -> Tuple[int, ...]:
    items = [s.strip() for s in body.split(",") if s.strip()]
    try:
        positions = tuple(int(s) for s in items)
    except ValueError:
        raise FormatError(f"subset {{{body}}} must list positions 1..{k}", line=number) from None
    if any(not 1 <= i <= k for i in positions) or len(set(positions)) != len(positions):
        raise FormatError(f"subset {{{body}}} must list distinct positions 1..{k}", line=number)
    return positions


def parse_capacity(text: str, lattice: Lattice) -> Capacity:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty capacity file")
    k = _header(lines[0][1], lines[0][0], "capacity", lattice)
    values: Dict[FrozenSet[int], int] = {}
    for number, line in lines[1:]:
        lhs, sep, rhs = line.partition("->")
        match = _SET.fullmatch(lhs.strip())
        if not sep or match is None:
            raise FormatError("expected '{i,j,...} -> w'", line=number)
        x = frozenset(_parse_positions(match.group(1), k, number))
        if x in values:
            raise FormatError(f"duplicate subset {format_subset(x)}", line=number)
        values[x] = _element(lattice, rhs.strip(), number)
    if len(values) != 1 << k:
        missing = [
            format_subset(mask_to_subset(m))
            for m in range(1 << k)
            if mask_to_subset(m) not in values
        ]
        raise FormatError(f"capacity misses subsets: {', '.join(missing)}")
    return Capacity.from_mapping(lattice, k, values)


def capacity_to_text(v: Capacity) -> str:
    names = v.lattice.names
    out = [f"capacity k={v.k} lattice={v.lattice.name or 'unnamed'}"]
    for mask in range(1 << v.k):
        out.append(f"{format_subset(mask_to_subset(mask))} -> {names[v.values[mask]]}")
    return "\n".join(out) + "\n"


def read_capacity(path: PathLike, lattice: Lattice) -> Capacity:
    return parse_capacity(_read(path), lattice)


# Inline arguments


def parse_map(text: str, lattice: Lattice) -> EndoMap:
    """`map: e1->v1 e2->v2 ...`; the `map:` prefix is optional."""
    body = text.strip()
    if body.startswith("map:"):
        body = body[len("map:"):]
    image: Dict[int, int] = {}
    for token in body.split():
        src, sep, dst = token.partition("->")
        if not sep:
            raise FormatError(f"malformed map entry {token!r}")
        e = _element(lattice, src)
        if e in image:
            raise FormatError(f"element {src!r} mapped twice")
        image[e] = _element(lattice, dst)
    missing = [lattice.names[e] for e in range(lattice.n) if e not in image]
    if missing:
        raise FormatError(f"map leaves {', '.join(missing)} unassigned")
    return EndoMap(lattice, tuple(image[e] for e in range(lattice.n)))


def parse_family(text: str, lattice: Lattice) -> SetFamily:
    """`{x},{y,z}` over lattice elements; an empty string is the empty family."""
    body = text.strip()
    sets = []
    pos = 0
    for match in _SET.finditer(body):
        gap = body[pos:match.start()].strip()
        if gap not in ("", ","):
            raise FormatError(f"unexpected {gap!r} in family {text!r}")
        names = [s.strip() for s in match.group(1).split(",") if s.strip()]
        sets.append([_element(lattice, nm) for nm in names])
        pos = match.end()
    if body[pos:].strip():
        raise FormatError(f"unexpected {body[pos:].strip()!r} in family {text!r}")
    return SetFamily.of_elements(lattice, sets)


def parse_variables(text: str) -> Tuple[str, ...]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise FormatError("at least one variable is required")
    return check_variables(names)


def parse_assignment(text: str, lattice: Lattice) -> Dict[str, int]:
    """`x1=a,x2=1`"""
    out: Dict[str, int] = {}
    for item in (s.strip() for s in text.split(",")):
        if not item:
            continue
        var, sep, value = item.partition("=")
        if not sep or not var.strip():
            raise FormatError(f"malformed binding {item!r}, expected name=element")
        out[var.strip()] = _element(lattice, value.strip())
    return out


def parse_values(text: str, lattice: Lattice) -> Tuple[int, ...]:
    """`v1,v2,...` as element indices."""
    return tuple(
        _element(lattice, s.strip())
        for s in text.split(",")
        if s.strip()
    )
