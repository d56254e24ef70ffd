import dataclasses
import logging
import re
from abc import ABC, abstractmethod
from functools import reduce
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ._exceptions import (
    ArityViolationError,
    IdentifierCollisionError,
    InternalConsistencyError,
    TermSyntaxError,
    UnboundVariableError,
    UnknownIdentifierError,
)
from ._lattice import Lattice, is_distributive
from ._settings import get_guards
from ._space import (
    FunctionalTable,
    Subset,
    format_subset,
    input_space,
    lower_form_values,
    mask_to_subset,
    subset_masks,
    subset_to_mask,
    upper_form_values,
)

__all__ = [
    "Term",
    "Var",
    "Const",
    "Meet",
    "Join",
    "meet_of",
    "join_of",
    "parse",
    "print_term",
    "evaluate",
    "table_of",
    "NormalForm",
    "dnf_of",
    "cnf_of",
    "normal_form_of_table",
    "term_of",
    "equivalent",
    "median_term",
    "check_variables",
]

logger = logging.getLogger(__name__)

_PLAIN_IDENT = re.compile(r"[A-Za-z0-9_'.]+")


class Term(ABC):
    """
    Abstract base class for lattice terms over variables and constants.
    """

    @abstractmethod
    def variables(self) -> FrozenSet[str]:
        """Names of the variables occurring in the term."""

    @abstractmethod
    def constants(self) -> FrozenSet[str]:
        """Names of the lattice constants occurring in the term."""

    @abstractmethod
    def depth(self) -> int:
        pass

    def __and__(self, other: "Term") -> "Term":
        return Meet(self, other)

    def __or__(self, other: "Term") -> "Term":
        return Join(self, other)


@dataclasses.dataclass(frozen=True)
class Var(Term):
    """The projection onto a declared variable."""

    name: str

    def variables(self) -> FrozenSet[str]:
        return frozenset([self.name])

    def constants(self) -> FrozenSet[str]:
        return frozenset()

    def depth(self) -> int:
        return 0


@dataclasses.dataclass(frozen=True)
class Const(Term):
    """A lattice element, by name."""

    name: str

    def variables(self) -> FrozenSet[str]:
        return frozenset()

    def constants(self) -> FrozenSet[str]:
        return frozenset([self.name])

    def depth(self) -> int:
        return 0


class _Nary(Term):
    symbol = ""

    def __init__(self, *children: Term) -> None:
        flat: List[Term] = []
        for child in children:
            if type(child) is type(self):
                flat.extend(child.children)  # type: ignore[attr-defined]
            else:
                flat.append(child)
        if len(flat) < 2:
            raise ArityViolationError(
                f"{type(self).__name__} needs at least two children, got {len(flat)}"
            )
        self.children: Tuple[Term, ...] = tuple(flat)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(repr(c) for c in self.children)})"

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and other.children == self.children  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.children))

    def variables(self) -> FrozenSet[str]:
        return frozenset().union(*[c.variables() for c in self.children])

    def constants(self) -> FrozenSet[str]:
        return frozenset().union(*[c.constants() for c in self.children])

    def depth(self) -> int:
        return 1 + max(c.depth() for c in self.children)


class Meet(_Nary):
    """Meet of two or more terms; nested meets are flattened."""

    symbol = "&"


class Join(_Nary):
    """Join of two or more terms; nested joins are flattened."""

    symbol = "|"


def meet_of(terms: Sequence[Term]) -> Term:
    """Meet of one or more terms, without wrapping a single term."""
    return terms[0] if len(terms) == 1 else Meet(*terms)


def join_of(terms: Sequence[Term]) -> Term:
    return terms[0] if len(terms) == 1 else Join(*terms)


def check_variables(variables: Sequence[str], lattice: Optional[Lattice] = None) -> Tuple[str, ...]:
    """Declared variables must be distinct, within the arity guard and disjoint from element names."""
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise ArityViolationError(f"duplicate variable in {', '.join(variables)}")
    if len(variables) > get_guards().max_arity:
        raise ArityViolationError(
            f"{len(variables)} variables exceed max_arity={get_guards().max_arity}"
        )
    if lattice is not None:
        clash = sorted(set(variables) & set(lattice.names))
        if clash:
            raise IdentifierCollisionError(
                f"variable name(s) {', '.join(clash)} are also elements of {lattice.name or 'the lattice'}",
                payload={"identifiers": clash},
            )
    return variables


# Parsing

_OR = "OR"
_AND = "AND"
_LPAREN = "LPAREN"
_RPAREN = "RPAREN"
_IDENT = "IDENT"
_END = "END"

_SYMBOLS = [
    ("\\/", _OR),
    ("/\\", _AND),
    ("|", _OR),
    ("∨", _OR),
    ("&", _AND),
    ("∧", _AND),
    ("(", _LPAREN),
    (")", _RPAREN),
]


@dataclasses.dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for symbol, kind in _SYMBOLS:
            if text.startswith(symbol, i):
                tokens.append(_Token(kind, symbol, i))
                i += len(symbol)
                break
        else:
            if ch == "`":
                end = text.find("`", i + 1)
                if end < 0:
                    raise TermSyntaxError(f"unterminated backquote at position {i}", position=i)
                tokens.append(_Token(_IDENT, text[i + 1 : end], i))
                i = end + 1
                continue
            match = _PLAIN_IDENT.match(text, i)
            if match is None:
                raise TermSyntaxError(f"unexpected character {ch!r} at position {i}", position=i)
            tokens.append(_Token(_IDENT, match.group(0), i))
            i = match.end()
    tokens.append(_Token(_END, "", len(text)))
    return tokens


class Parser:
    """
    Recursive descent over

        expr := conj { OR conj }
        conj := atom { AND atom }
        atom := IDENT | "(" expr ")"

    with OR one of | \\/ and AND one of & /\\ (and the unicode wedges).
    Identifiers resolve to a declared variable first, then to an element.
    """

    def __init__(self, text: str, variables: Sequence[str], lattice: Lattice) -> None:
        self._variables = set(variables)
        self._lattice = lattice
        self._tokens = _tokenize(text)
        self._index = 0

    @property
    def token(self) -> _Token:
        return self._tokens[self._index]

    def advance(self) -> None:
        self._index = min(self._index + 1, len(self._tokens) - 1)

    def parse(self) -> Term:
        term = self.expr()
        if self.token.kind != _END:
            self._unexpected()
        return term

    def expr(self) -> Term:
        parts = [self.conj()]
        while self.token.kind == _OR:
            self.advance()
            parts.append(self.conj())
        return join_of(parts)

    def conj(self) -> Term:
        parts = [self.atom()]
        while self.token.kind == _AND:
            self.advance()
            parts.append(self.atom())
        return meet_of(parts)

    def atom(self) -> Term:
        token = self.token
        logger.debug("atom at %d: %r", token.position, token.text)
        if token.kind == _IDENT:
            self.advance()
            return self._resolve(token)
        if token.kind == _LPAREN:
            self.advance()
            term = self.expr()
            if self.token.kind != _RPAREN:
                self._unexpected(expected="')'")
            self.advance()
            return term
        self._unexpected()
        raise AssertionError("unreachable")

    def _resolve(self, token: _Token) -> Term:
        if token.text in self._variables:
            return Var(token.text)
        if token.text in self._lattice.names:
            return Const(token.text)
        raise UnknownIdentifierError(
            f"unknown identifier {token.text!r} at position {token.position}",
            token=token.text,
        )

    def _unexpected(self, expected: str = "") -> None:
        token = self.token
        what = "end of input" if token.kind == _END else repr(token.text)
        hint = f", expected {expected}" if expected else ""
        raise TermSyntaxError(
            f"unexpected {what} at position {token.position}{hint}",
            position=token.position,
        )


def parse(text: str, variables: Sequence[str], lattice: Lattice) -> Term:
    variables = check_variables(variables, lattice)
    return Parser(text, variables, lattice).parse()


# Printing

_Rank = Tuple[int, int, str]


def _canonical(
    term: Term, variables: Sequence[str], lattice: Optional[Lattice]
) -> Tuple[Term, List[_Rank]]:
    """
    Sort children recursively and drop repeated children.

    Children are compared by the ranks of their leaves read right to left;
    constants rank before variables, constants by element index, variables
    by declared position. Leading with constants lets a disjunctive clause
    print coefficient first: the normal form {1} -> a, {2} -> a, {1,2} -> 1
    on chain(4) prints as `a & x1 | a & x2 | x1 & x2`, and so
    Meet(x1, Join(x2, a)) prints as `x1 & (a | x2)`.
    """
    if isinstance(term, Var):
        pos = variables.index(term.name) if term.name in variables else len(variables)
        return term, [(1, pos, term.name)]
    if isinstance(term, Const):
        idx = lattice.index(term.name) if lattice is not None else 0
        return term, [(0, idx, term.name)]
    assert isinstance(term, _Nary)
    keyed = []
    for child in term.children:
        canon, leaves = _canonical(child, variables, lattice)
        keyed.append((tuple(reversed(leaves)), _render(canon), canon, leaves))
    keyed.sort(key=lambda item: (item[0], item[1]))
    unique = []
    for item in keyed:
        if not unique or unique[-1][1] != item[1]:
            unique.append(item)
    if len(unique) == 1:
        return unique[0][2], unique[0][3]
    leaves: List[_Rank] = [rank for item in unique for rank in item[3]]
    return type(term)(*[item[2] for item in unique]), leaves


def _render_leaf(name: str) -> str:
    return name if _PLAIN_IDENT.fullmatch(name) else f"`{name}`"


def _render(term: Term) -> str:
    if isinstance(term, (Var, Const)):
        return _render_leaf(term.name)
    assert isinstance(term, _Nary)
    parts = []
    for child in term.children:
        text = _render(child)
        if isinstance(term, Meet) and isinstance(child, Join):
            text = f"({text})"
        parts.append(text)
    return f" {term.symbol} ".join(parts)


def print_term(
    term: Term,
    variables: Optional[Sequence[str]] = None,
    lattice: Optional[Lattice] = None,
) -> str:
    """
    Canonical, byte-stable rendering.

    Without a variable list, variables rank by name; without a lattice,
    constants rank by name.
    """
    if variables is None:
        variables = sorted(term.variables())
    canon, _ = _canonical(term, list(variables), lattice)
    return _render(canon)


# Semantics


def evaluate(lattice: Lattice, term: Term, assignment: Mapping[str, int]) -> int:
    """Fold the term bottom-up with the meet and join tables."""
    if isinstance(term, Var):
        if term.name not in assignment:
            raise UnboundVariableError(f"variable {term.name!r} is not assigned", payload={"variable": term.name})
        return lattice.check_element(assignment[term.name])
    if isinstance(term, Const):
        return lattice.index(term.name)
    assert isinstance(term, _Nary)
    table = lattice.meet if isinstance(term, Meet) else lattice.join
    values = [evaluate(lattice, c, assignment) for c in term.children]
    return int(reduce(lambda a, b: table[a, b], values))


def table_of(lattice: Lattice, term: Term, variables: Sequence[str]) -> FunctionalTable:
    """The functional induced by term on L^k, k = len(variables)."""
    variables = check_variables(variables, lattice)
    unbound = sorted(term.variables() - set(variables))
    if unbound:
        raise UnboundVariableError(f"undeclared variable(s): {', '.join(unbound)}", payload={"variables": unbound})
    space = input_space(lattice, len(variables))
    position = {name: i for i, name in enumerate(variables)}

    def fold(t: Term) -> np.ndarray:
        if isinstance(t, Var):
            return space.digits[:, position[t.name]]
        if isinstance(t, Const):
            return np.full(space.size, lattice.index(t.name), dtype=np.intp)
        assert isinstance(t, _Nary)
        table = lattice.meet if isinstance(t, Meet) else lattice.join
        return reduce(lambda a, b: table[a, b], [fold(c) for c in t.children])

    return FunctionalTable(lattice, len(variables), fold(term), label=print_term(term, variables, lattice))


def median_term(variables: Sequence[str]) -> Term:
    """(x & y) | (x & z) | (y & z) over three variables."""
    x, y, z = (Var(v) for v in variables)
    return Join(Meet(x, y), Meet(x, z), Meet(y, z))


# Normal forms

DNF = "dnf"
CNF = "cnf"


@dataclasses.dataclass(frozen=True, eq=False)
class NormalForm:
    """
    Coefficients of the lower (DNF) or upper (CNF) canonical form.

    DNF:  F(f) = join over X of ( a_X & meet_{i in X} f(i) ), a_X = F(I_X)
    CNF:  F(f) = meet over X of ( b_X | join_{i in X} f(i) ), b_X = F(I_{A-X})

    Subsets are frozensets of 1-based variable positions. Coefficients equal
    to bottom (DNF) or top (CNF) are not stored.
    """

    lattice: Lattice
    kind: str
    variables: Tuple[str, ...]
    coefficients: Dict[Subset, int]

    def __post_init__(self) -> None:
        if self.kind not in (DNF, CNF):
            raise ValueError(f"kind must be {DNF!r} or {CNF!r}, got {self.kind!r}")
        k = len(self.variables)
        neutral = self.neutral
        cleaned: Dict[Subset, int] = {}
        for x, v in self.coefficients.items():
            mask = subset_to_mask(x, k)
            v = self.lattice.check_element(v)
            if v != neutral:
                cleaned[mask_to_subset(mask)] = v
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "coefficients", cleaned)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return (
            self.lattice == other.lattice
            and self.kind == other.kind
            and self.variables == other.variables
            and self.coefficients == other.coefficients
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def k(self) -> int:
        return len(self.variables)

    @property
    def neutral(self) -> int:
        return self.lattice.bottom if self.kind == DNF else self.lattice.top

    def coefficient(self, x: Iterable[int]) -> int:
        return self.coefficients.get(frozenset(x), self.neutral)

    def coefficient_array(self) -> np.ndarray:
        """Coefficients indexed by mask, neutral entries included."""
        out = np.full(1 << self.k, self.neutral, dtype=np.intp)
        for x, v in self.coefficients.items():
            out[subset_to_mask(x, self.k)] = v
        return out

    def is_monotone(self) -> bool:
        arr = self.coefficient_array()
        leq = self.lattice.leq
        for mask in range(1 << self.k):
            for i in range(self.k):
                if not mask >> i & 1 and not leq[arr[mask], arr[mask | 1 << i]]:
                    return False
        return True

    def table(self) -> FunctionalTable:
        """The functional induced by the formula."""
        space = input_space(self.lattice, self.k)
        coef = self.coefficient_array()[None, :]
        if self.kind == DNF:
            values = lower_form_values(space, coef)[0]
        else:
            values = upper_form_values(space, coef)[0]
        return FunctionalTable(self.lattice, self.k, values)

    def canonical(self) -> "NormalForm":
        """Recompute the coefficients from the induced functional."""
        return normal_form_of_table(self.table(), self.variables, self.kind)

    def listing(self) -> List[str]:
        """One `{1,3} -> a` line per stored subset, subsets by size then lex."""
        rank = {mask_to_subset(m): r for r, m in enumerate(subset_masks(self.k))}
        names = self.lattice.names
        return [
            f"{format_subset(x)} -> {names[v]}"
            for x, v in sorted(self.coefficients.items(), key=lambda item: rank[item[0]])
        ]


def normal_form_of_table(
    table: FunctionalTable, variables: Sequence[str], kind: str = DNF
) -> NormalForm:
    """Read the DNF or CNF coefficients of a table off its characteristic inputs."""
    variables = tuple(variables)
    if len(variables) != table.k:
        raise ArityViolationError(f"{len(variables)} variables for a table of arity {table.k}")
    chi = table.characteristic_values()
    full = (1 << table.k) - 1
    coefficients: Dict[Subset, int] = {}
    for mask in range(full + 1):
        value = chi[mask] if kind == DNF else chi[full ^ mask]
        coefficients[mask_to_subset(mask)] = int(value)
    return NormalForm(table.lattice, kind, variables, coefficients)


def _normal_form(lattice: Lattice, term: Term, variables: Sequence[str], kind: str) -> NormalForm:
    get_guards().check("max_arity", len(variables))
    table = table_of(lattice, term, variables)
    nf = normal_form_of_table(table, variables, kind)
    space = input_space(lattice, len(variables))
    if space.size <= get_guards().max_inputs and is_distributive(lattice):
        if nf.table() != table:
            raise InternalConsistencyError(
                f"{kind} of {print_term(term, variables, lattice)} does not reproduce the term"
            )
    return nf


def dnf_of(lattice: Lattice, term: Term, variables: Sequence[str]) -> NormalForm:
    return _normal_form(lattice, term, variables, DNF)


def cnf_of(lattice: Lattice, term: Term, variables: Sequence[str]) -> NormalForm:
    return _normal_form(lattice, term, variables, CNF)


def term_of(nf: NormalForm, lattice: Optional[Lattice] = None) -> Term:
    """
    The term of a normal form: a join of clauses a_X & x_i... (DNF) or a meet
    of clauses b_X | x_i... (CNF), clauses ordered by subset size then
    lexicographically. The top (DNF) or bottom (CNF) coefficient is left out
    of its clause; no clauses gives the constant bottom (DNF) or top (CNF).
    """
    lattice = lattice if lattice is not None else nf.lattice
    if lattice != nf.lattice:
        raise InternalConsistencyError("normal form belongs to another lattice")
    names = lattice.names
    dnf = nf.kind == DNF
    absorbing = lattice.top if dnf else lattice.bottom
    clauses: List[Term] = []
    for mask in subset_masks(nf.k):
        x = mask_to_subset(mask)
        if x not in nf.coefficients:
            continue
        coef = nf.coefficients[x]
        atoms: List[Term] = [] if coef == absorbing and x else [Const(names[coef])]
        atoms.extend(Var(nf.variables[i - 1]) for i in sorted(x))
        clauses.append(meet_of(atoms) if dnf else join_of(atoms))
    if not clauses:
        return Const(names[lattice.bottom if dnf else lattice.top])
    return join_of(clauses) if dnf else meet_of(clauses)


def equivalent(lattice: Lattice, t1: Term, t2: Term, variables: Sequence[str]) -> bool:
    """
    Equal induced functionals. On a distributive lattice the DNF coefficients
    decide and the exhaustive comparison is a cross-check when L^k is within
    max_inputs; otherwise the exhaustive comparison decides.
    """
    guards = get_guards()
    variables = check_variables(variables, lattice)
    guards.check("max_arity", len(variables))
    exhaustive_ok = lattice.n ** len(variables) <= guards.max_inputs
    if not is_distributive(lattice):
        guards.check("max_inputs", lattice.n ** len(variables))
        return table_of(lattice, t1, variables) == table_of(lattice, t2, variables)
    by_coefficients = _characteristic_values(lattice, t1, variables) == _characteristic_values(
        lattice, t2, variables
    )
    if exhaustive_ok:
        by_tables = table_of(lattice, t1, variables) == table_of(lattice, t2, variables)
        if by_tables != by_coefficients:
            raise InternalConsistencyError(
                "normal forms and exhaustive evaluation disagree on "
                f"{print_term(t1, variables, lattice)} vs {print_term(t2, variables, lattice)}"
            )
    return by_coefficients


def _characteristic_values(lattice: Lattice, term: Term, variables: Sequence[str]) -> List[int]:
    """Term values on every I_X, evaluated symbolically so L^k never materializes."""
    k = len(variables)
    out = []
    for mask in range(1 << k):
        assignment = {
            v: (lattice.top if mask >> i & 1 else lattice.bottom) for i, v in enumerate(variables)
        }
        out.append(evaluate(lattice, term, assignment))
    return out
