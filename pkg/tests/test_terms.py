import pytest

from latticekit._exceptions import (
    ArityViolationError,
    IdentifierCollisionError,
    TermSyntaxError,
    UnboundVariableError,
    UnknownIdentifierError,
)
from latticekit._functionals import median_table
from latticekit._lattice import chain, n5, product
from latticekit._space import FunctionalTable
from latticekit._terms import (
    Const,
    Join,
    Meet,
    NormalForm,
    Var,
    cnf_of,
    dnf_of,
    equivalent,
    evaluate,
    median_term,
    normal_form_of_table,
    parse,
    print_term,
    table_of,
    term_of,
)

XY = ("x1", "x2")
XYZ = ("x1", "x2", "x3")


def test_and_binds_tighter_than_or() -> None:
    term = parse("x1 | x2 & a", XY, chain(3))
    assert term == Join(Var("x1"), Meet(Var("x2"), Const("a")))


def test_alternative_operator_spellings() -> None:
    lattice = chain(3)
    expected = parse("x1 & x2 | a", XY, lattice)
    assert parse("x1 /\\ x2 \\/ a", XY, lattice) == expected
    assert parse("x1 ∧ x2 ∨ a", XY, lattice) == expected


def test_nested_meets_flatten() -> None:
    term = Meet(Meet(Var("x"), Var("y")), Var("z"))
    assert len(term.children) == 3
    assert term.depth() == 1


def test_meet_needs_two_children() -> None:
    with pytest.raises(ArityViolationError):
        Meet(Var("x"))


def test_syntax_error_position() -> None:
    with pytest.raises(TermSyntaxError) as exc_info:
        parse("x1 &", XY, chain(3))

    assert exc_info.value.position == 4


def test_unbalanced_parenthesis() -> None:
    with pytest.raises(TermSyntaxError) as exc_info:
        parse("(x1 | x2", XY, chain(3))

    assert "expected ')'" in exc_info.value.message


def test_unknown_identifier() -> None:
    with pytest.raises(UnknownIdentifierError) as exc_info:
        parse("x1 & q", XY, chain(3))

    assert exc_info.value.token == "q"


def test_variable_colliding_with_element() -> None:
    with pytest.raises(IdentifierCollisionError):
        parse("a", ["a"], chain(3))


def test_duplicate_variables() -> None:
    with pytest.raises(ArityViolationError):
        parse("x1", ["x1", "x1"], chain(3))


def test_backquoted_element_names_round_trip_through_printing() -> None:
    lattice = product(chain(3), chain(2))
    term = parse("x1 & `(a,1)`", ["x1"], lattice)
    assert term == Meet(Var("x1"), Const("(a,1)"))
    assert print_term(term, ["x1"], lattice) == "`(a,1)` & x1"


def test_print_orders_children_canonically() -> None:
    lattice = chain(3)
    assert print_term(parse("x2 & x1", XY, lattice), XY, lattice) == "x1 & x2"
    assert print_term(parse("x1 & x2 | x1", XY, lattice), XY, lattice) == "x1 | x1 & x2"
    assert print_term(parse("(x1 | x2) & a", XY, lattice), XY, lattice) == "a & (x1 | x2)"


def test_print_puts_constants_before_variables() -> None:
    lattice = chain(4)
    assert print_term(Meet(Var("x1"), Join(Var("x2"), Const("a"))), XY, lattice) == "x1 & (a | x2)"
    assert print_term(Join(Meet(Var("x2"), Var("x1")), Var("x3")), XYZ, lattice) == "x1 & x2 | x3"
    clauses = Join(Meet(Var("x2"), Var("x1")), Meet(Var("x2"), Const("a")), Meet(Const("a"), Var("x1")))
    assert print_term(clauses, XY, lattice) == "a & x1 | a & x2 | x1 & x2"


def test_print_drops_repeated_children() -> None:
    lattice = chain(3)
    assert print_term(parse("x1 & x1", ["x1"], lattice), ["x1"], lattice) == "x1"


def test_evaluate() -> None:
    lattice = chain(3)
    term = parse("x1 | a", ["x1"], lattice)
    assert evaluate(lattice, term, {"x1": 0}) == lattice.index("a")
    with pytest.raises(UnboundVariableError):
        evaluate(lattice, term, {})


def test_table_of_rejects_undeclared_variable() -> None:
    with pytest.raises(UnboundVariableError):
        table_of(chain(3), Var("x9"), XY)


def test_median_term_matches_median_table() -> None:
    lattice = chain(4)
    assert table_of(lattice, median_term(XYZ), XYZ) == median_table(lattice)


def test_dnf_of_median_with_constant() -> None:
    lattice = chain(4)
    nf = dnf_of(lattice, parse("x1 & a | x1 & x2 | a & x2", XY, lattice), XY)
    assert nf.listing() == ["{1} -> a", "{2} -> a", "{1,2} -> 1"]
    assert print_term(term_of(nf), XY, lattice) == "a & x1 | a & x2 | x1 & x2"


def test_cnf_of_median_with_constant() -> None:
    lattice = chain(4)
    nf = cnf_of(lattice, parse("x1 & a | x1 & x2 | a & x2", XY, lattice), XY)
    assert nf.listing() == ["{1} -> a", "{2} -> a", "{1,2} -> 0"]
    assert nf.table() == table_of(lattice, term_of(nf), XY)


def test_term_of_empty_forms_are_constants() -> None:
    lattice = chain(3)
    dnf = normal_form_of_table(FunctionalTable.constant(lattice, 2, 0), XY, "dnf")
    cnf = normal_form_of_table(FunctionalTable.constant(lattice, 2, 2), XY, "cnf")
    assert dnf.coefficients == {}
    assert term_of(dnf) == Const("0")
    assert term_of(cnf) == Const("1")


def test_normal_form_neutral_coefficients_are_dropped() -> None:
    lattice = chain(3)
    nf = NormalForm(lattice, "dnf", XY, {frozenset(): 0, frozenset({1}): 1})
    assert nf.coefficients == {frozenset({1}): 1}
    assert nf.coefficient({2}) == 0
    assert not nf.is_monotone()


def test_normal_form_rejects_unknown_kind() -> None:
    with pytest.raises(ValueError):
        NormalForm(chain(3), "anf", XY, {})


def test_normal_form_arity_mismatch() -> None:
    with pytest.raises(ArityViolationError):
        normal_form_of_table(FunctionalTable.constant(chain(3), 2, 0), XYZ)


def test_equivalence_by_distributivity() -> None:
    lattice = chain(3)
    assert equivalent(lattice, parse("x1 & (x2 | x3)", XYZ, lattice), parse("x1 & x2 | x1 & x3", XYZ, lattice), XYZ)
    assert not equivalent(lattice, parse("x1 & x2", XYZ, lattice), parse("x1 | x2", XYZ, lattice), XYZ)


def test_equivalence_fails_on_pentagon() -> None:
    lattice = n5()
    left = parse("x1 & (x2 | x3)", XYZ, lattice)
    right = parse("x1 & x2 | x1 & x3", XYZ, lattice)
    assert not equivalent(lattice, left, right, XYZ)
    assert not equivalent(lattice, parse("z & (x | y)", [], lattice), parse("z & x | z & y", [], lattice), [])
