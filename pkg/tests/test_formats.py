import pytest

from latticekit._exceptions import (
    CapacityNotMonotoneError,
    CyclicCoversError,
    FormatError,
    IdentifierCollisionError,
)
from latticekit._formats import (
    capacity_to_text,
    functional_to_text,
    lattice_to_text,
    load_lattice,
    parse_assignment,
    parse_capacity,
    parse_family,
    parse_functional,
    parse_lattice,
    parse_map,
    parse_values,
    parse_variables,
    read_capacity,
    read_functional,
)
from latticekit._functionals import median_table
from latticekit._lattice import chain, n5

N5_TEXT = """\
# the pentagon
lattice n5
elements: 0 x y z 1
covers: 0<x x<z z<1 0<y y<1
"""

TABLE_TEXT = """\
functional k=1 lattice=chain3
0 -> 0
a -> 1
1 -> 1
"""

CAPACITY_TEXT = """\
capacity k=2 lattice=chain3
{} -> 0
{1} -> a
{2} -> 0
{1,2} -> 1
"""


def test_parse_lattice_matches_catalog() -> None:
    lattice = parse_lattice(N5_TEXT)
    assert lattice == n5()
    assert lattice.name == "n5"


def test_lattice_text_round_trip() -> None:
    assert parse_lattice(lattice_to_text(n5())) == n5()


def test_single_element_lattice_has_no_covers_line() -> None:
    assert lattice_to_text(chain(1)) == "lattice chain1\nelements: 0\n"
    assert parse_lattice("lattice one\nelements: 0\n") == chain(1)


def test_lattice_header_is_required() -> None:
    with pytest.raises(FormatError) as exc_info:
        parse_lattice("elements: 0 1\n")

    assert exc_info.value.line == 1


def test_malformed_cover_reports_line() -> None:
    with pytest.raises(FormatError) as exc_info:
        parse_lattice("lattice bad\n\nelements: 0 1\ncovers: 0-1\n")

    assert exc_info.value.line == 4
    assert exc_info.value.message.startswith("line 4:")


def test_cyclic_lattice_file() -> None:
    with pytest.raises(CyclicCoversError):
        parse_lattice("lattice loop\nelements: 0 a 1\ncovers: 0<a a<0 a<1\n")


def test_load_lattice(tmp_path) -> None:
    path = tmp_path / "n5.lat"
    path.write_text(N5_TEXT)
    assert load_lattice("chain3") == chain(3)
    assert load_lattice(str(path)) == n5()
    with pytest.raises(FormatError):
        load_lattice(str(tmp_path / "missing.lat"))


def test_parse_functional() -> None:
    table = parse_functional(TABLE_TEXT, chain(3), label="t")
    assert table.values.tolist() == [0, 2, 2]
    assert table.label == "t"


def test_functional_text_round_trip() -> None:
    table = median_table(chain(3))
    text = functional_to_text(table)
    assert text.splitlines()[0] == "functional k=3 lattice=chain3"
    assert parse_functional(text, chain(3)) == table


def test_functional_duplicate_input() -> None:
    with pytest.raises(FormatError) as exc_info:
        parse_functional(TABLE_TEXT + "a -> 0\n", chain(3))

    assert exc_info.value.line == 5


def test_functional_missing_input() -> None:
    with pytest.raises(FormatError) as exc_info:
        parse_functional("functional k=1\n0 -> 0\n", chain(3))

    assert "first: a" in exc_info.value.message


def test_functional_unknown_element_reports_line() -> None:
    with pytest.raises(FormatError) as exc_info:
        parse_functional("functional k=1\n0 -> 0\nq -> 1\n", chain(3))

    assert exc_info.value.line == 3


def test_functional_lattice_mismatch_warns() -> None:
    with pytest.warns(RuntimeWarning):
        parse_functional(TABLE_TEXT.replace("chain3", "bool2"), chain(3))


def test_read_functional_uses_file_name_as_label(tmp_path) -> None:
    path = tmp_path / "step.fun"
    path.write_text(TABLE_TEXT)
    assert read_functional(path, chain(3)).label == "step.fun"


def test_read_missing_file() -> None:
    with pytest.raises(FormatError) as exc_info:
        read_functional("/nonexistent/table.fun", chain(3))

    assert "cannot read" in exc_info.value.message


def test_parse_capacity(tmp_path) -> None:
    v = parse_capacity(CAPACITY_TEXT, chain(3))
    assert v.values.tolist() == [0, 1, 0, 2]
    assert capacity_to_text(v) == CAPACITY_TEXT
    path = tmp_path / "v.cap"
    path.write_text(CAPACITY_TEXT)
    assert read_capacity(path, chain(3)) == v


def test_capacity_missing_subset() -> None:
    with pytest.raises(FormatError) as exc_info:
        parse_capacity("capacity k=2\n{} -> 0\n{1,2} -> 1\n", chain(3))

    assert "{1}, {2}" in exc_info.value.message


def test_capacity_bad_position() -> None:
    with pytest.raises(FormatError) as exc_info:
        parse_capacity("capacity k=1\n{} -> 0\n{2} -> 1\n", chain(3))

    assert exc_info.value.line == 3


def test_capacity_must_be_monotone() -> None:
    with pytest.raises(CapacityNotMonotoneError):
        parse_capacity("capacity k=1\n{} -> 1\n{1} -> 0\n", chain(3))


def test_wrong_header_kind() -> None:
    with pytest.raises(FormatError):
        parse_capacity(TABLE_TEXT, chain(3))


def test_parse_map() -> None:
    lattice = chain(3)
    assert parse_map("map: 0->0 a->1 1->1", lattice).image == (0, 2, 2)
    assert parse_map("1->1 0->0 a->a", lattice).image == (0, 1, 2)
    with pytest.raises(FormatError):
        parse_map("map: 0->0 a->1", lattice)
    with pytest.raises(FormatError):
        parse_map("map: 0->0 0->a a->1 1->1", lattice)


def test_parse_family() -> None:
    lattice = n5()
    family = parse_family("{x},{y, z}", lattice)
    assert family.to_list() == [["x"], ["y", "z"]]
    assert len(parse_family("", lattice)) == 0
    with pytest.raises(FormatError):
        parse_family("{x} junk", lattice)


def test_parse_variables_and_assignment() -> None:
    lattice = chain(3)
    assert parse_variables("x1, x2") == ("x1", "x2")
    assert parse_assignment("x1=a,x2=1", lattice) == {"x1": 1, "x2": 2}
    assert parse_values("a,1,0", lattice) == (1, 2, 0)
    with pytest.raises(FormatError):
        parse_variables(" , ")
    with pytest.raises(FormatError):
        parse_assignment("x1", lattice)


def test_parse_variables_rejects_element_names_later() -> None:
    from latticekit._terms import check_variables

    with pytest.raises(IdentifierCollisionError):
        check_variables(parse_variables("a"), chain(3))
