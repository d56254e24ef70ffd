import pytest

from latticekit import _duality, _settings
from latticekit._duality import (
    Cone,
    SetFamily,
    blocker,
    check_blocker_duality,
    check_complete_distributive_law,
    crosscut_values,
    extend_to_ultracone,
    find_crosscut_violation,
    is_cone,
    is_ultracone,
    minimal_members,
    transversals,
    up_closure,
    verify_complete_distributivity,
)
from latticekit._exceptions import (
    EmptyFamilyError,
    EmptyMemberError,
    FunctionalError,
    LatticeMismatchError,
    NotAConeError,
    SizeGuardError,
)
from latticekit._lattice import boolean_lattice, chain, m3, n5


def test_family_orders_members_by_size_then_lex() -> None:
    family = SetFamily.of_positions(3, [{2, 3}, {3}, {1}])
    assert family.ordered() == [1, 4, 6]
    assert family.format() == "{1},{3},{2,3}"
    assert family.to_list() == [["1"], ["3"], ["2", "3"]]
    assert len(family) == 3 and 4 in family


def test_family_rejects_empty_member() -> None:
    with pytest.raises(EmptyMemberError):
        SetFamily.of_positions(2, [set()])
    with pytest.raises(FunctionalError):
        SetFamily.of_positions(2, [{3}])


def test_transversals_edge_cases() -> None:
    assert transversals(2, []) == [0, 1, 2, 3]
    assert transversals(2, [0]) == []
    assert transversals(3, [3, 4]) == [5, 6, 7]


def test_blocker_and_minimal_members() -> None:
    family = SetFamily.of_positions(3, [{1, 2}, {3}])
    assert minimal_members(blocker(family)).format() == "{1,3},{2,3}"
    assert up_closure(SetFamily.of_positions(2, [{1}])).format() == "{1},{1,2}"
    with pytest.raises(EmptyFamilyError):
        blocker(SetFamily.of_positions(2, []))


def test_blocker_duality_on_a_chain() -> None:
    lattice = chain(4)
    family = SetFamily.of_positions(3, [{1, 2}, {3}])
    values = check_blocker_duality(lattice, 3, family, (3, 1, 2))
    assert values == (2, 2, True)


def test_blocker_duality_fails_on_pentagon() -> None:
    lattice = n5()
    x, y, z = lattice.indices(["x", "y", "z"])
    family = SetFamily.of_positions(3, [{1}, {2, 3}])
    lower, upper, equal = check_blocker_duality(lattice, 3, family, (x, y, z))
    assert (lattice.names[lower], lattice.names[upper], equal) == ("x", "z", False)


def test_blocker_duality_argument_checks() -> None:
    family = SetFamily.of_positions(2, [{1}])
    with pytest.raises(FunctionalError):
        check_blocker_duality(chain(3), 3, family, (0, 0, 0))
    with pytest.raises(FunctionalError):
        check_blocker_duality(chain(3), 2, family, (0,))


@pytest.mark.parametrize("name", ["chain3", "bool2", "chain3xchain2"])
def test_complete_distributivity_holds_on_distributive_lattices(name: str) -> None:
    from latticekit._lattice import catalog_lattice

    assert verify_complete_distributivity(catalog_lattice(name), max_ground=3)


def test_complete_distributivity_witness_on_pentagon() -> None:
    verdict = verify_complete_distributivity(n5(), max_ground=3)
    assert verdict.witness == {"ground": ["x", "y", "z"], "family": [["x"], ["y", "z"]], "lower": "x", "upper": "z"}


def test_complete_distributivity_witness_on_diamond() -> None:
    verdict = verify_complete_distributivity(m3(), max_ground=3)
    assert verdict.witness == {"ground": ["a", "b", "c"], "family": [["c"], ["a", "b"]], "lower": "c", "upper": "1"}


def test_small_budget_finds_nothing() -> None:
    assert verify_complete_distributivity(n5(), max_ground=2)


def test_family_budget_stops_the_whole_scan(monkeypatch) -> None:
    calls = []
    families = _duality._families

    def counting(size):
        calls.append(size)
        return families(size)

    monkeypatch.setattr(_duality, "_families", counting)
    assert verify_complete_distributivity(chain(3), max_ground=3, max_families=1)
    assert calls == [1]
    calls.clear()
    assert verify_complete_distributivity(chain(3), max_ground=3)
    assert calls == [1, 1, 1, 2, 2, 2, 3]


def test_complete_distributive_law_grid() -> None:
    lattice = n5()
    x, y, z = lattice.indices(["x", "y", "z"])
    lhs, rhs, equal = check_complete_distributive_law(lattice, [[z, 0], [x, y]])
    assert (lattice.names[lhs], lattice.names[rhs], equal) == ("z", "x", False)
    assert check_complete_distributive_law(chain(3), [[0, 2], [1, 1]]).equal


def test_complete_distributive_law_rejects_ragged_grid() -> None:
    with pytest.raises(FunctionalError):
        check_complete_distributive_law(chain(3), [[0, 1], [1]])
    with pytest.raises(FunctionalError):
        check_complete_distributive_law(chain(3), [])


def test_complete_distributive_law_guard() -> None:
    _settings.configure(max_choice_functions=8)
    with pytest.raises(SizeGuardError):
        check_complete_distributive_law(chain(3), [[0, 1, 2]] * 2 + [[0, 1, 2]])


def test_cone_members_must_meet() -> None:
    lattice = n5()
    x, y = lattice.indices(["x", "y"])
    with pytest.raises(NotAConeError) as exc_info:
        Cone.of_elements(lattice, [[x]], [[y]])

    assert "{x}" in exc_info.value.message
    assert not is_cone(lattice, SetFamily.of_elements(lattice, [[x]]), SetFamily.of_elements(lattice, [[y]]))


def test_cone_families_must_cover_the_lattice() -> None:
    with pytest.raises(LatticeMismatchError):
        Cone(chain(3), SetFamily.of_positions(2, []), SetFamily.of_positions(2, []))


def test_ultracone_saturation_on_a_chain() -> None:
    lattice = chain(3)
    cone = Cone.of_elements(lattice, [[1]], [[1]])
    ultra = extend_to_ultracone(lattice, cone)
    assert is_ultracone(lattice, ultra)
    assert not is_ultracone(lattice, cone)
    lower, upper = crosscut_values(lattice, ultra)
    assert lower == upper
    assert ultra.h.members >= cone.h.members


def test_crosscut_values_of_a_plain_cone() -> None:
    lattice = boolean_lattice(2)
    a, b = lattice.indices(["a", "b"])
    cone = Cone.of_elements(lattice, [[a, b]], [[a], [b]])
    assert crosscut_values(lattice, cone) == (lattice.bottom, lattice.bottom)


def test_crosscut_violation_found_on_pentagon() -> None:
    lattice = n5()
    ultra = find_crosscut_violation(lattice)
    assert ultra is not None
    lower, upper = crosscut_values(lattice, ultra)
    assert (lattice.names[lower], lattice.names[upper]) == ("x", "z")


def test_no_crosscut_violation_on_distributive_lattice() -> None:
    assert find_crosscut_violation(boolean_lattice(2)) is None


def test_cone_guard() -> None:
    _settings.configure(max_cone_elements=4)
    with pytest.raises(SizeGuardError):
        extend_to_ultracone(n5(), Cone.of_elements(n5(), [[1]], [[1]]))
