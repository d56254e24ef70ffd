from hypothesis import HealthCheck, given, settings, strategies as st

from latticekit._duality import SetFamily, check_blocker_duality, crosscut_values, extend_to_ultracone
from latticekit._functionals import is_invariant, is_sugeno, sugeno_integral, sugeno_table, term_functional_from_family
from latticekit._lattice import catalog_lattice
from latticekit._maps import apply_pointwise, enumerate_continuous
from latticekit._terms import cnf_of, dnf_of, parse, print_term, table_of, term_of
from latticekit.suite import random_capacity, random_cone, random_family, random_term

laws = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

distributive = st.sampled_from(["chain2", "chain3", "chain4", "bool2", "chain3xchain2"])
any_lattice = st.sampled_from(["chain3", "bool2", "n5", "m3"])
seeds = st.integers(min_value=0, max_value=2**31 - 1)
arities = st.integers(min_value=1, max_value=3)

VARIABLES = ("x1", "x2", "x3")


@laws
@given(any_lattice, st.data())
def test_absorption_and_order(name, data):
    lattice = catalog_lattice(name)
    a, b = data.draw(st.lists(st.integers(0, lattice.n - 1), min_size=2, max_size=2))
    assert lattice.meet[a, lattice.join[a, b]] == a
    assert lattice.join[a, lattice.meet[a, b]] == a
    assert lattice.le(a, b) == (lattice.meet[a, b] == a)


@laws
@given(distributive, seeds)
def test_print_then_parse_keeps_the_functional(name, seed):
    lattice = catalog_lattice(name)
    term = random_term(lattice, VARIABLES, seed)
    text = print_term(term, VARIABLES, lattice)
    assert table_of(lattice, parse(text, VARIABLES, lattice), VARIABLES) == table_of(lattice, term, VARIABLES)


@laws
@given(distributive, seeds)
def test_normal_forms_reproduce_the_term(name, seed):
    lattice = catalog_lattice(name)
    term = random_term(lattice, VARIABLES, seed)
    table = table_of(lattice, term, VARIABLES)
    dnf = dnf_of(lattice, term, VARIABLES)
    cnf = cnf_of(lattice, term, VARIABLES)
    assert dnf.is_monotone()
    assert table_of(lattice, term_of(dnf), VARIABLES) == table
    assert table_of(lattice, term_of(cnf), VARIABLES) == table
    assert dnf_of(lattice, term_of(dnf), VARIABLES) == dnf


@laws
@given(distributive, arities, seeds)
def test_sugeno_integral_agrees_with_its_table(name, k, seed):
    lattice = catalog_lattice(name)
    v = random_capacity(lattice, k, seed)
    table = sugeno_table(v)
    assert is_sugeno(table)
    for f, value in table.rows():
        assert sugeno_integral(v, f) == value


@laws
@given(distributive, arities, seeds, st.data())
def test_blocker_duality_on_distributive_lattices(name, k, seed, data):
    lattice = catalog_lattice(name)
    family = SetFamily.of_positions(k, random_family(k, seed))
    f = data.draw(st.lists(st.integers(0, lattice.n - 1), min_size=k, max_size=k))
    assert check_blocker_duality(lattice, k, family, f).equal


@laws
@given(distributive, seeds)
def test_ultracone_crosscuts_agree_on_distributive_lattices(name, seed):
    lattice = catalog_lattice(name)
    ultra = extend_to_ultracone(lattice, random_cone(lattice, seed))
    lower, upper = crosscut_values(lattice, ultra)
    assert lower == upper


@laws
@given(any_lattice, arities, seeds, st.data())
def test_continuous_maps_commute_with_term_functionals(name, k, seed, data):
    lattice = catalog_lattice(name)
    table = term_functional_from_family(lattice, k, random_family(k, seed))
    maps = enumerate_continuous(lattice, strict=False)
    g = data.draw(st.sampled_from(maps))
    f = tuple(data.draw(st.lists(st.integers(0, lattice.n - 1), min_size=k, max_size=k)))
    assert table(apply_pointwise(g, f)) == g(table(f))
    assert is_invariant(table, strict=True)
