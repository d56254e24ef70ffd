import json

import numpy as np
import pytest

from latticekit._duality import Cone
from latticekit._exceptions import FunctionalError, InternalConsistencyError, InvalidConfigError
from latticekit._functionals import is_nondecreasing
from latticekit._lattice import boolean_lattice, chain, n5
from latticekit._space import FunctionalTable, input_space
from latticekit._terms import table_of
from latticekit.suite import (
    CLAIMS,
    MONOTONE_BOOLEAN_COUNTS,
    SuiteConfig,
    all_tables,
    checks_for,
    count_monotone_into_chain,
    down_sets,
    monotone_set_functions,
    nondecreasing_tables,
    product_order,
    random_capacity,
    random_cone,
    random_family,
    random_nondecreasing,
    random_term,
    run_suite,
)
from latticekit.suite import runner
from latticekit.suite.checks import Outcome

SMALL_SAMPLES = dict(
    random_tables=5,
    term_samples=4,
    capacity_samples=4,
    cone_samples=5,
    grid_samples=4,
    deterministic=True,
)


@pytest.mark.parametrize("n, k, expected", [(2, 1, 3), (2, 2, 6), (3, 1, 10), (3, 2, 175)])
def test_nondecreasing_tables_match_down_set_oracle(n: int, k: int, expected: int) -> None:
    lattice = chain(n)
    tables = nondecreasing_tables(lattice, k)
    assert len(tables) == expected
    assert count_monotone_into_chain(product_order(input_space(lattice, k)), n) == expected
    assert len(np.unique(tables, axis=0)) == expected


def test_nondecreasing_tables_on_boolean_lattice_are_nondecreasing() -> None:
    lattice = boolean_lattice(2)
    for values in nondecreasing_tables(lattice, 1):
        assert is_nondecreasing(FunctionalTable(lattice, 1, values))


def test_all_tables_digit_order() -> None:
    assert all_tables(chain(2), 1).tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_monotone_set_functions_counts(k: int) -> None:
    assert len(monotone_set_functions(k)) == MONOTONE_BOOLEAN_COUNTS[k]


def test_monotone_set_functions_unary() -> None:
    assert monotone_set_functions(1) == [[], [1], [0]]


def test_down_sets_of_a_chain() -> None:
    leq = np.array([[True, True], [False, True]])
    assert down_sets(leq) == [0, 1, 3]
    assert count_monotone_into_chain(leq, 1) == 1
    with pytest.raises(FunctionalError):
        count_monotone_into_chain(leq, 0)


def test_random_generators_are_seeded() -> None:
    lattice = chain(4)
    assert random_nondecreasing(lattice, 2, 7) == random_nondecreasing(lattice, 2, 7)
    assert random_capacity(lattice, 2, 7) == random_capacity(lattice, 2, 7)
    assert random_term(lattice, ["x1", "x2"], 7) == random_term(lattice, ["x1", "x2"], 7)
    assert random_family(3, 7) == random_family(3, 7)
    assert random_cone(n5(), 7) == random_cone(n5(), 7)


def test_random_nondecreasing_is_nondecreasing() -> None:
    lattice = boolean_lattice(2)
    for seed in range(20):
        assert is_nondecreasing(random_nondecreasing(lattice, 2, seed))


def test_random_capacity_is_normalized() -> None:
    for seed in range(10):
        assert random_capacity(chain(4), 3, seed).is_normalized()
    with pytest.raises(FunctionalError):
        random_capacity(chain(4), 0, 1)


def test_random_term_respects_depth() -> None:
    lattice = chain(3)
    variables = ("x1", "x2", "x3")
    for seed in range(20):
        term = random_term(lattice, variables, seed, depth=2)
        assert term.depth() <= 2
        table_of(lattice, term, variables)
    with pytest.raises(FunctionalError):
        random_term(lattice, variables, 0, depth=-1)


def test_random_family_members() -> None:
    for seed in range(20):
        family = random_family(3, seed, max_members=2)
        assert 1 <= len(family) <= 2
        assert all(x and x <= {1, 2, 3} for x in family)


def test_random_family_needs_a_variable() -> None:
    with pytest.raises(FunctionalError, match="k >= 1"):
        random_family(0, 0)


def test_random_cone_is_a_cone() -> None:
    for seed in range(20):
        cone = random_cone(n5(), seed)
        assert isinstance(cone, Cone)
        assert len(cone.h) == 1


def test_checks_for_all_covers_every_suite() -> None:
    suites = {check.suite for check in checks_for("all")}
    assert suites == {
        "lattices",
        "normal-forms",
        "term-blockers",
        "blocker-duality",
        "cones",
        "sugeno-samples",
        "term-invariance",
        "chain-monotonicity",
        "characterizations",
        "examples",
    }


def test_claim_selections() -> None:
    assert [c.name for c in checks_for("thm32")] == [
        "normal-forms-exhaustive",
        "normal-forms-random",
        "normal-forms-terms",
    ]
    assert [c.name for c in checks_for("thm34")] == ["term-blockers", "blocker-duality", "complete-distributive-law"]
    assert [c.name for c in checks_for("thm43")] == ["term-invariance-samples", "term-invariance"]
    assert [c.name for c in checks_for("prop45")] == ["invariant-monotone", "boolean-boundary"]
    assert [c.name for c in checks_for("thm47")] == ["sugeno-samples", "sugeno-characterization"]
    assert [c.name for c in checks_for("thm48")] == ["polynomial-characterization"]


def test_every_check_outside_lattices_has_a_claim() -> None:
    claims = {c.claim for c in checks_for("all") if c.suite != "lattices"}
    assert claims == set(CLAIMS) | {"cones", "examples"}


def test_run_suite_requires_config() -> None:
    with pytest.raises(InvalidConfigError):
        run_suite(None)


@pytest.mark.parametrize(
    "config",
    [
        SuiteConfig(suite="everything"),
        SuiteConfig(lattices=()),
        SuiteConfig(lattices=("chain9",)),
        SuiteConfig(seed=-1),
        SuiteConfig(random_tables=0),
        SuiteConfig(jobs=0),
    ],
)
def test_invalid_configs(config: SuiteConfig) -> None:
    with pytest.raises(InvalidConfigError):
        run_suite(config)


def test_suite_without_tasks_on_selection() -> None:
    with pytest.raises(InvalidConfigError):
        run_suite(SuiteConfig(suite="normal-forms", lattices=("n5",)))


def test_lattices_suite_reports_witnesses() -> None:
    report = run_suite(SuiteConfig(suite="lattices", deterministic=True))
    assert report.passed
    assert len(report.results) == 9
    assert report.elapsed == 0.0
    by_lattice = {r.lattice: r for r in report.results}
    assert by_lattice["n5"].witness["triple"] == ["z", "x", "y"]
    assert by_lattice["chain3"].witness is None


def test_blocker_duality_suite_on_selection() -> None:
    config = SuiteConfig(suite="blocker-duality", lattices=("n5", "chain3"), **SMALL_SAMPLES)
    report = run_suite(config)
    assert report.passed
    assert [(r.check, r.lattice) for r in report.results] == [
        ("blocker-duality", "chain3"),
        ("blocker-duality", "n5"),
        ("complete-distributive-law", "chain3"),
        ("complete-distributive-law", "n5"),
    ]
    witness = report.results[1].witness
    assert witness == {"ground": ["x", "y", "z"], "family": [["x"], ["y", "z"]], "lower": "x", "upper": "z"}
    assert report.results[3].witness == {"grid": [["0", "z"], ["x", "y"]], "lhs": "z", "rhs": "x"}


@pytest.mark.parametrize("strict", [False, True])
def test_term_invariance_suite(strict: bool) -> None:
    report = run_suite(SuiteConfig(suite="term-invariance", strict_continuity=strict, **SMALL_SAMPLES))
    assert report.passed


def test_full_suite_passes_with_small_samples() -> None:
    report = run_suite(SuiteConfig(suite="all", **SMALL_SAMPLES))
    failing = [(r.check, r.lattice, [f.witness for f in r.failures]) for r in report.results if not r.passed]
    assert failing == []
    assert report.verdict == "pass"
    payload = json.loads(report.to_json())
    assert payload["verdict"] == "pass"
    assert payload["failures"] == []
    assert payload["instances"] == report.instances
    assert report.summary().splitlines()[-1].startswith("verdict: pass")


def test_parallel_run_matches_serial() -> None:
    config = SuiteConfig(suite="lattices", lattices=("chain2", "n5", "m3"), deterministic=True)
    serial = run_suite(config)
    parallel = run_suite(SuiteConfig(suite="lattices", lattices=("chain2", "n5", "m3"), deterministic=True, jobs=2))
    assert parallel.to_json() == serial.to_json()


def test_failures_carry_repro_command(monkeypatch) -> None:
    def failing_check(name: str, key: str, config: SuiteConfig) -> Outcome:
        out = Outcome(instances=1)
        out.fail(config.seed + 2, {"reason": "forced"})
        return out

    monkeypatch.setattr(runner, "run_check", failing_check)
    report = run_suite(SuiteConfig(suite="lattices", seed=1, lattices=("chain2",), strict_continuity=True))
    assert not report.passed
    [failure] = report.failures
    assert failure.seed == 3
    assert report.to_dict()["checks"][0]["witness"] is None
    assert failure.repro_cmd == "latticekit verify --suite lattices --seed 1 --lattice chain2 --strict-continuity"
    assert "repro: latticekit verify" in report.summary()


def test_repro_command_names_the_claim_selection(monkeypatch) -> None:
    def failing_check(name: str, key: str, config: SuiteConfig) -> Outcome:
        out = Outcome(instances=1)
        out.fail(config.seed, {"reason": "forced"})
        return out

    monkeypatch.setattr(runner, "run_check", failing_check)
    report = run_suite(SuiteConfig(suite="characterizations", seed=5, lattices=("chain3",)))
    assert [f.repro_cmd for f in report.failures] == [
        "latticekit verify --suite thm47 --seed 5 --lattice chain3",
        "latticekit verify --suite thm48 --seed 5 --lattice chain3",
    ]


def test_internal_consistency_error_becomes_failure(monkeypatch) -> None:
    def broken_check(name: str, key: str, config: SuiteConfig) -> Outcome:
        raise InternalConsistencyError("routes disagree")

    monkeypatch.setattr(runner, "run_check", broken_check)
    report = run_suite(SuiteConfig(suite="lattices", lattices=("chain2",)))
    assert report.failures[0].witness == {"error": "routes disagree"}
