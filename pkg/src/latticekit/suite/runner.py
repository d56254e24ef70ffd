import dataclasses
import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .._exceptions import InternalConsistencyError, InvalidConfigError
from .._settings import configure, get_guards
from .checks import CHECKS, Outcome, checks_for, run_check
from .config import SuiteConfig

__all__ = ["Failure", "CheckResult", "SuiteReport", "run_suite"]

logger = logging.getLogger(__name__)

Task = Tuple[str, str]

_CHECK_ORDER = {check.name: i for i, check in enumerate(CHECKS)}
_SUITE_OF = {check.name: check.claim or check.suite for check in CHECKS}


@dataclasses.dataclass(frozen=True)
class Failure:
    check: str
    lattice: str
    seed: Optional[int]
    witness: Dict[str, Any]
    repro_cmd: str

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class CheckResult:
    check: str
    lattice: str
    instances: int
    failed: int
    failures: Tuple[Failure, ...]
    witness: Optional[Dict[str, Any]]
    elapsed: float

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "lattice": self.lattice,
            "instances": self.instances,
            "passed": self.passed,
            "elapsed": self.elapsed,
            "witness": self.witness,
        }


@dataclasses.dataclass(frozen=True)
class SuiteReport:
    suite: str
    results: Tuple[CheckResult, ...]
    elapsed: float

    @property
    def instances(self) -> int:
        return sum(r.instances for r in self.results)

    @property
    def failures(self) -> List[Failure]:
        return [f for r in self.results for f in r.failures]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "instances": self.instances,
            "failures": [f.to_dict() for f in self.failures],
            "elapsed": self.elapsed,
            "checks": [r.to_dict() for r in self.results],
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=_jsonable)

    def summary(self) -> str:
        lines = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.check} {r.lattice} ({r.instances} instances, {r.elapsed:.2f}s)")
            for f in r.failures:
                lines.append(f"    witness: {json.dumps(f.witness, sort_keys=True, default=_jsonable)}")
                lines.append(f"    repro: {f.repro_cmd}")
        lines.append(
            f"verdict: {self.verdict} ({len(self.results)} checks, {self.instances} instances, "
            f"{sum(r.failed for r in self.results)} failures)"
        )
        return "\n".join(lines)


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (frozenset, set, tuple)):
        return list(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _repro(check: str, lattice: str, config: SuiteConfig) -> str:
    cmd = f"latticekit verify --suite {_SUITE_OF[check]} --seed {config.seed} --lattice {lattice}"
    if config.strict_continuity:
        cmd += " --strict-continuity"
    return cmd


def _run_task(task: Task, config: SuiteConfig) -> CheckResult:
    check, lattice = task
    previous = get_guards()
    if config.guards is not None:
        configure(config.guards)
    start = time.perf_counter()
    try:
        outcome = run_check(check, lattice, config)
    except InternalConsistencyError as exc:
        logger.warning("%s on %s: %s", check, lattice, exc.message)
        outcome = Outcome()
        outcome.fail(None, {"error": exc.message})
    finally:
        configure(previous)
    elapsed = 0.0 if config.deterministic else round(time.perf_counter() - start, 3)
    logger.info("%s on %s: %d instances, %d failures", check, lattice, outcome.instances, outcome.failed)
    return CheckResult(
        check=check,
        lattice=lattice,
        instances=outcome.instances,
        failed=outcome.failed,
        failures=tuple(
            Failure(check, lattice, seed, witness, _repro(check, lattice, config))
            for seed, witness in outcome.failures
        ),
        witness=outcome.witness,
        elapsed=elapsed,
    )


def _tasks(config: SuiteConfig) -> List[Task]:
    return [
        (check.name, lattice)
        for check in checks_for(config.suite)
        for lattice in check.lattices
        if config.lattices is None or lattice in config.lattices
    ]


def run_suite(config: Optional[SuiteConfig]) -> SuiteReport:
    """
    Run every check of the configured suite on its lattices.

    Results are ordered by check, then by lattice, whatever the number of
    jobs. Law violations are report content; only a bad configuration raises.
    """
    if config is None:
        raise InvalidConfigError("no suite configuration given")
    config.validate()
    if config.guards is None:
        config = dataclasses.replace(config, guards=get_guards())
    tasks = _tasks(config)
    if not tasks:
        raise InvalidConfigError(f"suite {config.suite!r} has no checks on the selected lattices")
    logger.info("running %d tasks of suite %s with %d jobs", len(tasks), config.suite, config.jobs)

    start = time.perf_counter()
    if config.jobs == 1:
        results = [_run_task(task, config) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_task, tasks, itertools.repeat(config)))
    order = {task: i for i, task in enumerate(tasks)}
    results.sort(key=lambda r: (_CHECK_ORDER[r.check], order[(r.check, r.lattice)]))
    elapsed = 0.0 if config.deterministic else round(time.perf_counter() - start, 3)
    return SuiteReport(config.suite, tuple(results), elapsed)
