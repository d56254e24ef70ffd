import dataclasses
from typing import Optional, Tuple

from .._exceptions import InvalidConfigError
from .._lattice import CATALOG
from .._settings import Guards

__all__ = ["CLAIMS", "SUITES", "SuiteConfig"]

# Claim selections of the published command line, then the finer-grained suites.
CLAIMS: Tuple[str, ...] = ("thm32", "thm34", "thm43", "prop45", "thm47", "thm48")

SUITES: Tuple[str, ...] = CLAIMS + (
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
    "all",
)

_POSITIVE = ("random_tables", "term_samples", "capacity_samples", "cone_samples", "grid_samples", "max_ground", "jobs")


@dataclasses.dataclass(frozen=True)
class SuiteConfig:
    """
    What to run and how many random instances to draw.

    Sample counts are per lattice. Instance i of a sampled check uses seed
    `seed + i`. `guards` of None means the process-wide guards.
    """

    suite: str = "all"
    seed: int = 0
    lattices: Optional[Tuple[str, ...]] = None
    random_tables: int = 1000
    term_samples: int = 100
    capacity_samples: int = 72
    cone_samples: int = 200
    grid_samples: int = 50
    max_ground: int = 3
    jobs: int = 1
    deterministic: bool = False
    strict_continuity: bool = False
    guards: Optional[Guards] = None

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise InvalidConfigError(f"unknown suite {self.suite!r}; expected one of {', '.join(SUITES)}")
        if self.lattices is not None:
            if not self.lattices:
                raise InvalidConfigError("lattice selection is empty")
            unknown = [name for name in self.lattices if name not in CATALOG]
            if unknown:
                raise InvalidConfigError(f"unknown catalog lattices: {', '.join(unknown)}")
        for name in _POSITIVE:
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InvalidConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.seed < 0:
            raise InvalidConfigError(f"seed must be nonnegative, got {self.seed}")
