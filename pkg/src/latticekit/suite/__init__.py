from .checks import CHECKS, Check, checks_for
from .config import CLAIMS, SUITES, SuiteConfig
from .generators import (
    all_tables,
    enumerate_all,
    enumerate_nondecreasing,
    monotone_set_functions,
    nondecreasing_tables,
    random_capacity,
    random_cone,
    random_family,
    random_nondecreasing,
    random_term,
)
from .oracles import MONOTONE_BOOLEAN_COUNTS, count_monotone_into_chain, down_sets, product_order
from .runner import CheckResult, Failure, SuiteReport, run_suite

__all__ = [
    "CHECKS",
    "Check",
    "checks_for",
    "CLAIMS",
    "SUITES",
    "SuiteConfig",
    "all_tables",
    "enumerate_all",
    "enumerate_nondecreasing",
    "monotone_set_functions",
    "nondecreasing_tables",
    "random_capacity",
    "random_cone",
    "random_family",
    "random_nondecreasing",
    "random_term",
    "MONOTONE_BOOLEAN_COUNTS",
    "count_monotone_into_chain",
    "down_sets",
    "product_order",
    "CheckResult",
    "Failure",
    "SuiteReport",
    "run_suite",
]
