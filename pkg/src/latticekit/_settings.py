import dataclasses
import os
from typing import Any, Callable, Dict, Optional

from ._exceptions import InvalidConfigError, SizeGuardError

DEFAULT_MAX_ELEMENTS = 64
DEFAULT_MAX_CONTINUOUS_ELEMENTS = 8
DEFAULT_MAX_ARITY = 12
DEFAULT_MAX_INPUTS = 10**6
DEFAULT_MAX_TABLES = 10**5
DEFAULT_MAX_CHOICE_FUNCTIONS = 10**5
DEFAULT_MAX_CONE_ELEMENTS = 12

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


@dataclasses.dataclass(frozen=True)
class Guards:
    """
    Size guards and the continuity reading.

    max_elements               elements of any constructed lattice
    max_continuous_elements    lattice size for enumerating continuous maps
    max_arity                  |A| for coefficient maps (2^|A| entries)
    max_inputs                 |L|^|A| for exhaustive evaluation
    max_tables                 size of an exhaustively enumerated table space
    max_choice_functions       |J|^|I| for the complete distributive law
    max_cone_elements          ground size for cone saturation (2^n subsets)
    strict_continuity          also require g(0) = 0 and g(1) = 1
    """

    max_elements: int = DEFAULT_MAX_ELEMENTS
    max_continuous_elements: int = DEFAULT_MAX_CONTINUOUS_ELEMENTS
    max_arity: int = DEFAULT_MAX_ARITY
    max_inputs: int = DEFAULT_MAX_INPUTS
    max_tables: int = DEFAULT_MAX_TABLES
    max_choice_functions: int = DEFAULT_MAX_CHOICE_FUNCTIONS
    max_cone_elements: int = DEFAULT_MAX_CONE_ELEMENTS
    strict_continuity: bool = False

    def __post_init__(self) -> None:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if field.type in (int, "int") and (not isinstance(value, int) or value < 1):
                raise InvalidConfigError(f"{field.name} must be a positive integer, got {value!r}")

    def check(self, guard: str, value: int) -> None:
        """Raise SizeGuardError if value exceeds the named guard."""
        limit = getattr(self, guard)
        if value > limit:
            raise SizeGuardError(
                f"{guard} exceeded: {value} > {limit}",
                guard=guard,
                payload={"value": value, "limit": limit},
            )


def _parse_int(name: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError as exc:
        raise InvalidConfigError(f"{name} must be an integer, got {raw!r}") from exc


def _parse_bool(name: str, raw: str) -> bool:
    value = raw.strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise InvalidConfigError(f"{name} must be a boolean, got {raw!r}")


_ENV_FIELDS: Dict[str, Callable[[str, str], Any]] = {
    "max_elements": _parse_int,
    "max_continuous_elements": _parse_int,
    "max_arity": _parse_int,
    "max_inputs": _parse_int,
    "max_tables": _parse_int,
    "max_choice_functions": _parse_int,
    "max_cone_elements": _parse_int,
    "strict_continuity": _parse_bool,
}


def env_name(field: str) -> str:
    return f"LATTICEKIT_{field.upper()}"


def resolve_guards() -> Guards:
    overrides: Dict[str, Any] = {}
    for field, parse in _ENV_FIELDS.items():
        name = env_name(field)
        raw = os.environ.get(name)
        if raw is not None:
            overrides[field] = parse(name, raw)
    return Guards(**overrides)


_current: Optional[Guards] = None


def get_guards() -> Guards:
    global _current
    if _current is None:
        _current = resolve_guards()
    return _current


def configure(guards: Optional[Guards] = None, **overrides: Any) -> Guards:
    """
    Replace the process-wide guards.

    With no arguments the guards are re-read from the environment.
    """
    global _current
    unknown = set(overrides) - set(_ENV_FIELDS)
    if unknown:
        raise InvalidConfigError(f"unknown guard(s): {', '.join(sorted(unknown))}")
    base = guards if guards is not None else resolve_guards()
    _current = dataclasses.replace(base, **overrides)
    return _current


def strict_continuity(strict: Optional[bool] = None) -> bool:
    return get_guards().strict_continuity if strict is None else strict
