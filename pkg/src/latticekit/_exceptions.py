from typing import Any, Optional, Tuple, Type

__all__ = [
    "LatticeKitError",
    "LatticeError",
    "NotALatticeError",
    "CyclicCoversError",
    "NoBoundedStructureError",
    "DuplicateNameError",
    "UnknownElementError",
    "LatticeMismatchError",
    "SizeGuardError",
    "TermError",
    "TermSyntaxError",
    "UnknownIdentifierError",
    "ArityViolationError",
    "UnboundVariableError",
    "IdentifierCollisionError",
    "FunctionalError",
    "CapacityNotNormalizedError",
    "CapacityNotMonotoneError",
    "EmptyFamilyError",
    "EmptyMemberError",
    "NotAConeError",
    "FormatError",
    "InvalidConfigError",
    "InternalConsistencyError",
    "exit_code_for",
]


class LatticeKitError(Exception):
    """Generic latticekit error."""

    def __init__(self, message: str = "", payload: Any = None) -> None:
        self.message = str(message) if message is not None else ""
        self.payload = payload
        super().__init__(self.message)


class LatticeError(LatticeKitError):
    """A lattice could not be built or was used inconsistently."""


class NotALatticeError(LatticeError):
    """Some pair of elements lacks a unique meet or join."""

    def __init__(
        self,
        message: str = "",
        pair: Optional[Tuple[str, str]] = None,
        payload: Any = None,
    ) -> None:
        super().__init__(message, payload)
        self.pair = pair


class CyclicCoversError(LatticeError):
    """The cover relation contains a cycle."""


class NoBoundedStructureError(LatticeError):
    """No unique bottom or no unique top."""


class DuplicateNameError(LatticeError):
    """Element names are not unique."""


class UnknownElementError(LatticeError):
    """A name does not denote an element of the lattice."""


class LatticeMismatchError(LatticeError):
    """Objects over different lattices were combined."""


class SizeGuardError(LatticeKitError):
    """A configured size guard would be exceeded."""

    def __init__(self, message: str = "", guard: str = "", payload: Any = None) -> None:
        super().__init__(message, payload)
        self.guard = guard


class TermError(LatticeKitError):
    """Errors raised while parsing or evaluating lattice terms."""


class TermSyntaxError(TermError):
    """Malformed expression text."""

    def __init__(self, message: str = "", position: int = 0, payload: Any = None) -> None:
        super().__init__(message, payload)
        self.position = position


class UnknownIdentifierError(TermError):
    """An identifier is neither a declared variable nor a lattice element."""

    def __init__(self, message: str = "", token: str = "", payload: Any = None) -> None:
        super().__init__(message, payload)
        self.token = token


class ArityViolationError(TermError):
    """Meet/Join with fewer than two children, or too many variables."""


class UnboundVariableError(TermError):
    """An assignment does not cover every variable of a term."""


class IdentifierCollisionError(TermError):
    """A variable name is also an element name."""


class FunctionalError(LatticeKitError):
    """Errors raised by functional tables, capacities and set families."""


class CapacityNotNormalizedError(FunctionalError):
    """v(empty) is not bottom or v(full) is not top."""


class CapacityNotMonotoneError(FunctionalError):
    """X <= Y but v(X) is not below v(Y)."""


class EmptyFamilyError(FunctionalError):
    """A set family that must be nonempty is empty."""


class EmptyMemberError(FunctionalError):
    """A set family contains the empty set."""


class NotAConeError(FunctionalError):
    """Some member of H does not meet some member of K."""


class FormatError(LatticeKitError):
    """A lattice, table or capacity file could not be read."""

    def __init__(self, message: str = "", line: Optional[int] = None, payload: Any = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, payload)
        self.line = line


class InvalidConfigError(LatticeKitError):
    """Bad configuration value or suite configuration."""


class InternalConsistencyError(LatticeKitError):
    """Two independent computations of the same fact disagree."""


def exit_code_for(exc: BaseException) -> int:
    exc_map: dict[Type[LatticeKitError], int] = {
        InternalConsistencyError: 1,
    }
    for exc_cls, code in exc_map.items():
        if isinstance(exc, exc_cls):
            return code
    if isinstance(exc, LatticeKitError):
        return 2
    return 1
