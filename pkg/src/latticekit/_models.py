import dataclasses
from typing import Any, Dict, Optional

__all__ = ["Verdict"]


@dataclasses.dataclass(frozen=True)
class Verdict:
    """
    Outcome of a predicate.

    `witness` is a JSON-ready dict describing the first counterexample found in
    scan order, or None when the predicate holds.
    """

    holds: bool
    witness: Optional[Dict[str, Any]] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

