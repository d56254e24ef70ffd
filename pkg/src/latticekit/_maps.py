import dataclasses
import logging
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from ._exceptions import LatticeMismatchError, UnknownElementError
from ._lattice import Lattice, check_same_lattice
from ._models import Verdict
from ._settings import get_guards, strict_continuity

__all__ = [
    "EndoMap",
    "is_continuous",
    "continuity_defect",
    "enumerate_continuous",
    "meet_translation",
    "join_translation",
    "compose",
    "apply_pointwise",
]

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class EndoMap:
    """A self-map of a lattice; image[i] is the image of element i."""

    lattice: Lattice
    image: Tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(v) for v in self.image)
        if len(image) != self.lattice.n:
            raise UnknownElementError(
                f"map must assign all {self.lattice.n} elements, got {len(image)}"
            )
        for v in image:
            self.lattice.check_element(v)
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, lattice: Lattice) -> "EndoMap":
        return cls(lattice, tuple(range(lattice.n)))

    @classmethod
    def constant(cls, lattice: Lattice, c: int) -> "EndoMap":
        return cls(lattice, (c,) * lattice.n)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.intp)

    def describe(self) -> str:
        names = self.lattice.names
        return " ".join(f"{names[i]}->{names[v]}" for i, v in enumerate(self.image))

    def to_dict(self) -> Any:
        names = self.lattice.names
        return {names[i]: names[v] for i, v in enumerate(self.image)}


def continuity_defect(
    lattice: Lattice, g: EndoMap, strict: Optional[bool] = None
) -> Verdict:
    """
    Binary meet and join preservation, which on a finite lattice is the same
    as preserving every nonempty meet and join.

    The empty meet and join are not part of the lenient reading, so constant
    maps and x -> x & c are continuous. The strict reading adds g(0) = 0 and
    g(1) = 1.
    """
    if g.lattice != lattice:
        raise LatticeMismatchError(f"map is over {g.lattice!r}, not {lattice!r}")
    names = lattice.names
    img = g.as_array()
    bad_meet = img[lattice.meet] != lattice.meet[img[:, None], img[None, :]]
    bad_join = img[lattice.join] != lattice.join[img[:, None], img[None, :]]
    bad = bad_meet | bad_join
    if bad.any():
        x, y = (int(v) for v in np.argwhere(bad)[0])
        if bad_meet[x, y]:
            op, table = "meet", lattice.meet
        else:
            op, table = "join", lattice.join
        return Verdict(
            False,
            {
                "pair": [names[x], names[y]],
                "operation": op,
                "image_of_result": names[img[table[x, y]]],
                "result_of_images": names[table[img[x], img[y]]],
            },
        )
    if strict_continuity(strict):
        for bound in (lattice.bottom, lattice.top):
            if img[bound] != bound:
                return Verdict(
                    False,
                    {"bound": names[bound], "image": names[img[bound]]},
                )
    return Verdict(True)


def is_continuous(lattice: Lattice, g: EndoMap, strict: Optional[bool] = None) -> bool:
    return continuity_defect(lattice, g, strict).holds


def enumerate_continuous(lattice: Lattice, strict: Optional[bool] = None) -> List[EndoMap]:
    """
    All continuous self-maps, sorted lexicographically by image vector.

    Images are assigned along a linear extension; a pair (x, y) is checked as
    soon as the last of x, y, x & y, x | y has been assigned.
    """
    strict = strict_continuity(strict)
    get_guards().check("max_continuous_elements", lattice.n)

    def build() -> Tuple[EndoMap, ...]:
        images = _continuous_images(lattice, strict)
        logger.debug("%d continuous maps on %r (strict=%s)", len(images), lattice, strict)
        return tuple(EndoMap(lattice, img) for img in sorted(images))

    return list(lattice.memo(("continuous", strict), build))


def _continuous_images(lattice: Lattice, strict: bool) -> List[Tuple[int, ...]]:
    n = lattice.n
    meet, join = lattice.meet, lattice.join
    order = lattice.linear_extension
    pos = {e: p for p, e in enumerate(order)}
    checks: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for x in range(n):
        for y in range(x, n):
            last = max(pos[x], pos[y], pos[int(meet[x, y])], pos[int(join[x, y])])
            checks[last].append((x, y))

    fixed = {lattice.bottom: lattice.bottom, lattice.top: lattice.top} if strict else {}
    image = [-1] * n
    found: List[Tuple[int, ...]] = []

    def consistent(p: int) -> bool:
        for x, y in checks[p]:
            if image[meet[x, y]] != meet[image[x], image[y]]:
                return False
            if image[join[x, y]] != join[image[x], image[y]]:
                return False
        return True

    def backtrack(p: int) -> None:
        if p == n:
            found.append(tuple(image))
            return
        e = order[p]
        for v in ([fixed[e]] if e in fixed else range(n)):
            image[e] = v
            if consistent(p):
                backtrack(p + 1)
        image[e] = -1

    backtrack(0)
    return found


def meet_translation(lattice: Lattice, c: int) -> EndoMap:
    """x -> x & c"""
    c = lattice.check_element(c)
    return EndoMap(lattice, tuple(int(v) for v in lattice.meet[:, c]))


def join_translation(lattice: Lattice, c: int) -> EndoMap:
    """x -> x | c"""
    c = lattice.check_element(c)
    return EndoMap(lattice, tuple(int(v) for v in lattice.join[:, c]))


def compose(g1: EndoMap, g2: EndoMap) -> EndoMap:
    """g1 after g2."""
    lattice = check_same_lattice(g1.lattice, g2.lattice)
    return EndoMap(lattice, tuple(g1.image[v] for v in g2.image))


def apply_pointwise(g: EndoMap, f: Sequence[int]) -> Tuple[int, ...]:
    """The tuple g o f."""
    return tuple(g.image[int(v)] for v in f)
