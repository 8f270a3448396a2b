"""Multiset values, their rectangle (staircase) form and the basic algebra on them."""

import json
import logging
from math import comb
from typing import FrozenSet, Iterable, List, Set, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from core.errors import DomainError

logger = logging.getLogger(__name__)


def multichoose(m: int, k: int) -> int:
    """Number of k-multisets of [m], C(m+k-1, k)"""
    if m < 1:
        raise DomainError(f"Ground set size must be positive, got m={m}")
    if k < 0:
        raise DomainError(f"Cardinality must be non-negative, got k={k}")
    return comb(m + k - 1, k)


class Multiset(BaseModel):
    """Multiplicity vector over [m]; mult[i] is the multiplicity of element i+1."""

    model_config = ConfigDict(frozen=True)

    mult: Tuple[int, ...]

    @field_validator("mult")
    @classmethod
    def _check_mult(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(value) < 1:
            raise ValueError("a multiset needs a ground set of size m >= 1")
        if any(x < 0 for x in value):
            raise ValueError(f"multiplicities must be non-negative: {value}")
        return value

    @classmethod
    def from_elements(cls, elements: Iterable[int], m: int) -> "Multiset":
        if m < 1:
            raise DomainError(f"Ground set size must be positive, got m={m}")
        mult = [0] * m
        for x in elements:
            if not 1 <= x <= m:
                raise DomainError(f"Element {x} is outside [1, {m}]")
            mult[x - 1] += 1
        return cls(mult=tuple(mult))

    @property
    def m(self) -> int:
        return len(self.mult)

    @property
    def k(self) -> int:
        return sum(self.mult)

    def multiplicity(self, i: int) -> int:
        if not 1 <= i <= self.m:
            raise DomainError(f"Element {i} is outside [1, {self.m}]")
        return self.mult[i - 1]

    def elements(self) -> List[int]:
        """Sorted element list with repetition"""
        out: List[int] = []
        for i, x in enumerate(self.mult, start=1):
            out.extend([i] * x)
        return out

    def __str__(self) -> str:
        return format_multiset(self)


class Staircase(BaseModel):
    """Row-wise downward-closed cell set inside the rectangle M(m, l)."""

    model_config = ConfigDict(frozen=True)

    m: int
    l: int
    cells: FrozenSet[Tuple[int, int]]

    @model_validator(mode="after")
    def _check_cells(self) -> "Staircase":
        if self.m < 1 or self.l < 0:
            raise ValueError(f"invalid rectangle M({self.m}, {self.l})")
        for i, j in self.cells:
            if not (1 <= i <= self.m and 1 <= j <= self.l):
                raise ValueError(f"cell ({i}, {j}) lies outside M({self.m}, {self.l})")
            if j > 1 and (i, j - 1) not in self.cells:
                raise ValueError(f"cell ({i}, {j}) present without ({i}, {j - 1})")
        return self

    @property
    def levels(self) -> Tuple[int, ...]:
        top = [0] * self.m
        for i, j in self.cells:
            top[i - 1] = max(top[i - 1], j)
        return tuple(top)


def support(F: Multiset) -> Set[int]:
    return {i for i, x in enumerate(F.mult, start=1) if x > 0}


def _check_same_ground(F: Multiset, G: Multiset) -> None:
    if F.m != G.m:
        raise DomainError(f"Ground set mismatch: m={F.m} vs m={G.m}")


def intersection(F: Multiset, G: Multiset) -> Multiset:
    """Element-wise minimum of multiplicities"""
    _check_same_ground(F, G)
    return Multiset(mult=tuple(min(a, b) for a, b in zip(F.mult, G.mult)))


def intersection_size(F: Multiset, G: Multiset) -> int:
    _check_same_ground(F, G)
    return sum(min(a, b) for a, b in zip(F.mult, G.mult))


def to_staircase(F: Multiset, l: int) -> Staircase:
    top = max(F.mult)
    if l < top:
        raise DomainError(f"Rectangle width l={l} is below the largest multiplicity {top}")
    cells = frozenset((i, j) for i, x in enumerate(F.mult, start=1) for j in range(1, x + 1))
    return Staircase(m=F.m, l=l, cells=cells)


def from_staircase(S: Staircase) -> Multiset:
    return Multiset(mult=S.levels)


def format_multiset(F: Multiset) -> str:
    return "[" + ",".join(str(x) for x in F.elements()) + "]"


def parse_multiset(text: str, m: int) -> Multiset:
    """Parse the `[1,1,3]` text form"""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(f"Malformed multiset text {text!r}: {e}") from e
    return multiset_from_json(raw, m)


def multiset_from_json(raw, m: int) -> Multiset:
    if not isinstance(raw, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in raw):
        raise DomainError(f"A multiset must be a list of integers, got {raw!r}")
    return Multiset.from_elements(raw, m)
