"""Dense ranking of ((m choose k)) and families stored as membership bitmaps."""

import json
import logging
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from config import Config
from core.errors import BudgetExceededError, DomainError
from core.multisets import Multiset, format_multiset, multichoose, multiset_from_json

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def rank(F: Multiset) -> int:
    """0-based position of F in the lexicographic order of sorted element lists"""
    m, k = F.m, F.k
    if k < 1:
        raise DomainError("Only non-empty multisets are ranked")
    r = 0
    low = 1
    for position, element in enumerate(F.elements()):
        remaining = k - position - 1
        for v in range(low, element):
            r += multichoose(m - v + 1, remaining)
        low = element
    return r


def unrank(m: int, k: int, r: int) -> Multiset:
    size = multichoose(m, k)
    if k < 1:
        raise DomainError(f"Cardinality must be positive, got k={k}")
    if not 0 <= r < size:
        raise DomainError(f"Rank {r} out of range [0, {size}) for (m={m}, k={k})")
    elements: List[int] = []
    low = 1
    for position in range(k):
        remaining = k - position - 1
        for v in range(low, m + 1):
            count = multichoose(m - v + 1, remaining)
            if r < count:
                elements.append(v)
                low = v
                break
            r -= count
    return Multiset.from_elements(elements, m)


def intersection_size_vectors(a: Vector, b: Vector) -> int:
    return sum(x if x < y else y for x, y in zip(a, b))


class Universe:
    """All k-multisets of [m], materialized in canonical order."""

    def __init__(self, m: int, k: int):
        if k < 1:
            raise DomainError(f"Universe cardinality must be positive, got k={k}")
        self.m = m
        self.k = k
        self.size = multichoose(m, k)
        self.vectors: List[Vector] = []
        for combo in combinations_with_replacement(range(m), k):
            mult = [0] * m
            for x in combo:
                mult[x] += 1
            self.vectors.append(tuple(mult))
        self._index: Dict[Vector, int] = {v: r for r, v in enumerate(self.vectors)}
        self.full_mask = (1 << self.size) - 1

    @property
    def key(self) -> Tuple[int, int]:
        return (self.m, self.k)

    def rank_vector(self, vector: Vector) -> int:
        try:
            return self._index[vector]
        except KeyError:
            raise DomainError(f"{vector} is not a member of ((m={self.m}, k={self.k}))") from None

    def rank(self, F: Multiset) -> int:
        if F.m != self.m:
            raise DomainError(f"Ground set mismatch: m={F.m} vs universe m={self.m}")
        if F.k != self.k:
            raise DomainError(f"Cardinality mismatch: |F|={F.k} vs universe k={self.k}")
        return self._index[F.mult]

    def unrank(self, r: int) -> Multiset:
        if not 0 <= r < self.size:
            raise DomainError(f"Rank {r} out of range [0, {self.size})")
        return Multiset(mult=self.vectors[r])

    def __repr__(self) -> str:
        return f"Universe(m={self.m}, k={self.k}, size={self.size})"


@lru_cache(maxsize=64)
def _cached_universe(m: int, k: int) -> Universe:
    return Universe(m, k)


def get_universe(m: int, k: int) -> Universe:
    """The shared Universe for (m, k), refused above Config.UNIVERSE_BUDGET members"""
    size = multichoose(m, k)
    if size > Config.UNIVERSE_BUDGET:
        raise BudgetExceededError(
            f"(m={m}, k={k}) has {size} members, above the universe budget {Config.UNIVERSE_BUDGET}"
        )
    return _cached_universe(m, k)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Family:
    """A set of distinct members of one universe, held as a bitmap over ranks."""

    __slots__ = ("universe", "mask")

    def __init__(self, universe: Universe, mask: int = 0):
        if mask < 0 or mask > universe.full_mask:
            raise DomainError(f"Mask does not fit a universe of size {universe.size}")
        self.universe = universe
        self.mask = mask

    @classmethod
    def from_multisets(cls, universe: Universe, members: Iterable[Multiset]) -> "Family":
        mask = 0
        for F in members:
            mask |= 1 << universe.rank(F)
        return cls(universe, mask)

    @classmethod
    def from_vectors(cls, universe: Universe, vectors: Iterable[Vector]) -> "Family":
        mask = 0
        for v in vectors:
            mask |= 1 << universe.rank_vector(tuple(v))
        return cls(universe, mask)

    @classmethod
    def from_ranks(cls, universe: Universe, ranks: Iterable[int]) -> "Family":
        mask = 0
        for r in ranks:
            if not 0 <= r < universe.size:
                raise DomainError(f"Rank {r} out of range [0, {universe.size})")
            mask |= 1 << r
        return cls(universe, mask)

    @classmethod
    def full(cls, universe: Universe) -> "Family":
        return cls(universe, universe.full_mask)

    @property
    def m(self) -> int:
        return self.universe.m

    @property
    def k(self) -> int:
        return self.universe.k

    def ranks(self) -> List[int]:
        return list(iter_bits(self.mask))

    def vectors(self) -> List[Vector]:
        return [self.universe.vectors[r] for r in iter_bits(self.mask)]

    def members(self) -> List[Multiset]:
        return [Multiset(mult=v) for v in self.vectors()]

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __iter__(self) -> Iterator[Multiset]:
        return iter(self.members())

    def __contains__(self, F: Multiset) -> bool:
        if F.m != self.m or F.k != self.k:
            return False
        return bool(self.mask >> self.universe.rank(F) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.universe.key == other.universe.key and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.universe.key, self.mask))

    def __repr__(self) -> str:
        return f"Family(m={self.m}, k={self.k}, {format_family(self)})"


def require_same_universe(A: Family, B: Family) -> None:
    if A.universe.key != B.universe.key:
        raise DomainError(f"Universe mismatch: {A.universe.key} vs {B.universe.key}")


def is_cross_t_intersecting(A: Family, B: Family, t: int) -> bool:
    """True iff |F ∩ G| >= t for every F in A and G in B (vacuous when either is empty)"""
    require_same_universe(A, B)
    if t < 1:
        raise DomainError(f"t must be positive, got t={t}")
    second = B.vectors()
    for a in A.vectors():
        for b in second:
            if intersection_size_vectors(a, b) < t:
                return False
    return True


def is_t_intersecting(A: Family, t: int) -> bool:
    return is_cross_t_intersecting(A, A, t)


def family_supports(A: Family) -> FrozenSet[FrozenSet[int]]:
    """supp(A): the set of member supports"""
    return frozenset(
        frozenset(i for i, x in enumerate(v, start=1) if x > 0) for v in A.vectors()
    )


def format_family(A: Family) -> str:
    return "[" + ",".join(format_multiset(F) for F in A.members()) + "]"


def family_to_json(A: Family) -> List[List[int]]:
    return [F.elements() for F in A.members()]


def parse_family(text: str, m: int, k: Optional[int] = None) -> Family:
    """Parse a JSON array of multiset arrays; k is inferred from the first member when omitted"""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(f"Malformed family text: {e}") from e
    return family_from_json(raw, m, k)


def family_from_json(raw, m: int, k: Optional[int] = None) -> Family:
    if not isinstance(raw, list):
        raise DomainError(f"A family must be a JSON array, got {type(raw).__name__}")
    members = [multiset_from_json(item, m) for item in raw]
    if k is None:
        if not members:
            raise DomainError("Cannot infer k from an empty family")
        k = members[0].k
    universe = get_universe(m, k)
    seen = set()
    for F in members:
        if F.mult in seen:
            raise DomainError(f"Duplicate member {format_multiset(F)}")
        seen.add(F.mult)
    return Family.from_multisets(universe, members)


def families_of(universe: Universe, *groups: Sequence[Sequence[int]]) -> Tuple[Family, ...]:
    """Build families from element lists, e.g. families_of(U, [[1, 1], [1, 2]])"""
    return tuple(
        Family.from_multisets(universe, [Multiset.from_elements(g, universe.m) for g in group])
        for group in groups
    )
