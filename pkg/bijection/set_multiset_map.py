"""Support-preserving bijection between k-subsets of [m+k-1] and k-multisets of [m].

A subset B splits into A = B ∩ [m] (the support of its image) and a tail
T = B ∩ {m+1, ..., n}. The colex rank of T among (k-a)-subsets of the k-1 tail
positions selects a weak composition of k-a into a parts (lexicographic order);
the i-th smallest element of A receives that part plus one.
"""

import logging
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from config import Config
from core.errors import BudgetExceededError, DomainError
from core.multisets import Multiset, multichoose
from core.universe import Family, get_universe, iter_bits

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


def colex_rank(elements: Sequence[int]) -> int:
    """Colex rank of a set of 0-based elements: sum of C(c_i, i)"""
    return sum(comb(c, i) for i, c in enumerate(sorted(elements), start=1))


def colex_unrank(r: int, k: int) -> Tuple[int, ...]:
    """Inverse of colex_rank for k-subsets of {0, 1, ...}"""
    if r < 0:
        raise DomainError(f"Rank must be non-negative, got {r}")
    out: List[int] = []
    for i in range(k, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= r:
            c += 1
        out.append(c)
        r -= comb(c, i)
    return tuple(reversed(out))


def subset_rank(B: Sequence[int]) -> int:
    return colex_rank([b - 1 for b in B])


def subset_unrank(r: int, k: int) -> Subset:
    return tuple(c + 1 for c in colex_unrank(r, k))


@lru_cache(maxsize=256)
def weak_compositions(total: int, parts: int) -> Tuple[Tuple[int, ...], ...]:
    """All ways to write total as an ordered sum of parts non-negative integers, lexicographic"""
    out = []
    for bars in combinations(range(total + parts - 1), parts - 1):
        bars = (-1,) + bars + (total + parts - 1,)
        out.append(tuple(bars[p + 1] - bars[p] - 1 for p in range(parts)))
    return tuple(out)


@lru_cache(maxsize=256)
def _composition_index(total: int, parts: int) -> Dict[Tuple[int, ...], int]:
    return {c: r for r, c in enumerate(weak_compositions(total, parts))}


def _check_subset(B: Iterable[int], m: int, k: Optional[int]) -> Subset:
    subset = tuple(sorted(set(B)))
    if k is not None and len(subset) != k:
        raise DomainError(f"Expected a {k}-subset, got {list(subset)}")
    k = len(subset)
    if k < 1:
        raise DomainError("The empty set has no image")
    if m < 1:
        raise DomainError(f"Ground set size must be positive, got m={m}")
    n = m + k - 1
    if subset[0] < 1 or subset[-1] > n:
        raise DomainError(f"{list(subset)} is not a subset of [{n}]")
    return subset


def forward_map(B: Iterable[int], m: int, k: Optional[int] = None) -> Multiset:
    """f(B) for a k-subset B of [m+k-1]"""
    subset = _check_subset(B, m, k)
    k = len(subset)
    head = [b for b in subset if b <= m]
    tail = [b - m - 1 for b in subset if b > m]
    a = len(head)
    parts = weak_compositions(k - a, a)[colex_rank(tail)]
    mult = [0] * m
    for element, extra in zip(head, parts):
        mult[element - 1] = extra + 1
    return Multiset(mult=tuple(mult))


def inverse_map(F: Multiset) -> Subset:
    """f^-1(F), a k-subset of [m+k-1]"""
    m, k = F.m, F.k
    if k < 1:
        raise DomainError("Only non-empty multisets have a preimage")
    head = [i for i, x in enumerate(F.mult, start=1) if x > 0]
    a = len(head)
    parts = tuple(F.mult[i - 1] - 1 for i in head)
    r = _composition_index(k - a, a)[parts]
    tail = tuple(c + m + 1 for c in colex_unrank(r, k - a))
    return tuple(head) + tail


class SetFamily:
    """A family of k-subsets of [n], held as a bitmap over colex ranks."""

    __slots__ = ("n", "k", "size", "mask")

    def __init__(self, n: int, k: int, mask: int = 0):
        if k < 1 or n < k:
            raise DomainError(f"No k-subsets for (n={n}, k={k})")
        self.n = n
        self.k = k
        self.size = comb(n, k)
        if mask < 0 or mask >= 1 << self.size:
            raise DomainError(f"Mask does not fit C({n}, {k}) = {self.size} subsets")
        self.mask = mask

    @classmethod
    def from_subsets(cls, n: int, k: int, subsets: Iterable[Iterable[int]]) -> "SetFamily":
        mask = 0
        for B in subsets:
            B = tuple(sorted(set(B)))
            if len(B) != k or B[0] < 1 or B[-1] > n:
                raise DomainError(f"{list(B)} is not a {k}-subset of [{n}]")
            mask |= 1 << subset_rank(B)
        return cls(n, k, mask)

    def subsets(self) -> List[Subset]:
        return [subset_unrank(r, self.k) for r in iter_bits(self.mask)]

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.subsets())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return (self.n, self.k, self.mask) == (other.n, other.k, other.mask)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.mask))

    def __repr__(self) -> str:
        return f"SetFamily(n={self.n}, k={self.k}, {[list(B) for B in self.subsets()]})"


class BijectionTable:
    """f and f^-1 materialized as rank permutations for one (m, k)."""

    def __init__(self, m: int, k: int):
        self.m = m
        self.k = k
        self.n = m + k - 1
        universe = get_universe(m, k)
        self.forward: List[int] = [0] * universe.size
        self.inverse: List[int] = [0] * universe.size
        for B in combinations(range(1, self.n + 1), k):
            s = subset_rank(B)
            r = universe.rank(forward_map(B, m))
            self.forward[s] = r
            self.inverse[r] = s

    def rows(self) -> Iterator[Tuple[Subset, Multiset]]:
        """(subset, image) pairs in colex order of the subset"""
        universe = get_universe(self.m, self.k)
        for s, r in enumerate(self.forward):
            yield subset_unrank(s, self.k), universe.unrank(r)

    def __len__(self) -> int:
        return len(self.forward)


@lru_cache(maxsize=16)
def _build_table(m: int, k: int) -> BijectionTable:
    logger.info(f"Building bijection table for (m={m}, k={k})")
    return BijectionTable(m, k)


def get_bijection_table(m: int, k: int, budget: Optional[int] = None) -> BijectionTable:
    budget = Config.BIJECTION_BUDGET if budget is None else budget
    size = multichoose(m, k)
    if size > budget:
        raise BudgetExceededError(f"Bijection table for (m={m}, k={k}) has {size} rows, budget is {budget}")
    return _build_table(m, k)


def map_family(family: SetFamily, m: Optional[int] = None) -> Family:
    """f(A) = {f(B) : B in A}"""
    expected_m = family.n - family.k + 1
    if m is not None and m != expected_m:
        raise DomainError(f"n={family.n} does not equal m+k-1 for m={m}, k={family.k}")
    if expected_m < 1:
        raise DomainError(f"(n={family.n}, k={family.k}) gives no ground set")
    table = get_bijection_table(expected_m, family.k)
    mask = 0
    for s in iter_bits(family.mask):
        mask |= 1 << table.forward[s]
    return Family(get_universe(expected_m, family.k), mask)


def unmap_family(family: Family) -> SetFamily:
    """f^-1(F) as a family of k-subsets of [m+k-1]"""
    table = get_bijection_table(family.m, family.k)
    mask = 0
    for r in iter_bits(family.mask):
        mask |= 1 << table.inverse[r]
    return SetFamily(table.n, family.k, mask)


def support_lift(family: Family) -> SetFamily:
    """All k-subsets B of [m+k-1] whose trace B ∩ [m] is the support of some member"""
    m, k = family.m, family.k
    n = m + k - 1
    supports: FrozenSet[FrozenSet[int]] = frozenset(
        frozenset(i for i, x in enumerate(v, start=1) if x > 0) for v in family.vectors()
    )
    mask = 0
    for B in combinations(range(1, n + 1), k):
        if frozenset(b for b in B if b <= m) in supports:
            mask |= 1 << subset_rank(B)
    return SetFamily(n, k, mask)


def _as_bits(B: Subset) -> int:
    out = 0
    for b in B:
        out |= 1 << b
    return out


def is_cross_t_intersecting_sets(A: SetFamily, B: SetFamily, t: int) -> bool:
    if (A.n, A.k) != (B.n, B.k):
        raise DomainError(f"Set family mismatch: (n={A.n}, k={A.k}) vs (n={B.n}, k={B.k})")
    if t < 1:
        raise DomainError(f"t must be positive, got t={t}")
    second = [_as_bits(S) for S in B.subsets()]
    for S in A.subsets():
        bits = _as_bits(S)
        if any((bits & other).bit_count() < t for other in second):
            return False
    return True
