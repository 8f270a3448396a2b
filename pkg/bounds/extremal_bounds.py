"""Closed-form bounds for intersecting multiset families and the families that attain them."""

import logging
from math import comb
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from core.errors import DomainError
from core.multisets import Multiset
from core.universe import Family, get_universe, intersection_size_vectors

logger = logging.getLogger(__name__)

FamilyPair = Tuple[Family, Family]


class BoundRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: Optional[int] = None
    k: int
    t: int
    n: Optional[int] = None
    formula: str
    value: int
    hypothesis_ok: bool
    hypothesis: str


def _check_positive(**values: int) -> None:
    bad = [f"{name}={value}" for name, value in values.items() if value < 1]
    if bad:
        raise DomainError(f"Parameters must be positive: {', '.join(bad)}")


def _check_t(k: int, t: int) -> None:
    if t > k:
        raise DomainError(f"t={t} exceeds k={k}")


def star_bound(m: int, k: int) -> int:
    _check_positive(m=m, k=k)
    return comb(m + k - 2, k - 1)


def fgv_bound(m: int, k: int, t: int) -> int:
    """Largest t-intersecting family: C(m+k-t-1, k-t)"""
    _check_positive(m=m, k=k, t=t)
    _check_t(k, t)
    return comb(m + k - t - 1, k - t)


def sum_bound(m: int, k: int, t: int) -> int:
    """Largest |F|+|G| over non-empty cross t-intersecting pairs in ((m choose k))"""
    _check_positive(m=m, k=k, t=t)
    _check_t(k, t)
    excluded = sum(comb(k, i) * comb(m - 1, k - i) for i in range(t))
    return comb(m + k - 1, k) - excluded + 1


def set_sum_bound(n: int, k: int, t: int) -> int:
    """The same quantity for k-subsets of [n]"""
    _check_positive(n=n, k=k, t=t)
    if n < k:
        raise DomainError(f"No {k}-subsets of [{n}]")
    excluded = sum(comb(k, i) * comb(n - k, k - i) for i in range(t))
    return comb(n, k) - excluded + 1


def star_hypothesis(m: int, k: int) -> bool:
    return m >= k + 1


def fgv_hypothesis(m: int, k: int, t: int) -> bool:
    return m >= t * (k - t) + 2


def sum_hypothesis(m: int, k: int, t: int) -> bool:
    if t == 1:
        return m >= k + 1
    return m >= 2 * k - t


def set_sum_hypothesis(n: int, k: int, t: int) -> bool:
    return k > t >= 1 and n > 2 * k - t and (n, t) != (2 * k, 1)


def bound_records(m: int, k: int, t: int, n: Optional[int] = None) -> List[BoundRecord]:
    """Every bound that speaks about (m, k, t); n defaults to m+k-1"""
    n = m + k - 1 if n is None else n
    records = []
    if t == 1:
        records.append(BoundRecord(
            m=m, k=k, t=t, formula="star", value=star_bound(m, k),
            hypothesis_ok=star_hypothesis(m, k), hypothesis="m >= k+1",
        ))
    records.append(BoundRecord(
        m=m, k=k, t=t, formula="fgv", value=fgv_bound(m, k, t),
        hypothesis_ok=fgv_hypothesis(m, k, t), hypothesis="m >= t(k-t)+2",
    ))
    records.append(BoundRecord(
        m=m, k=k, t=t, formula="sum", value=sum_bound(m, k, t),
        hypothesis_ok=sum_hypothesis(m, k, t),
        hypothesis="m >= k+1" if t == 1 else "m >= 2k-t",
    ))
    records.append(BoundRecord(
        k=k, t=t, n=n, formula="set_sum", value=set_sum_bound(n, k, t),
        hypothesis_ok=set_sum_hypothesis(n, k, t),
        hypothesis="k > t >= 1, n > 2k-t, (n,t) != (2k,1)",
    ))
    for record in records:
        if not record.hypothesis_ok:
            logger.warning(f"{record.formula} bound at (m={m}, k={k}, t={t}) is outside its hypothesis")
    return records


def star_family(m: int, k: int, i: int) -> Family:
    """All k-multisets containing i"""
    if not 1 <= i <= m:
        raise DomainError(f"Element i={i} must lie in [1, {m}]")
    universe = get_universe(m, k)
    mask = 0
    for r, vector in enumerate(universe.vectors):
        if vector[i - 1] > 0:
            mask |= 1 << r
    return Family(universe, mask)


def hm_pair(m: int, k: int, t: int) -> FamilyPair:
    """({[k]}, {G : |G ∩ [k]| >= t})"""
    _check_positive(m=m, k=k, t=t)
    _check_t(k, t)
    if k > m:
        raise DomainError(f"[k] needs k <= m, got k={k}, m={m}")
    universe = get_universe(m, k)
    first = (1,) * k + (0,) * (m - k)
    mask = 0
    for r, vector in enumerate(universe.vectors):
        if intersection_size_vectors(vector, first) >= t:
            mask |= 1 << r
    return Family.from_vectors(universe, [first]), Family(universe, mask)


def triangle_pair() -> FamilyPair:
    universe = get_universe(3, 2)
    triangle = Family.from_multisets(
        universe, [Multiset.from_elements(e, 3) for e in ([1, 2], [1, 3], [2, 3])]
    )
    return triangle, triangle


def predicted_optima(m: int, k: int, t: int) -> List[FamilyPair]:
    """One representative per isomorphism class of the claimed extremal pairs"""
    _check_positive(m=m, k=k, t=t)
    _check_t(k, t)
    if not sum_hypothesis(m, k, t) or k > m:
        logger.warning(f"No extremal structure is known at (m={m}, k={k}, t={t})")
        return []
    if t >= 2 or k != 2:
        return [hm_pair(m, k, t)]
    star = star_family(m, 2, 1)
    if m == 3:
        return [triangle_pair(), hm_pair(3, 2, 1), (star, star)]
    return [hm_pair(m, 2, 1), (star, star)]
