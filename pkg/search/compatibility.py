"""Compatibility masks N(A) and the Γ operator they induce."""

import logging
from functools import lru_cache
from typing import List, Optional

import numpy as np

from config import Config
from core.errors import BudgetExceededError, DomainError
from core.universe import Family, Universe, get_universe, is_cross_t_intersecting, iter_bits, require_same_universe

logger = logging.getLogger(__name__)


def _row_to_mask(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


class CompatibilityIndex:
    """For every member A of ((m choose k)), the bitmap of X with |X ∩ A| >= t."""

    def __init__(self, m: int, k: int, t: int):
        if t < 1:
            raise DomainError(f"t must be positive, got t={t}")
        self.universe: Universe = get_universe(m, k)
        self.t = t
        vectors = np.array(self.universe.vectors, dtype=np.int16)
        self.sizes = np.minimum(vectors[:, None, :], vectors[None, :, :]).sum(axis=-1)
        self.compatible = self.sizes >= t
        self.neighbors: List[int] = [_row_to_mask(row) for row in self.compatible]

    @property
    def key(self):
        return (self.universe.m, self.universe.k, self.t)

    def gamma_mask(self, mask: int) -> int:
        out = self.universe.full_mask
        for r in iter_bits(mask):
            out &= self.neighbors[r]
            if not out:
                break
        return out

    def __repr__(self) -> str:
        m, k, t = self.key
        return f"CompatibilityIndex(m={m}, k={k}, t={t})"


@lru_cache(maxsize=32)
def get_index(m: int, k: int, t: int) -> CompatibilityIndex:
    logger.debug(f"Building compatibility index for (m={m}, k={k}, t={t})")
    return CompatibilityIndex(m, k, t)


def gamma(family: Family, t: int) -> Family:
    """Γ(A): every member t-intersecting all of A; Γ(∅) is the whole universe"""
    index = get_index(family.m, family.k, t)
    return Family(family.universe, index.gamma_mask(family.mask))


def closure(family: Family, t: int) -> Family:
    return gamma(gamma(family, t), t)


def closed_families(m: int, k: int, t: int, cap: Optional[int] = None) -> List[int]:
    """Masks of every Γ-image, i.e. every intersection of N(A) masks including the empty one"""
    cap = Config.CLOSURE_CAP if cap is None else cap
    index = get_index(m, k, t)
    closed = {index.universe.full_mask}
    for neighbor in index.neighbors:
        closed |= {mask & neighbor for mask in closed}
        if len(closed) > cap:
            raise BudgetExceededError(
                f"More than {cap} closed families at (m={m}, k={k}, t={t}); raise MEKR_CLOSURE_CAP"
            )
    logger.info(f"Found {len(closed)} closed families at (m={m}, k={k}, t={t})")
    return sorted(closed)


def is_sum_maximal(F: Family, G: Family, t: int) -> bool:
    """Neither side of the pair can gain a member without breaking cross t-intersection"""
    require_same_universe(F, G)
    if not F or not G or not is_cross_t_intersecting(F, G, t):
        return False
    return gamma(F, t) == G and gamma(G, t) == F
