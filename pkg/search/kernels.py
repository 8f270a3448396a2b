"""Randomized check that kernel reduction succeeds on cross t-intersecting pairs."""

import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from bounds.extremal_bounds import hm_pair
from compression.down_compression import kernel_reduce, replay_trace
from config import Config
from core.errors import DomainError, MultisetError, PreconditionError
from core.universe import Family, get_universe
from search.compatibility import get_index

logger = logging.getLogger(__name__)


class KernelFailure(BaseModel):
    index: int
    seed: int
    error: str


class KernelPipelineReport(BaseModel):
    m: int
    k: int
    t: int
    samples: int
    seed: int
    passes: int = 0
    hm_identity: bool = False
    failures: List[KernelFailure] = []

    @property
    def ok(self) -> bool:
        return not self.failures and self.hm_identity


def _random_subfamily(rng: np.random.Generator, mask: int) -> int:
    ranks = [r for r in range(mask.bit_length()) if mask >> r & 1]
    keep = rng.random(len(ranks)) < 0.5
    keep[rng.integers(len(ranks))] = True
    out = 0
    for r, chosen in zip(ranks, keep):
        if chosen:
            out |= 1 << r
    return out


def random_cross_pair(m: int, k: int, t: int, seed: int) -> Tuple[Family, Family]:
    """Random non-empty sub-families of a closed pair (Γ(X), X)"""
    rng = np.random.default_rng(seed)
    universe = get_universe(m, k)
    index = get_index(m, k, t)
    while True:
        generators = rng.choice(universe.size, size=int(rng.integers(1, 4)), replace=True)
        partner = universe.full_mask
        for r in generators:
            partner &= index.neighbors[int(r)]
        if not partner:
            continue
        first = index.gamma_mask(partner)
        return (
            Family(universe, _random_subfamily(rng, first)),
            Family(universe, _random_subfamily(rng, partner)),
        )


def verify_kernel_pipeline(
    m: int,
    k: int,
    t: int,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> KernelPipelineReport:
    """Run kernel_reduce on the HM pair and on samples-1 random pairs; failures are recorded, not raised"""
    samples = Config.DEFAULT_SAMPLES if samples is None else samples
    seed = Config.DEFAULT_SEED if seed is None else seed
    if not 1 <= t <= k:
        raise DomainError(f"t must lie in [1, k={k}], got t={t}")
    if m < 2 * k - t:
        raise PreconditionError(f"Kernel reduction needs m >= 2k-t, got m={m}, 2k-t={2 * k - t}")
    if samples < 1:
        raise DomainError(f"samples must be positive, got {samples}")

    report = KernelPipelineReport(m=m, k=k, t=t, samples=samples, seed=seed)
    rng = np.random.default_rng(seed)
    sample_seeds = [int(s) for s in rng.integers(0, 2**32, size=samples - 1)]

    F, G = hm_pair(m, k, t)
    try:
        F2, G2, trace = kernel_reduce(F, G, t)
        report.hm_identity = not trace.steps and (F2, G2) == (F, G)
        report.passes += 1
    except MultisetError as e:
        report.failures.append(KernelFailure(index=0, seed=seed, error=str(e)))

    for index, sample_seed in enumerate(sample_seeds, start=1):
        F, G = random_cross_pair(m, k, t, sample_seed)
        try:
            F2, G2, trace = kernel_reduce(F, G, t)
            if replay_trace(F, G, trace) != (F2, G2):
                raise MultisetError("replayed trace does not reproduce the reduced pair")
            report.passes += 1
        except MultisetError as e:
            logger.warning(f"Kernel reduction failed on sample {index} (seed {sample_seed}): {e}")
            report.failures.append(KernelFailure(index=index, seed=sample_seed, error=str(e)))

    logger.info(f"Kernel pipeline at (m={m}, k={k}, t={t}): {report.passes}/{samples} passed")
    return report
