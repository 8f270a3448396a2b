"""Down-compression S((i,s),j), t-kernels and kernel reduction to M(m,1)."""

import hashlib
import logging
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from core.errors import DomainError, PostconditionError, PreconditionError
from core.multisets import Multiset, Staircase
from core.universe import (
    Family,
    Universe,
    Vector,
    get_universe,
    is_cross_t_intersecting,
    iter_bits,
    require_same_universe,
)

logger = logging.getLogger(__name__)


class Kernel(BaseModel):
    """A staircase containing the whole first column M(m,1)."""

    model_config = ConfigDict(frozen=True)

    staircase: Staircase

    @model_validator(mode="after")
    def _check_first_column(self) -> "Kernel":
        missing = [i for i in range(1, self.staircase.m + 1) if (i, 1) not in self.staircase.cells]
        if missing:
            raise ValueError(f"kernel rows {missing} lack their first cell")
        return self

    @classmethod
    def from_levels(cls, levels: Tuple[int, ...]) -> "Kernel":
        cells = frozenset((i, j) for i, x in enumerate(levels, start=1) for j in range(1, x + 1))
        return cls(staircase=Staircase(m=len(levels), l=max(levels, default=0), cells=cells))

    @classmethod
    def rectangle(cls, m: int, l: int) -> "Kernel":
        return cls.from_levels((l,) * m)

    @property
    def m(self) -> int:
        return self.staircase.m

    @property
    def levels(self) -> Tuple[int, ...]:
        return self.staircase.levels

    @property
    def cell_count(self) -> int:
        return len(self.staircase.cells)

    def level(self, i: int) -> int:
        return self.levels[i - 1]

    def without_top(self, i: int) -> "Kernel":
        """T \\ {(i, m(i,T))}"""
        levels = list(self.levels)
        if levels[i - 1] < 2:
            raise PreconditionError(f"Row {i} of the kernel has a single cell")
        levels[i - 1] -= 1
        return Kernel.from_levels(tuple(levels))

    def is_base(self) -> bool:
        return all(x == 1 for x in self.levels)


class CompressionStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    i: int
    s: int
    j: int
    changed_count: int
    kernel_cells: int
    before_checksum: str
    after_checksum: str


class CompressionTrace(BaseModel):
    m: int
    k: int
    t: int
    initial_kernel: Tuple[int, ...]
    final_kernel: Tuple[int, ...]
    steps: List[CompressionStep] = []

    def export(self) -> List[Dict[str, int]]:
        """JSON rows {i, s, j, changed_count, kernel_cells}"""
        return [
            step.model_dump(include={"i", "s", "j", "changed_count", "kernel_cells"})
            for step in self.steps
        ]


def pair_checksum(F: Family, G: Family) -> str:
    payload = f"{F.m}:{F.k}:{F.mask:x}:{G.mask:x}".encode()
    return hashlib.blake2b(payload, digest_size=8).hexdigest()


def _check_shift_indices(m: int, i: int, s: int, j: int) -> None:
    if not (1 <= i <= m and 1 <= j <= m):
        raise DomainError(f"Rows i={i}, j={j} must lie in [1, {m}]")
    if i == j:
        raise DomainError(f"Shifting row {i} onto itself is not defined")
    if s < 1:
        raise DomainError(f"Level s must be positive, got s={s}")


def _shift_vector(vector: Vector, i: int, s: int, j: int) -> Vector:
    # i, j are 0-based here
    height = vector[i]
    if s > height or vector[j] > 0:
        return vector
    out = list(vector)
    out[i] = s - 1
    out[j] = height - s + 1
    return tuple(out)


def shift_multiset(F: Multiset, i: int, s: int, j: int) -> Multiset:
    """Truncate row i to s-1 and pour the removed cells into the empty row j"""
    _check_shift_indices(F.m, i, s, j)
    return Multiset(mult=_shift_vector(F.mult, i - 1, s, j - 1))


def _shift_mask(universe: Universe, mask: int, i: int, s: int, j: int) -> Tuple[int, int]:
    out = mask
    changed = 0
    for r in iter_bits(mask):
        vector = universe.vectors[r]
        image = _shift_vector(vector, i - 1, s, j - 1)
        if image is vector:
            continue
        target = universe.rank_vector(image)
        if mask >> target & 1:
            continue
        out = out & ~(1 << r) | 1 << target
        changed += 1
    return out, changed


def shift_family(family: Family, i: int, s: int, j: int) -> Family:
    """S((i,s),j) applied member-wise; collisions are tested against the unshifted family"""
    _check_shift_indices(family.m, i, s, j)
    mask, _ = _shift_mask(family.universe, family.mask, i, s, j)
    return Family(family.universe, mask)


def is_t_kernel(T: Kernel, F: Family, G: Family, t: int) -> bool:
    """True iff |A ∩ B ∩ T| >= t for every A in F and B in G"""
    require_same_universe(F, G)
    if T.m != F.m:
        raise DomainError(f"Kernel has {T.m} rows, universe has m={F.m}")
    if max(T.levels) > F.k:
        raise DomainError(f"Kernel width {max(T.levels)} exceeds k={F.k}")
    levels = T.levels
    second = G.vectors()
    for a in F.vectors():
        capped = [x if x < c else c for x, c in zip(a, levels)]
        for b in second:
            if sum(x if x < y else y for x, y in zip(capped, b)) < t:
                return False
    return True


def _check_pair(F: Family, G: Family, t: int) -> None:
    require_same_universe(F, G)
    m, k = F.m, F.k
    if not 1 <= t <= k:
        raise DomainError(f"t must lie in [1, k={k}], got t={t}")
    if m < 2 * k - t:
        raise PreconditionError(f"Compression needs m >= 2k-t, got m={m}, 2k-t={2 * k - t}")


def _composite_steps(
    F: Family, G: Family, T: Kernel, i: int
) -> Tuple[Family, Family, Kernel, List[CompressionStep]]:
    universe = F.universe
    s = T.level(i)
    reduced = T.without_top(i)
    f_mask, g_mask = F.mask, G.mask
    steps: List[CompressionStep] = []
    for j in range(1, F.m + 1):
        if j == i:
            continue
        before = pair_checksum(Family(universe, f_mask), Family(universe, g_mask))
        f_mask, f_changed = _shift_mask(universe, f_mask, i, s, j)
        g_mask, g_changed = _shift_mask(universe, g_mask, i, s, j)
        after = pair_checksum(Family(universe, f_mask), Family(universe, g_mask))
        steps.append(CompressionStep(
            i=i, s=s, j=j,
            changed_count=f_changed + g_changed,
            kernel_cells=reduced.cell_count,
            before_checksum=before,
            after_checksum=after,
        ))
    return Family(universe, f_mask), Family(universe, g_mask), reduced, steps


def composite_shift(F: Family, G: Family, T: Kernel, i: int, t: int) -> Tuple[Family, Family, Kernel]:
    """Apply S((i, m(i,T)), j) for j = 1..m to both families and drop the top cell of row i"""
    _check_pair(F, G, t)
    if not 1 <= i <= F.m:
        raise DomainError(f"Row i={i} must lie in [1, {F.m}]")
    if T.level(i) < 2:
        raise PreconditionError(f"Row {i} of the kernel has m(i,T)={T.level(i)} < 2")
    if not is_cross_t_intersecting(F, G, t):
        raise PreconditionError("The pair is not cross t-intersecting")
    if not is_t_kernel(T, F, G, t):
        raise PreconditionError(f"{T.levels} is not a t-kernel of the pair")
    F2, G2, reduced, _ = _composite_steps(F, G, T, i)
    return F2, G2, reduced


def minimal_kernel(F: Family, G: Family, t: int) -> Kernel:
    """Greedy descent from M(m,k): drop top cells while the kernel property survives"""
    T = Kernel.rectangle(F.m, F.k)
    for i in range(1, F.m + 1):
        while T.level(i) >= 2:
            candidate = T.without_top(i)
            if not is_t_kernel(candidate, F, G, t):
                break
            T = candidate
    return T


def kernel_reduce(F: Family, G: Family, t: int) -> Tuple[Family, Family, CompressionTrace]:
    """Compress a cross t-intersecting pair until M(m,1) is a t-kernel"""
    _check_pair(F, G, t)
    if not F or not G:
        raise PreconditionError("Both families must be non-empty")
    if not is_cross_t_intersecting(F, G, t):
        raise PreconditionError("The pair is not cross t-intersecting")

    T = minimal_kernel(F, G, t)
    trace = CompressionTrace(m=F.m, k=F.k, t=t, initial_kernel=T.levels, final_kernel=T.levels)
    logger.info(f"Kernel reduction on (m={F.m}, k={F.k}, t={t}) starts from kernel {T.levels}")

    current_f, current_g = F, G
    while not T.is_base():
        i = next(row for row in range(1, T.m + 1) if T.level(row) >= 2)
        current_f, current_g, T, steps = _composite_steps(current_f, current_g, T, i)
        trace.steps.extend(steps)
        logger.info(f"Composite shift on row {i}: kernel now {T.levels}")

    trace.final_kernel = T.levels

    if len(current_f) != len(F) or len(current_g) != len(G):
        raise PostconditionError("Kernel reduction changed a family size")
    if not is_cross_t_intersecting(current_f, current_g, t):
        raise PostconditionError("Kernel reduction broke cross t-intersection")
    if not is_t_kernel(Kernel.rectangle(F.m, 1), current_f, current_g, t):
        raise PostconditionError("M(m,1) is not a t-kernel of the reduced pair")
    return current_f, current_g, trace


def replay_trace(F: Family, G: Family, trace: CompressionTrace) -> Tuple[Family, Family]:
    """Re-apply every recorded shift and check the recorded checksums"""
    require_same_universe(F, G)
    universe = F.universe
    f_mask, g_mask = F.mask, G.mask
    for step in trace.steps:
        if pair_checksum(Family(universe, f_mask), Family(universe, g_mask)) != step.before_checksum:
            raise PostconditionError(f"Replay diverged before step {step}")
        f_mask, _ = _shift_mask(universe, f_mask, step.i, step.s, step.j)
        g_mask, _ = _shift_mask(universe, g_mask, step.i, step.s, step.j)
        if pair_checksum(Family(universe, f_mask), Family(universe, g_mask)) != step.after_checksum:
            raise PostconditionError(f"Replay diverged after step {step}")
    return Family(universe, f_mask), Family(universe, g_mask)


def blocked_mask(F: Multiset) -> Family:
    """Members whose support misses supp(F); none of them can partner F when t = 1"""
    universe = get_universe(F.m, F.k)
    mask = 0
    for r, vector in enumerate(universe.vectors):
        if all(x == 0 or y == 0 for x, y in zip(F.mult, vector)):
            mask |= 1 << r
    return Family(universe, mask)
