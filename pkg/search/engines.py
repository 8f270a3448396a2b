"""Exact search engines: brute-force branch and bound, closure-lattice enumeration, maximum cliques."""

import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Set, Tuple

from bounds.extremal_bounds import (
    fgv_bound,
    fgv_hypothesis,
    predicted_optima,
    star_family,
    star_hypothesis,
    sum_bound,
    sum_hypothesis,
)
from compression.down_compression import blocked_mask
from config import Config
from core.errors import BudgetExceededError, DomainError
from core.universe import Family, get_universe, iter_bits
from search.compatibility import closed_families, get_index
from search.report import ClassRecord, SearchReport, Verdict, classify_and_verify, classify_pairs

logger = logging.getLogger(__name__)

ENGINES = ("brute", "closure", "both")


def _check_parameters(m: int, k: int, t: int) -> None:
    if m < 1 or k < 1 or t < 1:
        raise DomainError(f"Parameters must be positive, got (m={m}, k={k}, t={t})")
    if t > k:
        raise DomainError(f"t={t} exceeds k={k}")


_shared_best = None


def _init_worker(shared) -> None:
    global _shared_best
    _shared_best = shared


class _Incumbent:
    """Best value seen so far and every partner mask attaining it.

    With a shared value the bound is the best over all workers, so one worker's find
    prunes the others.
    """

    def __init__(self, value: int, raw: bool, shared=None):
        self.value = value
        self.partners: Set[int] = set()
        self.raw = raw
        self.witnesses: List[Tuple[int, int]] = []
        self.shared = shared

    def bound(self) -> int:
        if self.shared is None:
            return self.value
        return max(self.value, self.shared.value)

    def offer(self, f_mask: int, partner: int, value: int) -> None:
        if value < self.bound():
            return
        if self.shared is not None and value > self.shared.value:
            with self.shared.get_lock():
                if value > self.shared.value:
                    self.shared.value = value
        if value > self.value:
            self.value = value
            self.partners = {partner}
            self.witnesses = [(f_mask, partner)] if self.raw else []
        elif value == self.value:
            self.partners.add(partner)
            if self.raw:
                self.witnesses.append((f_mask, partner))


def _filter_candidates(neighbors: Sequence[int], candidates: int, partner: int) -> int:
    out = 0
    for y in iter_bits(candidates):
        if neighbors[y] & partner:
            out |= 1 << y
    return out


def _descend(
    neighbors: Sequence[int],
    f_mask: int,
    count: int,
    partner: int,
    candidates: int,
    best: _Incumbent,
    prune: bool,
) -> None:
    best.offer(f_mask, partner, count + partner.bit_count())
    while candidates:
        # members outside candidates would empty the partner
        if prune and count + partner.bit_count() + candidates.bit_count() < best.bound():
            return
        low = candidates & -candidates
        candidates ^= low
        x = low.bit_length() - 1
        new_partner = partner & neighbors[x]
        _descend(
            neighbors,
            f_mask | low,
            count + 1,
            new_partner,
            _filter_candidates(neighbors, candidates, new_partner),
            best,
            prune,
        )


def _explore(
    neighbors: Sequence[int],
    full_mask: int,
    roots: Sequence[int],
    incumbent: int,
    prune: bool,
    raw: bool,
) -> Tuple[int, Set[int], List[Tuple[int, int]]]:
    """Search every family whose smallest member is one of roots"""
    best = _Incumbent(incumbent, raw, _shared_best)
    for x in roots:
        partner = full_mask & neighbors[x]
        higher = full_mask & ~((1 << (x + 1)) - 1)
        _descend(
            neighbors,
            1 << x,
            1,
            partner,
            _filter_candidates(neighbors, higher, partner),
            best,
            prune,
        )
    return best.value, best.partners, best.witnesses


def _pairs_from_partners(universe, index, partners: Set[int]) -> List[Tuple[Family, Family]]:
    return [
        (Family(universe, index.gamma_mask(partner)), Family(universe, partner))
        for partner in sorted(partners)
    ]


def _finish_report(
    report: SearchReport,
    pairs: List[Tuple[Family, Family]],
    predicted,
) -> SearchReport:
    universe = pairs[0][0].universe
    forms = classify_pairs(pairs)
    report.num_optimal_pairs = len(pairs)
    report.classes = [ClassRecord.from_canonical(form, universe) for form in forms]
    classify_and_verify(report, forms, universe, predicted)
    return report


def _sum_report(m: int, k: int, t: int, engine: str, optimum: int) -> SearchReport:
    applicable = sum_hypothesis(m, k, t)
    if not applicable:
        logger.warning(f"(m={m}, k={k}, t={t}) is outside the sum theorem hypothesis; results are exploratory")
    return SearchReport(
        m=m, k=k, t=t, engine=engine, objective="sum",
        optimum=optimum, num_optimal_pairs=0,
        bound=sum_bound(m, k, t), bound_applicable=applicable,
    )


def max_sum_bruteforce(
    m: int,
    k: int,
    t: int,
    prune: bool = True,
    threads: Optional[int] = None,
    raw_witnesses: bool = False,
    budget: Optional[int] = None,
) -> SearchReport:
    """Exact max |F| + |Γ(F)| over all non-empty F with non-empty partner"""
    _check_parameters(m, k, t)
    budget = Config.BRUTE_FORCE_BUDGET if budget is None else budget
    universe = get_universe(m, k)
    if universe.size > budget:
        raise BudgetExceededError(
            f"Universe of size {universe.size} exceeds the brute-force budget {budget}; use the closure engine"
        )
    threads = Config.THREADS if threads is None else threads
    started = time.perf_counter()
    logger.info(f"Brute-force search on (m={m}, k={k}, t={t}) with {threads} worker(s)")

    index = get_index(m, k, t)
    neighbors = index.neighbors
    if t == 1:
        neighbors = [universe.full_mask ^ blocked_mask(universe.unrank(r)).mask for r in range(universe.size)]
    # every singleton {x} pairs with N(x), so the best of them is attainable
    incumbent = max(1 + n.bit_count() for n in neighbors)
    roots = list(range(universe.size))

    if threads > 1 and len(roots) > 1:
        chunks = [roots[w::threads] for w in range(min(threads, len(roots)))]
        context = multiprocessing.get_context()
        shared = context.Value("i", incumbent)
        with ProcessPoolExecutor(
            max_workers=len(chunks), mp_context=context, initializer=_init_worker, initargs=(shared,)
        ) as pool:
            futures = [
                pool.submit(_explore, neighbors, universe.full_mask, chunk, incumbent, prune, raw_witnesses)
                for chunk in chunks
            ]
            results = [f.result() for f in futures]
    else:
        results = [_explore(neighbors, universe.full_mask, roots, incumbent, prune, raw_witnesses)]

    optimum = max(value for value, partners, _ in results if partners)
    partners: Set[int] = set()
    witnesses: List[Tuple[int, int]] = []
    for value, found, raw in results:
        if value == optimum:
            partners |= found
            witnesses.extend(raw)

    report = _sum_report(m, k, t, "brute", optimum)
    _finish_report(report, _pairs_from_partners(universe, index, partners), predicted_optima(m, k, t))
    if raw_witnesses:
        report.raw_witnesses = [
            ClassRecord(
                first=[v.elements() for v in Family(universe, f_mask).members()],
                second=[v.elements() for v in Family(universe, partner).members()],
            )
            for f_mask, partner in sorted(witnesses)
        ]
    report.elapsed_ms = (time.perf_counter() - started) * 1000
    logger.info(f"Brute-force optimum {optimum} at (m={m}, k={k}, t={t}) in {report.elapsed_ms:.1f} ms")
    return report


def max_sum_closure(m: int, k: int, t: int, cap: Optional[int] = None) -> SearchReport:
    """Same optimum via the Moore family of Γ-images: max |Γ(X)| + |X| over closed X"""
    _check_parameters(m, k, t)
    started = time.perf_counter()
    logger.info(f"Closure search on (m={m}, k={k}, t={t})")

    universe = get_universe(m, k)
    index = get_index(m, k, t)
    optimum = 0
    partners: Set[int] = set()
    for mask in closed_families(m, k, t, cap):
        if not mask:
            continue
        first = index.gamma_mask(mask)
        if not first:
            continue
        value = first.bit_count() + mask.bit_count()
        if value > optimum:
            optimum = value
            partners = {mask}
        elif value == optimum:
            partners.add(mask)

    report = _sum_report(m, k, t, "closure", optimum)
    _finish_report(report, _pairs_from_partners(universe, index, partners), predicted_optima(m, k, t))
    report.elapsed_ms = (time.perf_counter() - started) * 1000
    logger.info(f"Closure optimum {optimum} at (m={m}, k={k}, t={t}) in {report.elapsed_ms:.1f} ms")
    return report


def max_sum(
    m: int,
    k: int,
    t: int,
    engine: str = "closure",
    threads: Optional[int] = None,
    prune: bool = True,
    raw_witnesses: bool = False,
) -> SearchReport:
    """Dispatch to one engine, or run both and cross-check them"""
    if engine not in ENGINES:
        raise DomainError(f"Unknown engine {engine!r}; choose one of {', '.join(ENGINES)}")
    if engine == "brute":
        return max_sum_bruteforce(m, k, t, prune=prune, threads=threads, raw_witnesses=raw_witnesses)
    if engine == "closure":
        return max_sum_closure(m, k, t)

    brute = max_sum_bruteforce(m, k, t, prune=prune, threads=threads, raw_witnesses=raw_witnesses)
    lattice = max_sum_closure(m, k, t)
    combined = brute.model_copy(update={
        "engine": "both",
        "elapsed_ms": brute.elapsed_ms + lattice.elapsed_ms,
    })
    if brute.optimum != lattice.optimum or brute.classes != lattice.classes:
        note = (
            f"brute optimum {brute.optimum} with {len(brute.classes)} classes, "
            f"closure optimum {lattice.optimum} with {len(lattice.classes)} classes"
        )
        logger.error(f"Engine disagreement at (m={m}, k={k}, t={t}): {note}")
        combined.verdict = Verdict(status="engine_disagreement", note=note)
    return combined


def _max_cliques(neighbors: Sequence[int], full_mask: int) -> Tuple[int, List[int]]:
    """Bron-Kerbosch with pivoting, keeping every clique of maximum size"""
    adjacency = [n & ~(1 << v) for v, n in enumerate(neighbors)]
    best_size = 0
    best: List[int] = []

    def expand(clique: int, size: int, candidates: int, excluded: int) -> None:
        nonlocal best_size, best
        if not candidates and not excluded:
            if size > best_size:
                best_size, best = size, [clique]
            elif size == best_size:
                best.append(clique)
            return
        if size + candidates.bit_count() < best_size:
            return
        pivot = max(iter_bits(candidates | excluded), key=lambda u: (candidates & adjacency[u]).bit_count())
        for v in iter_bits(candidates & ~adjacency[pivot]):
            bit = 1 << v
            expand(clique | bit, size + 1, candidates & adjacency[v], excluded & adjacency[v])
            candidates &= ~bit
            excluded |= bit

    expand(0, 0, full_mask, 0)
    return best_size, best


def max_t_intersecting(m: int, k: int, t: int, budget: Optional[int] = None) -> SearchReport:
    """Largest t-intersecting family via maximum cliques of the compatibility graph"""
    _check_parameters(m, k, t)
    budget = Config.CLIQUE_BUDGET if budget is None else budget
    universe = get_universe(m, k)
    if universe.size > budget:
        raise BudgetExceededError(f"Universe of size {universe.size} exceeds the clique budget {budget}")
    started = time.perf_counter()
    logger.info(f"Maximum clique search on (m={m}, k={k}, t={t})")

    index = get_index(m, k, t)
    size, cliques = _max_cliques(index.neighbors, universe.full_mask)

    applicable = star_hypothesis(m, k) if t == 1 else fgv_hypothesis(m, k, t)
    report = SearchReport(
        m=m, k=k, t=t, engine="clique", objective="t_intersecting",
        optimum=size, num_optimal_pairs=0,
        bound=fgv_bound(m, k, t), bound_applicable=applicable,
    )
    predicted = None
    if t == 1 and m > k + 1:
        star = star_family(m, k, 1)
        predicted = [(star, star)]
    pairs = [(Family(universe, c), Family(universe, c)) for c in cliques]
    _finish_report(report, pairs, predicted)
    report.elapsed_ms = (time.perf_counter() - started) * 1000
    logger.info(f"Maximum t-intersecting size {size} at (m={m}, k={k}, t={t}) in {report.elapsed_ms:.1f} ms")
    return report
