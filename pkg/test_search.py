"""Γ operator, search engines, verdicts and the kernel pipeline."""

import multiprocessing
from math import comb

import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from bounds.extremal_bounds import hm_pair, star_family
from compression.down_compression import blocked_mask
from core.canonical import canonicalize_pair, relabel_family
from core.errors import BudgetExceededError, DomainError, PreconditionError
from core.universe import Family, families_of, get_universe, is_cross_t_intersecting
from search.compatibility import closed_families, closure, gamma, get_index, is_sum_maximal
from search.engines import _Incumbent, max_sum, max_sum_bruteforce, max_sum_closure, max_t_intersecting
from search.kernels import random_cross_pair, verify_kernel_pipeline
from search.report import ClassRecord, SearchReport, Verdict, classify_and_verify

# every (m, k, t) whose universe has at most 20 members, with k capped at 10 on the m <= 2 lines
EQUIVALENCE_CASES = [
    (m, k, t)
    for m in range(1, 21)
    for k in range(1, 11)
    if comb(m + k - 1, k) <= 20
    for t in range(1, k + 1)
]


def class_key(record: ClassRecord):
    return (record.first, record.second)


def test_index_is_symmetric():
    index = get_index(4, 3, 2)
    assert (index.compatible == index.compatible.T).all()
    for a, mask in enumerate(index.neighbors):
        for b in range(index.universe.size):
            assert bool(mask >> b & 1) == bool(index.neighbors[b] >> a & 1)


def test_gamma_examples(u32):
    (doubles, pair_12) = families_of(u32, [[1, 1]], [[1, 2]])
    assert gamma(doubles, 1) == star_family(3, 2, 1)
    assert gamma(pair_12, 1) == families_of(u32, [[1, 1], [1, 2], [1, 3], [2, 2], [2, 3]])[0]
    assert not gamma(Family.full(u32), 1)
    assert gamma(Family(u32), 1) == Family.full(u32)


def test_closure_examples(u32):
    (pair_12,) = families_of(u32, [[1, 2]])
    assert closure(pair_12, 1) == pair_12
    star = star_family(3, 2, 1)
    assert closure(star, 1) == star
    assert closure(Family(u32), 1) == gamma(Family.full(u32), 1)


@settings(max_examples=60)
@given(st.integers(0, (1 << 15) - 1), st.integers(0, (1 << 15) - 1), st.integers(1, 2))
def test_gamma_is_a_galois_connection(a, b, t):
    universe = get_universe(5, 2)
    A, B = Family(universe, a), Family(universe, b)
    both = Family(universe, a | b)
    assert gamma(both, t).mask & ~gamma(A, t).mask == 0
    assert gamma(gamma(gamma(A, t), t), t) == gamma(A, t)
    assert closure(A, t).mask & A.mask == A.mask
    assert is_cross_t_intersecting(A, B, t) == (B.mask & ~gamma(A, t).mask == 0)
    assert is_cross_t_intersecting(A, B, t) == (A.mask & ~gamma(B, t).mask == 0)


def test_closed_families_are_closed():
    universe = get_universe(3, 3)
    index = get_index(3, 3, 2)
    masks = closed_families(3, 3, 2)
    assert universe.full_mask in masks
    for mask in masks:
        assert index.gamma_mask(index.gamma_mask(mask)) == mask


def test_closed_families_cap():
    with pytest.raises(BudgetExceededError):
        closed_families(4, 3, 1, cap=3)


def test_sum_maximal_pairs(u32):
    assert is_sum_maximal(*hm_pair(3, 2, 1), 1)
    star = star_family(3, 2, 1)
    assert is_sum_maximal(star, star, 1)
    (doubles,) = families_of(u32, [[1, 1]])
    assert not is_sum_maximal(doubles, star, 1)
    assert not is_sum_maximal(Family(u32), Family.full(u32), 1)


@pytest.mark.parametrize("engine", ["brute", "closure"])
def test_sporadic_case_surfaces_extra_class(engine, single_process):
    report = max_sum(3, 2, 1, engine=engine)
    assert report.optimum == 6
    assert report.bound == 6 and report.bound_applicable
    assert len(report.classes) == 4
    assert report.verdict.status == "extra_classes"
    assert report.verdict.agreed == 3
    (extra,) = report.verdict.extra
    assert sorted([len(extra.first), len(extra.second)]) == [2, 4]


def test_both_engines_report_together(single_process):
    report = max_sum(3, 2, 1, engine="both")
    assert report.engine == "both"
    assert report.optimum == 6
    assert report.verdict.status == "extra_classes"


def test_small_k2_optima(single_process):
    assert max_sum_bruteforce(4, 2, 1).optimum == 8
    report = max_sum_bruteforce(5, 2, 1)
    assert report.optimum == 10
    assert len(report.classes) == 2
    assert report.verdict.status == "match"


def test_hm_pair_is_the_only_optimum(single_process):
    for report in (max_sum_bruteforce(4, 3, 2), max_sum_closure(4, 3, 2)):
        assert report.optimum == 11
        assert report.num_optimal_pairs == 8
        (only,) = report.classes
        assert report.verdict.status == "match"
    expected = canonicalize_pair(*hm_pair(4, 3, 2))
    assert ClassRecord.from_canonical(expected, get_universe(4, 3)) == only


def test_t_equals_k_admits_every_singleton_pair():
    report = max_sum_closure(4, 3, 3)
    assert report.optimum == 2
    assert len(report.classes) == 3
    assert report.verdict.status == "extra_classes"


def test_closure_engine_on_larger_universes():
    report = max_sum_closure(5, 3, 2)
    assert report.optimum == 14
    hm = ClassRecord.from_canonical(canonicalize_pair(*hm_pair(5, 3, 2)), get_universe(5, 3))
    assert hm in report.classes
    report = max_sum_closure(4, 3, 1)
    assert report.optimum == 20
    star = star_family(4, 3, 1)
    assert ClassRecord.from_canonical(canonicalize_pair(star, star), get_universe(4, 3)) in report.classes
    assert report.verdict.status == "extra_classes"


def test_outside_hypothesis_is_exploratory(single_process):
    report = max_sum_bruteforce(3, 3, 2)
    assert not report.bound_applicable
    assert report.verdict.status == "exploratory"
    assert not report.verdict.discrepancy


@pytest.mark.parametrize("m,k,t", EQUIVALENCE_CASES)
def test_engines_agree(m, k, t, single_process):
    brute = max_sum_bruteforce(m, k, t)
    lattice = max_sum_closure(m, k, t)
    assert brute.optimum == lattice.optimum >= 2
    assert brute.num_optimal_pairs == lattice.num_optimal_pairs
    assert sorted(map(class_key, brute.classes)) == sorted(map(class_key, lattice.classes))
    if brute.bound_applicable:
        assert brute.optimum == brute.bound
        assert brute.verdict.status != "bound_mismatch"


@pytest.mark.parametrize("m,k,t", [(3, 2, 1), (4, 2, 1), (3, 3, 2), (2, 5, 3), (6, 2, 1)])
def test_pruning_is_sound(m, k, t, single_process):
    pruned = max_sum_bruteforce(m, k, t, prune=True)
    full = max_sum_bruteforce(m, k, t, prune=False)
    assert pruned.optimum == full.optimum
    assert pruned.classes == full.classes


def test_worker_pool_matches_single_process():
    assert max_sum_bruteforce(4, 2, 1, threads=2).classes == max_sum_bruteforce(4, 2, 1, threads=1).classes


def test_raw_witnesses_are_valid_pairs(single_process):
    report = max_sum_bruteforce(3, 2, 1, raw_witnesses=True)
    assert report.raw_witnesses
    universe = get_universe(3, 2)
    for record in report.raw_witnesses:
        F, G = families_of(universe, record.first, record.second)
        assert F and G and is_cross_t_intersecting(F, G, 1)
        assert len(F) + len(G) == 6


def test_brute_force_budget():
    with pytest.raises(BudgetExceededError):
        max_sum_bruteforce(5, 3, 1)
    with pytest.raises(BudgetExceededError):
        max_t_intersecting(4, 2, 1, budget=5)


def test_bad_parameters():
    with pytest.raises(DomainError):
        max_sum_closure(3, 2, 3)
    with pytest.raises(DomainError):
        max_sum(3, 2, 1, engine="quantum")


def test_report_json_shape(single_process):
    payload = max_sum_bruteforce(3, 2, 1).to_json_dict()
    assert list(payload) == [
        "m", "k", "t", "engine", "objective", "optimum", "num_optimal_pairs",
        "bound", "bound_applicable", "classes", "verdict", "elapsed_ms",
    ]
    assert set(payload["classes"][0]) == {"F", "G"}


def test_classify_marks_bound_mismatch():
    report = SearchReport(m=3, k=2, t=1, engine="brute", objective="sum", optimum=5,
                          num_optimal_pairs=1, bound=6, bound_applicable=True)
    verdict = classify_and_verify(report, [], get_universe(3, 2), [])
    assert verdict.status == "bound_mismatch"
    assert verdict.discrepancy


def test_classify_reports_missing_classes():
    universe = get_universe(3, 2)
    star = star_family(3, 2, 1)
    report = SearchReport(m=3, k=2, t=1, engine="brute", objective="sum", optimum=6,
                          num_optimal_pairs=1, bound=6, bound_applicable=True)
    forms = [canonicalize_pair(star, star)]
    verdict = classify_and_verify(report, forms, universe, [(star, star), hm_pair(3, 2, 1)])
    assert verdict.status == "missing_classes"
    assert verdict.agreed == 1 and len(verdict.missing) == 1


@pytest.mark.parametrize("m,k,t,size", [(3, 2, 1, 3), (4, 2, 1, 4), (4, 3, 2, 4), (4, 3, 1, 10)])
def test_max_t_intersecting(m, k, t, size):
    report = max_t_intersecting(m, k, t)
    assert report.optimum == size == report.bound
    assert report.verdict.status == "match"


def test_unique_star_when_m_exceeds_k_plus_one():
    report = max_t_intersecting(4, 2, 1)
    (only,) = report.classes
    star = star_family(4, 2, 1)
    assert only == ClassRecord.from_canonical(canonicalize_pair(star, star), get_universe(4, 2))


def test_random_cross_pairs_are_valid():
    for seed in range(20):
        F, G = random_cross_pair(5, 3, 2, seed)
        assert F and G
        assert is_cross_t_intersecting(F, G, 2)
    assert random_cross_pair(4, 3, 2, 7) == random_cross_pair(4, 3, 2, 7)


def test_kernel_pipeline_passes():
    report = verify_kernel_pipeline(4, 3, 2, samples=100, seed=11)
    assert report.passes == 100
    assert report.hm_identity
    assert report.ok
    assert report == verify_kernel_pipeline(4, 3, 2, samples=100, seed=11)


def test_kernel_pipeline_refuses_small_ground_set():
    with pytest.raises(PreconditionError):
        verify_kernel_pipeline(3, 3, 1, samples=5)


@pytest.mark.parametrize("m,k", [(3, 2), (4, 3), (6, 2)])
def test_blocked_members_complement_the_t1_neighbors(m, k):
    universe = get_universe(m, k)
    index = get_index(m, k, 1)
    for r in range(universe.size):
        assert universe.full_mask ^ blocked_mask(universe.unrank(r)).mask == index.neighbors[r]


def test_verdict_rejects_unknown_status():
    with pytest.raises(ValidationError):
        Verdict(status="bogus")
    assert Verdict(status="exploratory").status == "exploratory"


def test_shared_incumbent_raises_every_bound():
    shared = multiprocessing.Value("i", 3)
    first = _Incumbent(3, False, shared)
    second = _Incumbent(3, False, shared)
    first.offer(0b1, 0b10, 7)
    assert shared.value == 7
    assert second.bound() == 7
    second.offer(0b1, 0b100, 6)
    assert not second.partners
    second.offer(0b1, 0b100, 7)
    assert second.partners == {0b100}


@pytest.mark.parametrize("m,k,t", [(4, 3, 1), (4, 3, 2), (3, 2, 1)])
def test_worker_pool_finds_every_optimal_pair(m, k, t):
    pooled = max_sum_bruteforce(m, k, t, threads=3)
    alone = max_sum_bruteforce(m, k, t, threads=1)
    assert pooled.optimum == alone.optimum
    assert pooled.num_optimal_pairs == alone.num_optimal_pairs
    assert pooled.classes == alone.classes


@pytest.mark.parametrize("m", [12, 20])
def test_closure_on_wide_ground_sets(m):
    report = max_sum_closure(m, 1, 1)
    assert report.optimum == 2
    assert report.num_optimal_pairs == m
    assert len(report.classes) == 1
    assert report.verdict.status == "match"


def test_unique_star_on_ten_elements():
    report = max_t_intersecting(10, 2, 1)
    assert report.optimum == 10
    (only,) = report.classes
    star = star_family(10, 2, 1)
    assert only == ClassRecord.from_canonical(canonicalize_pair(star, star), get_universe(10, 2))
    assert report.verdict.status == "match"


def test_canonical_form_on_nine_elements():
    universe = get_universe(9, 2)
    F, G = families_of(universe, [[1, 1], [1, 2], [3, 9]], [[1, 3], [2, 9], [1, 1], [5, 5]])
    perm = (4, 7, 0, 2, 8, 1, 6, 3, 5)
    moved = (relabel_family(G, perm), relabel_family(F, perm))
    assert canonicalize_pair(F, G) == canonicalize_pair(*moved)
    other = families_of(universe, [[1, 2], [3, 4], [3, 9]], [[1, 3], [2, 9], [1, 1], [5, 5]])
    assert canonicalize_pair(F, G) != canonicalize_pair(*other)
