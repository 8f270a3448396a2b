from search.compatibility import (
    CompatibilityIndex,
    closed_families,
    closure,
    gamma,
    get_index,
    is_sum_maximal,
)
from search.engines import (
    ENGINES,
    max_sum,
    max_sum_bruteforce,
    max_sum_closure,
    max_t_intersecting,
)
from search.kernels import KernelPipelineReport, random_cross_pair, verify_kernel_pipeline
from search.report import ClassRecord, SearchReport, Verdict, classify_and_verify, classify_pairs
