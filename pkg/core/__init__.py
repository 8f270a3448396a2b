from core.canonical import PairCanonicalForm, canonicalize_pair, relabel_family
from core.errors import (
    BudgetExceededError,
    DomainError,
    MultisetError,
    PostconditionError,
    PreconditionError,
)
from core.multisets import (
    Multiset,
    Staircase,
    format_multiset,
    from_staircase,
    intersection,
    intersection_size,
    multichoose,
    parse_multiset,
    support,
    to_staircase,
)
from core.universe import (
    Family,
    Universe,
    family_supports,
    family_to_json,
    format_family,
    get_universe,
    is_cross_t_intersecting,
    is_t_intersecting,
    parse_family,
    rank,
    unrank,
)
