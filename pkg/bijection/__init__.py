from bijection.set_multiset_map import (
    BijectionTable,
    SetFamily,
    colex_rank,
    colex_unrank,
    forward_map,
    get_bijection_table,
    inverse_map,
    is_cross_t_intersecting_sets,
    map_family,
    support_lift,
    unmap_family,
    weak_compositions,
)
