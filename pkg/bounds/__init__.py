from bounds.extremal_bounds import (
    BoundRecord,
    bound_records,
    fgv_bound,
    hm_pair,
    predicted_optima,
    set_sum_bound,
    star_bound,
    star_family,
    sum_bound,
    sum_hypothesis,
)
