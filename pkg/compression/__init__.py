from compression.down_compression import (
    CompressionStep,
    CompressionTrace,
    Kernel,
    blocked_mask,
    composite_shift,
    is_t_kernel,
    kernel_reduce,
    minimal_kernel,
    pair_checksum,
    replay_trace,
    shift_family,
    shift_multiset,
)
