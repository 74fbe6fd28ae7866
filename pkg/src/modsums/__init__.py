"""Extremal counts of subset sums and signed sums of reduced residues mod q."""
from .core import (
    BoundReport,
    Configuration,
    Method,
    NotReducedError,
    ResidueSet,
    SumDistribution,
    binom,
    corollary2_bound,
    corollary3_bound,
    count_in_set,
    middle_window,
    mod_binomial,
    signed_sum_distribution,
    subset_sum_distribution,
    theorem1_bound,
)
from .extremal import ExtremalInstance, allones_extremal, corollary2_extremal, split_extremal
from .structures import (
    IntervalSumSet,
    Structure,
    StructurePartition,
    build_partition,
    format_partition,
    lemma_shift_check,
    parse_partition,
    partition_bound,
    sum_set_shape,
    verify_partition,
)
from .verify import (
    SweepResult,
    UniformityReport,
    brute_count,
    exhaustive_max,
    exhaustive_min_class,
    exhaustive_signed_max,
    uniformity_report,
)

__version__ = "0.1.0"
