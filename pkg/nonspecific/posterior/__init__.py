from .domain import (
    CountBpa,
    PosteriorDistribution,
    combination_fits,
    count_bpa,
    counts_frame,
    posterior,
    posterior_by_combination,
)
from .existence import (
    Conjunction,
    ExpansionLimitError,
    SubsetExistence,
    build_existence,
    combine_existence,
    emptiness_alpha,
    subset_action,
    subset_existence,
)

__all__ = [
    "Conjunction",
    "CountBpa",
    "ExpansionLimitError",
    "PosteriorDistribution",
    "SubsetExistence",
    "build_existence",
    "combination_fits",
    "combine_existence",
    "count_bpa",
    "counts_frame",
    "emptiness_alpha",
    "posterior",
    "posterior_by_combination",
    "subset_action",
    "subset_existence",
]
