from .options import InvalidOptionError, SearchConfig
from .partition_search import (
    CountVerdict,
    EmptySearchSpaceError,
    SearchResult,
    SearchSizeError,
    count_verdicts,
    exhaustive_minimize,
    local_minimize,
    minimize,
    prune_counts,
)

__all__ = [
    "CountVerdict",
    "EmptySearchSpaceError",
    "InvalidOptionError",
    "SearchConfig",
    "SearchResult",
    "SearchSizeError",
    "count_verdicts",
    "exhaustive_minimize",
    "local_minimize",
    "minimize",
    "prune_counts",
]
