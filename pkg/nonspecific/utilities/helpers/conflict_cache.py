import logging
from collections.abc import Sequence

from lru import LRU

from nonspecific.config import config
from nonspecific.evidence import Evidence, subset_conflict


class ConflictCache:
    """
    A bounded memo of subset conflicts, keyed by the set of evidence ids in the subset.

    A cache must only be shared between partitions of the same evidence collection,
    since evidence ids are the only thing it looks at.

    Attributes:
        conflicts (LRU):
            A lru dictionary mapping frozensets of evidence ids to their conflict.
        hits (int):
            Number of lookups answered from the cache.
        misses (int):
            Number of conflicts actually computed.
    """

    logger = logging.getLogger(__name__)

    def __init__(self, size: int | None = None) -> None:
        self.conflicts = LRU(size or config.CONFLICT_CACHE_SIZE)
        self.hits = 0
        self.misses = 0

    def __call__(self, subset: Sequence[Evidence]) -> float:
        """
        Return the conflict of `subset`, computing it on a miss.

        Parameters:
            subset (Sequence[Evidence]): Non-empty collection of evidence.

        Returns:
            float: The subset conflict c_i.
        """
        key = frozenset(item.id for item in subset)
        cached = self.conflicts.get(key)
        if cached is not None:
            self.hits += 1
            return cached

        self.misses += 1
        value = subset_conflict(subset)
        self.conflicts[key] = value
        return value

    def log_stats(self) -> None:
        self.logger.debug("Conflict cache: %d hits, %d misses", self.hits, self.misses)
