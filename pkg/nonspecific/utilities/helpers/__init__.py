from .conflict_cache import ConflictCache
from .data_encoding import DataEncoder, DataValidationError
from .set_partitions import bell_number, blocks_of, restricted_growth_strings

__all__ = [
    "ConflictCache",
    "DataEncoder",
    "DataValidationError",
    "bell_number",
    "blocks_of",
    "restricted_growth_strings",
]
