from .frame import THETA_LABEL, FocalSet, Frame, UnknownLabelError
from .mass import (
    DiscountRangeError,
    FocalRangeError,
    FrameMismatchError,
    MassFunction,
    Proposition,
    TotalConflictError,
    belief,
    combine,
    combine_all,
    conflict_of,
    cross_conflict,
    discount,
    enumerated_conflict,
    plausibility,
    sequential_conflict,
)

__all__ = [
    "THETA_LABEL",
    "DiscountRangeError",
    "FocalRangeError",
    "FocalSet",
    "Frame",
    "FrameMismatchError",
    "MassFunction",
    "Proposition",
    "TotalConflictError",
    "UnknownLabelError",
    "belief",
    "combine",
    "combine_all",
    "conflict_of",
    "cross_conflict",
    "discount",
    "enumerated_conflict",
    "plausibility",
    "sequential_conflict",
]
