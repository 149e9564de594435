from .model import (
    Evidence,
    EvidenceNotFoundError,
    JointProposition,
    MetaconflictAssessment,
    Partition,
    PriorCounts,
    SubsetConflict,
    domain_conflict,
    metaconflict,
    metaconflict_value,
    subset_conflict,
)

__all__ = [
    "Evidence",
    "EvidenceNotFoundError",
    "JointProposition",
    "MetaconflictAssessment",
    "Partition",
    "PriorCounts",
    "SubsetConflict",
    "domain_conflict",
    "metaconflict",
    "metaconflict_value",
    "subset_conflict",
]
