from .assessment import (
    SpecificationAssessment,
    credibilities,
    falsity_discount,
    membership_beliefs,
    specify_evidence,
    specify_partition,
    subset_specific_discount,
)
from .membership import (
    MembershipMasses,
    MembershipRangeError,
    combine_membership,
    falsity,
    membership_frame,
    membership_masses,
)

__all__ = [
    "MembershipMasses",
    "MembershipRangeError",
    "SpecificationAssessment",
    "combine_membership",
    "credibilities",
    "falsity",
    "falsity_discount",
    "membership_beliefs",
    "membership_frame",
    "membership_masses",
    "specify_evidence",
    "specify_partition",
    "subset_specific_discount",
]
