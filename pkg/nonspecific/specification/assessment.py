import logging
import math
from collections.abc import Mapping

from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from nonspecific.belief import MassFunction, discount
from nonspecific.config import config
from nonspecific.evidence import Evidence, Partition, SubsetConflict, subset_conflict

from .membership import MembershipMasses, combine_membership, falsity, membership_masses

logger = logging.getLogger(__name__)


class SpecificationAssessment(BaseModel):
    """
    What the partition says about one piece of evidence, and the bpas it yields per subset.

    Parameters:
        evidence_id (str): The evidence concerned.
        memberships (MembershipMasses): Its membership masses.
        falsity_k (float): Support that it belongs to no subset, hence is false.
        combined (MassFunction | None): m* over the membership frame, when it could be expanded.
        bel (dict[int, float]): Belief that the evidence is in subset j.
        pls (dict[int, float]): Plausibility that the evidence is in subset j, new subset included.
        credibility (dict[int, float]): Per-subset credibility α_j over the existing subsets.
        discounted_for_falsity (MassFunction): The action part discounted by 1 - falsity_k.
        discounted_per_subset (dict[int, MassFunction]): The falsity-discounted bpa discounted again by α_j.
        most_plausible_subset (int): The subset with the largest plausibility, lowest index on ties.
        diagnostics (tuple[str, ...]): Notes collected along the way.
    """

    model_config = ConfigDict(frozen=True)

    evidence_id: str
    memberships: MembershipMasses
    falsity_k: float
    combined: MassFunction | None
    bel: dict[int, float]
    pls: dict[int, float]
    credibility: dict[int, float]
    discounted_for_falsity: MassFunction
    discounted_per_subset: dict[int, MassFunction]
    most_plausible_subset: int
    diagnostics: tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        tolerance = config.TOLERANCE
        if not 0.0 <= self.falsity_k <= 1.0:
            msg = f"falsity {self.falsity_k} outside [0, 1]"
            raise ValueError(msg)
        for index, plausibility in self.pls.items():
            if not 0.0 <= self.bel.get(index, 0.0) <= plausibility + tolerance <= 1.0 + 2 * tolerance:
                msg = f"belief and plausibility of subset {index} are inconsistent"
                raise ValueError(msg)
        if math.fsum(self.credibility.values()) > 1.0 + tolerance:
            msg = "credibilities add up to more than one"
            raise ValueError(msg)
        return self


def membership_beliefs(m: MembershipMasses) -> tuple[dict[int, float], dict[int, float]]:
    """
    Belief and plausibility that the evidence belongs to each subset.

    Belief is zero everywhere except for a lone evidence whose removal would raise the domain
    conflict; there the own subset gets m(in own) + (1 - m(in own)) * prod m(not in j) and is fully
    plausible, while any other subset k gets (1 - m(in own)) * (1 - m(not in k)).
    Otherwise Pls(k) = (1 - m(not in k)) / (1 - prod_j m(not in j)), and zero when that product is one.

    Parameters:
        m (MembershipMasses): The masses.

    Returns:
        tuple[dict[int, float], dict[int, float]]: bel and pls keyed by subset index.

    Example:
        not_in {1: 0.634, 2: 0, 3: 1} -> pls {1: 0.366, 2: 1, 3: 0}
    """
    subsets = m.subsets
    bel = dict.fromkeys(subsets, 0.0)
    if m.in_own is not None:
        others = [mass for index, mass in m.not_in.items() if index != m.own_subset]
        bel[m.own_subset] = m.in_own + (1.0 - m.in_own) * math.prod(others)
        pls = {
            index: 1.0 if index == m.own_subset else (1.0 - m.in_own) * (1.0 - m.not_in[index]) for index in subsets
        }
        return bel, pls

    k = falsity(m)
    if 1.0 - k <= config.TOLERANCE:
        logger.warning("Evidence %s belongs to no subset (falsity %.6f)", m.evidence_id, k)
        return bel, dict.fromkeys(subsets, 0.0)
    pls = {index: min((1.0 - m.not_in.get(index, 0.0)) / (1.0 - k), 1.0) for index in subsets}
    return bel, pls


def credibilities(
    bel: Mapping[int, float],
    pls: Mapping[int, float],
    own_subset: int,
    r: int,
) -> dict[int, float]:
    """
    Credibility α_j of the evidence as a member of each existing subset j.

    α_j = (1 - Bel(own)) * Pls(j)^2 / sum_k Pls(k), where the sum includes the candidate new subset,
    and the own subset adds Bel(own). All are zero when no subset is plausible.
    """
    own_belief = bel.get(own_subset, 0.0)
    total = math.fsum(pls.values())
    alphas = {}
    for index in range(1, r + 1):
        share = pls.get(index, 0.0) ** 2 / total if total > 0 else 0.0
        alpha = (1.0 - own_belief) * share
        if index == own_subset:
            alpha += own_belief
        alphas[index] = min(max(alpha, 0.0), 1.0)
    return alphas


def falsity_discount(e: Evidence, falsity_k: float) -> MassFunction:
    """The action part of `e` discounted by its credibility as true evidence, 1 - falsity_k."""
    return discount(e.action_bpa(), 1.0 - falsity_k)


def subset_specific_discount(
    discounted_for_falsity: MassFunction,
    credibility: Mapping[int, float],
) -> dict[int, MassFunction]:
    """
    Discount the falsity-discounted bpa once more for every subset.

    Parameters:
        discounted_for_falsity (MassFunction): m% of the evidence.
        credibility (Mapping[int, float]): α_j per subset.

    Returns:
        dict[int, MassFunction]: m%%j per subset j; α_j = 0 gives the vacuous bpa.
    """
    return {index: discount(discounted_for_falsity, alpha) for index, alpha in credibility.items()}


def specify_evidence(p: Partition, q: str, conflict: SubsetConflict = subset_conflict) -> SpecificationAssessment:
    """
    Run the whole specification of one piece of evidence against a partition.

    Parameters:
        p (Partition): The partition.
        q (str): Id of the evidence.
        conflict (SubsetConflict): Subset conflict evaluator.

    Returns:
        SpecificationAssessment: Memberships, falsity, beliefs, credibilities and discounted bpas.

    Raises:
        EvidenceNotFoundError: If `q` is not part of the partition.
    """
    memberships = membership_masses(p, q, conflict)
    combined, k = combine_membership(memberships)
    bel, pls = membership_beliefs(memberships)
    diagnostics = list(memberships.diagnostics)
    if 1.0 - k <= config.TOLERANCE:
        diagnostics.append(f"{q}: falsity is one, the evidence is discounted to nothing")
    elif combined is None:
        diagnostics.append(f"{q}: combined membership bpa skipped, above MAX_MEMBERSHIP_EXPANSION")

    alphas = credibilities(bel, pls, memberships.own_subset, memberships.r)
    m_percent = falsity_discount(p.get(q), k)
    per_subset = subset_specific_discount(m_percent, alphas)
    most_plausible = max(sorted(pls), key=lambda index: pls[index]) if any(pls.values()) else memberships.own_subset

    logger.debug("Evidence %s: falsity %.4f, credibilities %s", q, k, alphas)
    return SpecificationAssessment(
        evidence_id=q,
        memberships=memberships,
        falsity_k=k,
        combined=combined,
        bel=bel,
        pls=pls,
        credibility=alphas,
        discounted_for_falsity=m_percent,
        discounted_per_subset=per_subset,
        most_plausible_subset=most_plausible,
        diagnostics=tuple(diagnostics),
    )


def specify_partition(p: Partition, conflict: SubsetConflict = subset_conflict) -> list[SpecificationAssessment]:
    """Specify every piece of evidence of the partition, in partition order."""
    return [specify_evidence(p, item.id, conflict) for item in p.evidence]
