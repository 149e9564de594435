import itertools
import logging
import math
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from nonspecific.belief import MassFunction, TotalConflictError, combine_all, conflict_of
from nonspecific.config import config
from nonspecific.errors import NonspecificError
from nonspecific.specification import MembershipMasses

logger = logging.getLogger(__name__)

Conjunction = frozenset[int]


class ExpansionLimitError(NonspecificError):
    """
    Raised when the existence expansion would need more subsets than allowed.
    """

    def __init__(self, subsets: int, limit: int) -> None:
        super().__init__(
            f"Combining the existence of {subsets} subsets needs 2^{subsets} terms, limit is {limit} subsets",
        )


class SubsetExistence(BaseModel):
    """
    Evidence that a subset stands for a real event.

    Parameters:
        index (int): 1-based subset index.
        mass_exists (float): Support that the subset exists.
        mass_theta (float): The remaining, uncommitted mass.
        conflict (float): Conflict among the per-subset discounted bpas that produced it.
        emptiness_alpha (float): 1 minus the support that the subset is empty.
        discounted_exists (float): mass_exists discounted by emptiness_alpha.
        discounted_theta (float): 1 - discounted_exists.
        combined_action (MassFunction | None): What the subset's evidence says about its event, None on total conflict.
    """

    model_config = ConfigDict(frozen=True)

    index: int
    mass_exists: float
    mass_theta: float
    conflict: float
    emptiness_alpha: float
    discounted_exists: float
    discounted_theta: float
    combined_action: MassFunction | None = None

    @model_validator(mode="after")
    def check_masses(self) -> Self:
        tolerance = config.TOLERANCE
        if abs(self.mass_exists + self.mass_theta - 1.0) > tolerance:
            msg = "existence masses must sum to one"
            raise ValueError(msg)
        if abs(self.discounted_exists + self.discounted_theta - 1.0) > tolerance:
            msg = "discounted existence masses must sum to one"
            raise ValueError(msg)
        for value in (self.mass_exists, self.mass_theta, self.conflict, self.emptiness_alpha, self.discounted_exists):
            if not 0.0 <= value <= 1.0:
                msg = f"existence component {value} outside [0, 1]"
                raise ValueError(msg)
        return self


def subset_existence(i: int, discounted: Sequence[MassFunction]) -> tuple[float, float, float]:
    """
    Support that subset `i` exists, from the bpas discounted for that subset.

    Every piece of evidence with mass off Θ supports the existence of the subset. The uncommitted
    part is prod m(Θ) / (1 - k), k being the conflict of combining all the bpas.

    Parameters:
        i (int): The subset index, for messages.
        discounted (Sequence[MassFunction]): m%%i of every piece of evidence.

    Returns:
        tuple[float, float, float]: mass_exists, mass_theta and the conflict k.

    Raises:
        ValueError: If no bpa is supplied.
        TotalConflictError: If the bpas contradict each other completely.
    """
    if not discounted:
        msg = "subset_existence needs at least one bpa"
        raise ValueError(msg)
    k = conflict_of(discounted)
    if 1.0 - k <= config.TOLERANCE:
        raise TotalConflictError(f"existence of χ{i}")
    mass_theta = min(math.prod(m.theta_mass for m in discounted) / (1.0 - k), 1.0)
    return 1.0 - mass_theta, mass_theta, k


def emptiness_alpha(i: int, memberships: Sequence[MembershipMasses]) -> float:
    """
    Credibility of the existence evidence of subset `i`: one minus the support that it is empty.

    The support for emptiness is the product over all evidence of the mass against that evidence
    being in subset `i`. Evidence alone in a subset j that it supports (`in_own`) contributes
    1 - (1 - m(not in i)) * (1 - m(in j)). A subset whose lone member supports it cannot be empty.

    Example:
        not_in[1] over all evidence 0.42, 0.42, 0.634, 0.155 -> 1 - 0.42 * 0.42 * 0.634 * 0.155 = 0.9826
    """
    factors = []
    for m in memberships:
        if m.in_own is not None:
            if m.own_subset == i:
                return 1.0
            factors.append(1.0 - (1.0 - m.not_in.get(i, 0.0)) * (1.0 - m.in_own))
        else:
            factors.append(m.not_in.get(i, 0.0))
    return min(max(1.0 - math.prod(factors), 0.0), 1.0)


def subset_action(i: int, discounted: Sequence[MassFunction]) -> tuple[MassFunction | None, str | None]:
    """The Dempster combination of the bpas discounted for subset `i`, or None with a note on total conflict."""
    try:
        combined, _ = combine_all(discounted)
    except TotalConflictError:
        note = f"χ{i}: the discounted evidence is totally contradictory, no combined action bpa"
        logger.warning(note)
        return None, note
    return combined, None


def build_existence(
    i: int,
    discounted: Sequence[MassFunction],
    memberships: Sequence[MembershipMasses],
) -> tuple[SubsetExistence, list[str]]:
    """
    Assemble the existence evidence of subset `i`, discounted by its emptiness credibility.

    Returns:
        tuple[SubsetExistence, list[str]]: The existence record and any diagnostics.
    """
    exists, theta, k = subset_existence(i, discounted)
    alpha = emptiness_alpha(i, memberships)
    combined, note = subset_action(i, discounted)
    record = SubsetExistence(
        index=i,
        mass_exists=exists,
        mass_theta=theta,
        conflict=k,
        emptiness_alpha=alpha,
        discounted_exists=alpha * exists,
        discounted_theta=1.0 - alpha * exists,
        combined_action=combined,
    )
    return record, [] if note is None else [note]


def combine_existence(discounted: Sequence[SubsetExistence]) -> dict[Conjunction, float]:
    """
    Combine the discounted existence evidence of all subsets.

    Existence propositions never contradict, so the combination is the plain product expansion:
    each conjunction of subsets gets the product of their discounted support times the product
    of the others' uncommitted mass. The empty conjunction stands for Θ.

    Parameters:
        discounted (Sequence[SubsetExistence]): One record per subset.

    Returns:
        dict[Conjunction, float]: Conjunctions of subset indices mapped to masses summing to one.

    Raises:
        ExpansionLimitError: If there are more subsets than MAX_EXPANSION_SUBSETS.

    Example:
        one subset with (0.7, 0.3) -> {frozenset({1}): 0.7, frozenset(): 0.3}
    """
    limit = config.MAX_EXPANSION_SUBSETS
    if len(discounted) > limit:
        raise ExpansionLimitError(len(discounted), limit)

    combined: dict[Conjunction, float] = {}
    for choice in itertools.product((True, False), repeat=len(discounted)):
        conjunction = frozenset(item.index for item, chosen in zip(discounted, choice, strict=True) if chosen)
        combined[conjunction] = math.prod(
            item.discounted_exists if chosen else item.discounted_theta
            for item, chosen in zip(discounted, choice, strict=True)
        )
    return combined
