import logging
import math
from collections.abc import Mapping

from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from nonspecific.belief import FocalSet, Frame, MassFunction, TotalConflictError, combine
from nonspecific.belief.frame import MAX_FRAME_SIZE
from nonspecific.config import config
from nonspecific.evidence import PriorCounts

from .existence import Conjunction

logger = logging.getLogger(__name__)


class CountBpa(BaseModel):
    """
    Evidence about how many subsets exist.

    Parameters:
        at_least (dict[int, float]): r mapped to the mass of "at least r subsets exist".
        theta (float): Uncommitted mass.
    """

    model_config = ConfigDict(frozen=True)

    at_least: dict[int, float]
    theta: float

    @model_validator(mode="after")
    def check_total(self) -> Self:
        if any(r < 1 for r in self.at_least):
            msg = "at-least propositions start at one subset"
            raise ValueError(msg)
        if any(not 0.0 <= mass <= 1.0 for mass in (*self.at_least.values(), self.theta)):
            msg = "count masses must lie in [0, 1]"
            raise ValueError(msg)
        total = math.fsum((*self.at_least.values(), self.theta))
        if abs(total - 1.0) > config.TOLERANCE:
            msg = f"count masses sum to {total}, expected 1"
            raise ValueError(msg)
        return self

    @property
    def max_count(self) -> int:
        return max(self.at_least, default=0)


class PosteriorDistribution(BaseModel):
    """
    Probability distribution over the number of events after the evidence.

    Parameters:
        masses (dict[int, float]): Event count i mapped to m*(E_i).
        conflict_k (float): Conflict between the prior and the count evidence.
    """

    model_config = ConfigDict(frozen=True)

    masses: dict[int, float]
    conflict_k: float

    @model_validator(mode="after")
    def check_total(self) -> Self:
        total = math.fsum(self.masses.values())
        if abs(total - 1.0) > config.TOLERANCE:
            msg = f"posterior masses sum to {total}, expected 1"
            raise ValueError(msg)
        return self

    def mass(self, count: int) -> float:
        return self.masses.get(count, 0.0)


def count_bpa(combined: Mapping[Conjunction, float]) -> CountBpa:
    """
    Group the existence combination by the number of subsets in each conjunction.

    Example:
        {{1,2}: 0.3494, {1}: 0.1314, {2}: 0.3774, {}: 0.1418} -> at_least {1: 0.5088, 2: 0.3494}, theta 0.1418
    """
    r_max = max((len(conjunction) for conjunction in combined), default=0)
    grouped: dict[int, list[float]] = {r: [] for r in range(1, r_max + 1)}
    theta = []
    for conjunction, mass in combined.items():
        (grouped[len(conjunction)] if conjunction else theta).append(mass)
    return CountBpa(at_least={r: math.fsum(masses) for r, masses in grouped.items()}, theta=math.fsum(theta))


def posterior(prior: PriorCounts, cb: CountBpa) -> PosteriorDistribution:
    """
    Combine the prior over the number of events with the count bpa.

    "At least j" contradicts every count below j, so k = sum_i m(E_i) * sum_{j > i} m(at least j)
    and m*(E_i) = m(E_i) * (m(Θ) + sum_{j <= i} m(at least j)) / (1 - k).

    Parameters:
        prior (PriorCounts): Prior over the number of events.
        cb (CountBpa): Count evidence.

    Returns:
        PosteriorDistribution: Posterior over the prior's counts.

    Raises:
        TotalConflictError: If the prior and the count evidence contradict completely.
    """
    conflict_terms = []
    unnormalized = {}
    for count, mass in prior.masses.items():
        conflict_terms.extend(mass * at_least for j, at_least in cb.at_least.items() if j > count)
        supporting = math.fsum([cb.theta, *(at_least for j, at_least in cb.at_least.items() if j <= count)])
        unnormalized[count] = mass * supporting
    k = min(max(math.fsum(conflict_terms), 0.0), 1.0)
    if 1.0 - k <= config.TOLERANCE:
        raise TotalConflictError("posterior domain combination")
    logger.debug("Posterior conflict %.6f", k)
    # Normalized by the agreeing mass, which is 1 - k.
    agreement = math.fsum(unnormalized.values())
    masses = {count: value / agreement for count, value in unnormalized.items()}
    return PosteriorDistribution(masses=masses, conflict_k=k)


def counts_frame(r_max: int) -> Frame:
    """The frame E_0..E_rmax of possible numbers of events."""
    return Frame(labels=tuple(f"E{count}" for count in range(r_max + 1)))


def combination_fits(prior: PriorCounts, cb: CountBpa) -> bool:
    """Whether the counts frame E_0..E_rmax of `posterior_by_combination` fits in a belief frame."""
    return max(prior.max_count, cb.max_count) + 1 <= MAX_FRAME_SIZE


def posterior_by_combination(prior: PriorCounts, cb: CountBpa) -> PosteriorDistribution:
    """
    The same posterior through plain Dempster combination over the counts frame, as a cross-check.

    The prior puts its masses on singletons E_i; "at least j" is the focal set {E_j, ..., E_rmax}.
    """
    r_max = max(prior.max_count, cb.max_count)
    frame = counts_frame(r_max)
    singletons = {frozenset({count}): mass for count, mass in prior.masses.items()}
    prior_bpa = MassFunction(frame=frame, assignments=singletons)

    assignments: dict[FocalSet, float] = {frame.theta: cb.theta}
    for j, mass in cb.at_least.items():
        focal = frozenset(range(j, r_max + 1))
        assignments[focal] = assignments.get(focal, 0.0) + mass
    count_evidence = MassFunction(frame=frame, assignments=assignments)

    combined, k = combine(prior_bpa, count_evidence)
    return PosteriorDistribution(
        masses={count: combined.mass(frozenset({count})) for count in prior.masses},
        conflict_k=k,
    )
