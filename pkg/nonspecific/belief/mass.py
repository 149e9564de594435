import itertools
import logging
import math
from collections.abc import Hashable, Iterable, Mapping, Sequence
from typing import Protocol, TypeVar

from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from typing_extensions import Self

from nonspecific.config import config
from nonspecific.errors import NonspecificError

from .frame import FocalSet, Frame

logger = logging.getLogger(__name__)


class Proposition(Hashable, Protocol):
    """Anything that intersects with `&` and is falsy when empty."""

    def __and__(self, other: Self, /) -> Self: ...

    def __bool__(self) -> bool: ...


P = TypeVar("P", bound=Proposition)
FocalList = Sequence[tuple[P, float]]


class FrameMismatchError(NonspecificError):
    """
    Raised when mass functions over different frames are combined.
    """

    def __init__(self, left: Frame, right: Frame) -> None:
        super().__init__(f"Frames differ: {left.labels} vs {right.labels}")


class TotalConflictError(NonspecificError):
    """
    Raised when a Dempster combination is totally contradictory (conflict of one).
    """

    def __init__(self, what: str = "combination") -> None:
        super().__init__(f"Total conflict in {what}: the evidence contradicts itself completely")


class DiscountRangeError(NonspecificError):
    """
    Raised when a discount factor lies outside [0, 1].
    """

    def __init__(self, alpha: float) -> None:
        super().__init__(f"Discount factor must lie in [0, 1], got {alpha}")


class FocalRangeError(NonspecificError):
    """
    Raised when a focal set references hypotheses outside the frame.
    """

    def __init__(self, focal: FocalSet, frame: Frame) -> None:
        super().__init__(f"Focal set {sorted(focal)} is not a subset of a frame of size {frame.size}")


class MassFunction(BaseModel):
    """
    A normalized basic probability assignment over a frame.

    Zero masses are dropped on construction, so every key is a focal element.

    Parameters:
        frame (Frame): The frame of discernment.
        assignments (dict[FocalSet, float]): Focal sets mapped to their masses, summing to one.
    """

    model_config = ConfigDict(frozen=True)

    frame: Frame
    assignments: dict[FocalSet, float]

    @field_validator("assignments")
    @classmethod
    def check_masses(cls, value: dict[FocalSet, float]) -> dict[FocalSet, float]:
        tolerance = config.TOLERANCE
        for focal, mass in value.items():
            if not focal:
                msg = "the empty set cannot carry mass"
                raise ValueError(msg)
            if not -tolerance <= mass <= 1 + tolerance:
                msg = f"mass {mass} outside [0, 1]"
                raise ValueError(msg)
        return {focal: min(max(mass, 0.0), 1.0) for focal, mass in value.items() if mass > 0}

    @model_validator(mode="after")
    def check_normalized(self) -> Self:
        for focal in self.assignments:
            if not self.frame.contains(focal):
                raise FocalRangeError(focal, self.frame)
        total = math.fsum(self.assignments.values())
        if abs(total - 1.0) > config.TOLERANCE:
            msg = f"masses sum to {total}, expected 1"
            raise ValueError(msg)
        return self

    @classmethod
    def vacuous(cls, frame: Frame) -> "MassFunction":
        """All mass on the whole frame."""
        return cls(frame=frame, assignments={frame.theta: 1.0})

    @classmethod
    def simple(cls, frame: Frame, focal: FocalSet, mass: float) -> "MassFunction":
        """
        A simple support function: `mass` on `focal`, the remainder on the whole frame.
        """
        if focal == frame.theta:
            return cls.vacuous(frame)
        return cls(frame=frame, assignments={focal: mass, frame.theta: 1.0 - mass})

    @classmethod
    def from_labels(cls, frame: Frame, items: Iterable[tuple[Iterable[str], float]]) -> "MassFunction":
        """
        Build a mass function from labelled focal sets; whatever is left goes to the whole frame.

        Parameters:
            frame (Frame): The frame.
            items (Iterable[tuple[Iterable[str], float]]): (labels, mass) pairs.

        Example:
            MassFunction.from_labels(frame, [(["red"], 0.6)]) -> m({red})=0.6, m(Θ)=0.4
        """
        assignments: dict[FocalSet, float] = {}
        for labels, mass in items:
            focal = frame.focal(labels)
            assignments[focal] = assignments.get(focal, 0.0) + mass
        residual = 1.0 - math.fsum(assignments.values())
        if residual > 0:
            assignments[frame.theta] = assignments.get(frame.theta, 0.0) + residual
        return cls(frame=frame, assignments=assignments)

    @property
    def theta_mass(self) -> float:
        return self.assignments.get(self.frame.theta, 0.0)

    def mass(self, focal: FocalSet) -> float:
        return self.assignments.get(focal, 0.0)

    def focal_list(self) -> list[tuple[FocalSet, float]]:
        return list(self.assignments.items())

    def to_labels(self) -> dict[str, float]:
        """Focal sets rendered with frame labels, for reports."""
        return {self.frame.render(focal): mass for focal, mass in self.assignments.items()}


def _dempster_step(left: Mapping[P, float], right: Iterable[tuple[P, float]]) -> tuple[dict[P, float], float]:
    """Unnormalized conjunctive combination; returns the agreeing masses and the conflict."""
    right_items = list(right)
    agreed: dict[P, float] = {}
    conflict_terms: list[float] = []
    for focal_a, mass_a in left.items():
        for focal_b, mass_b in right_items:
            meet = focal_a & focal_b
            if meet:
                agreed[meet] = agreed.get(meet, 0.0) + mass_a * mass_b
            else:
                conflict_terms.append(mass_a * mass_b)
    return agreed, math.fsum(conflict_terms)


def _normalize(agreed: Mapping[P, float]) -> dict[P, float]:
    total = math.fsum(agreed.values())
    return {focal: mass / total for focal, mass in agreed.items()}


def enumerated_conflict(focal_lists: Sequence[FocalList[P]]) -> float:
    """
    Conflict as the product mass of every focal selection whose intersection is empty.

    Parameters:
        focal_lists (Sequence[FocalList]): One list of (proposition, mass) pairs per source.

    Returns:
        float: The summed product mass over empty intersections.
    """
    conflict_terms: list[float] = []
    for selection in itertools.product(*focal_lists):
        meet, weight = selection[0]
        for focal, mass in selection[1:]:
            meet &= focal
            weight *= mass
        if not meet:
            conflict_terms.append(weight)
    return math.fsum(conflict_terms)


def sequential_conflict(focal_lists: Sequence[FocalList[P]]) -> float:
    """
    Conflict by pairwise Dempster folding, accumulated as 1 - prod(1 - k_step).
    """
    current: dict[P, float] = {}
    for focal, mass in focal_lists[0]:
        current[focal] = current.get(focal, 0.0) + mass
    agreement = 1.0
    for focal_list in focal_lists[1:]:
        agreed, conflict = _dempster_step(current, focal_list)
        if not agreed:
            return 1.0
        agreement *= 1.0 - conflict
        current = _normalize(agreed)
    return 1.0 - agreement


def cross_conflict(focal_lists: Sequence[FocalList[P]]) -> float:
    """
    Conflict of a collection of bpas given as focal lists.

    The full cross product is enumerated while it stays under the configured limit,
    otherwise the sources are folded sequentially.
    """
    if len(focal_lists) < 2:  # noqa: PLR2004
        return 0.0
    products = math.prod(len(focal_list) for focal_list in focal_lists)
    if products <= config.CONFLICT_ENUMERATION_LIMIT:
        conflict = enumerated_conflict(focal_lists)
    else:
        logger.debug("Folding %d sources sequentially (%d focal products)", len(focal_lists), products)
        conflict = sequential_conflict(focal_lists)
    return min(max(conflict, 0.0), 1.0)


def _check_frames(masses: Sequence[MassFunction]) -> None:
    for other in masses[1:]:
        if other.frame != masses[0].frame:
            raise FrameMismatchError(masses[0].frame, other.frame)


def combine(a: MassFunction, b: MassFunction) -> tuple[MassFunction, float]:
    """
    Combine two mass functions by Dempster's rule.

    Parameters:
        a (MassFunction): First bpa.
        b (MassFunction): Second bpa over the same frame.

    Returns:
        tuple[MassFunction, float]: The normalized combination and the conflict k.

    Raises:
        FrameMismatchError: If the frames differ.
        TotalConflictError: If the conflict is one.
    """
    _check_frames([a, b])
    agreed, conflict = _dempster_step(a.assignments, b.focal_list())
    if not agreed or 1.0 - conflict <= config.TOLERANCE:
        raise TotalConflictError
    return MassFunction(frame=a.frame, assignments=_normalize(agreed)), conflict


def combine_all(masses: Sequence[MassFunction]) -> tuple[MassFunction, float]:
    """
    Combine a non-empty list of mass functions, returning the overall conflict 1 - prod(1 - k_step).

    Raises:
        ValueError: If the list is empty.
        FrameMismatchError: If the frames differ.
        TotalConflictError: If any step is totally contradictory.
    """
    if not masses:
        msg = "combine_all needs at least one mass function"
        raise ValueError(msg)
    _check_frames(masses)
    result = masses[0]
    agreement = 1.0
    for other in masses[1:]:
        result, conflict = combine(result, other)
        agreement *= 1.0 - conflict
    return result, 1.0 - agreement


def conflict_of(masses: Sequence[MassFunction]) -> float:
    """
    Conflict of Dempster's rule over a whole collection, in [0, 1].

    Unlike `combine`, a total contradiction is a legal result here.

    Raises:
        FrameMismatchError: If the frames differ.
    """
    if len(masses) < 2:  # noqa: PLR2004
        return 0.0
    _check_frames(masses)
    return cross_conflict([mass.focal_list() for mass in masses])


def discount(m: MassFunction, alpha: float) -> MassFunction:
    """
    Discount a mass function by the credibility `alpha`.

    Non-Θ masses are scaled by alpha and the remainder moves to Θ.

    Raises:
        DiscountRangeError: If alpha lies outside [0, 1].
    """
    if not 0.0 <= alpha <= 1.0:
        raise DiscountRangeError(alpha)
    theta = m.frame.theta
    assignments = {focal: alpha * mass for focal, mass in m.assignments.items() if focal != theta}
    assignments[theta] = 1.0 - alpha + alpha * m.theta_mass
    return MassFunction(frame=m.frame, assignments=assignments)


def belief(m: MassFunction, a: FocalSet) -> float:
    """Bel(a): the total mass of focal sets contained in `a`."""
    if not m.frame.contains(a):
        raise FocalRangeError(a, m.frame)
    return math.fsum(mass for focal, mass in m.assignments.items() if focal <= a)


def plausibility(m: MassFunction, a: FocalSet) -> float:
    """Pls(a): the total mass of focal sets intersecting `a`."""
    if not m.frame.contains(a):
        raise FocalRangeError(a, m.frame)
    return math.fsum(mass for focal, mass in m.assignments.items() if focal & a)
