import math
from collections.abc import Callable, Iterable, Sequence
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from typing_extensions import Self

from nonspecific.belief import FocalSet, Frame, FrameMismatchError, MassFunction, cross_conflict
from nonspecific.config import config
from nonspecific.errors import NonspecificError

SubsetConflict = Callable[[Sequence["Evidence"]], float]


class EvidenceNotFoundError(NonspecificError):
    """
    Raised when an evidence id is not part of a partition.
    """

    def __init__(self, evidence_id: str) -> None:
        super().__init__(f"Evidence {evidence_id!r} is not in the partition")


class JointProposition(NamedTuple):
    """
    A focal element over events x actions. `events=None` leaves the event unconstrained.

    Two propositions contradict when either their action sets or their event sets are disjoint.
    """

    events: frozenset[int] | None
    action: FocalSet

    def __and__(self, other: "JointProposition") -> "JointProposition":
        if self.events is None:
            events = other.events
        elif other.events is None:
            events = self.events
        else:
            events = self.events & other.events
        return JointProposition(events=events, action=self.action & other.action)

    def __bool__(self) -> bool:
        return bool(self.action) and (self.events is None or bool(self.events))


class Evidence(BaseModel):
    """
    A piece of evidence with an action part and an event part.

    Parameters:
        id (str): Unique token of the evidence.
        frame (Frame): The action frame.
        action (tuple[tuple[FocalSet, float], ...]): Focal sets of the action part with their masses;
            the residual mass sits on the whole joint frame.
        events (frozenset[int]): Events the proposition may refer to.
    """

    model_config = ConfigDict(frozen=True)

    id: str
    frame: Frame
    action: tuple[tuple[FocalSet, float], ...]
    events: frozenset[int]

    @field_validator("id")
    @classmethod
    def non_empty_id(cls, value: str) -> str:
        if not value:
            msg = "evidence id must be non-empty"
            raise ValueError(msg)
        return value

    @field_validator("events")
    @classmethod
    def check_events(cls, value: frozenset[int]) -> frozenset[int]:
        if not value:
            msg = "the event part must name at least one event"
            raise ValueError(msg)
        if min(value) < 1:
            msg = "events are numbered from 1"
            raise ValueError(msg)
        return value

    @model_validator(mode="after")
    def check_action(self) -> Self:
        tolerance = config.TOLERANCE
        for focal, mass in self.action:
            if not focal or not self.frame.contains(focal):
                msg = f"action focal set {sorted(focal)} is empty or outside the frame"
                raise ValueError(msg)
            if not 0.0 <= mass <= 1.0:
                msg = f"action mass {mass} outside [0, 1]"
                raise ValueError(msg)
        if math.fsum(mass for _, mass in self.action) > 1.0 + tolerance:
            msg = "action masses exceed one"
            raise ValueError(msg)
        return self

    @property
    def theta_mass(self) -> float:
        return max(0.0, 1.0 - math.fsum(mass for _, mass in self.action))

    def action_bpa(self) -> MassFunction:
        """The action part as a mass function over the action frame."""
        assignments: dict[FocalSet, float] = {}
        for focal, mass in self.action:
            assignments[focal] = assignments.get(focal, 0.0) + mass
        theta = self.frame.theta
        assignments[theta] = assignments.get(theta, 0.0) + self.theta_mass
        return MassFunction(frame=self.frame, assignments=assignments)

    def propositions(self) -> list[tuple[JointProposition, float]]:
        """Focal elements over events x actions, the residual as the unconstrained element."""
        focal_list = [
            (JointProposition(events=self.events, action=focal), mass) for focal, mass in self.action if mass > 0
        ]
        if self.theta_mass > 0:
            focal_list.append((JointProposition(events=None, action=self.frame.theta), self.theta_mass))
        return focal_list


class PriorCounts(BaseModel):
    """
    A probability function over the number of events, renormalized to sum to exactly one.

    Parameters:
        masses (dict[int, float]): Event count i mapped to m(E_i).
    """

    model_config = ConfigDict(frozen=True)

    masses: dict[int, float]

    @field_validator("masses")
    @classmethod
    def check_probability(cls, value: dict[int, float]) -> dict[int, float]:
        if not value:
            msg = "the prior needs at least one event count"
            raise ValueError(msg)
        for count, mass in value.items():
            if count < 0:
                msg = f"event counts are non-negative, got {count}"
                raise ValueError(msg)
            if not 0.0 <= mass <= 1.0:
                msg = f"prior mass {mass} for {count} events outside [0, 1]"
                raise ValueError(msg)
        total = math.fsum(value.values())
        if abs(total - 1.0) > config.PRIOR_TOLERANCE:
            msg = f"prior masses sum to {total}, expected 1"
            raise ValueError(msg)
        return {count: mass / total for count, mass in sorted(value.items())}

    def mass(self, count: int) -> float:
        return self.masses.get(count, 0.0)

    @property
    def support(self) -> list[int]:
        return [count for count, mass in self.masses.items() if mass > 0]

    @property
    def max_count(self) -> int:
        return max(self.masses)


class Partition(BaseModel):
    """
    An assignment of evidence into disjoint non-empty subsets, together with the prior over counts.

    Parameters:
        subsets (tuple[tuple[Evidence, ...], ...]): The subsets, referred to as 1..r.
        prior (PriorCounts): Prior over the number of events.
    """

    model_config = ConfigDict(frozen=True)

    subsets: tuple[tuple[Evidence, ...], ...]
    prior: PriorCounts

    @field_validator("subsets")
    @classmethod
    def check_subsets(cls, value: tuple[tuple[Evidence, ...], ...]) -> tuple[tuple[Evidence, ...], ...]:
        if not value:
            msg = "a partition has at least one subset"
            raise ValueError(msg)
        if any(not subset for subset in value):
            msg = "subsets must be non-empty"
            raise ValueError(msg)
        ids = [evidence.id for subset in value for evidence in subset]
        if len(set(ids)) != len(ids):
            msg = "every evidence item belongs to exactly one subset"
            raise ValueError(msg)
        return value

    @classmethod
    def from_blocks(
        cls,
        evidence: Iterable[Evidence],
        blocks: Iterable[Iterable[str]],
        prior: PriorCounts,
    ) -> "Partition":
        """
        Build a partition from blocks of evidence ids.

        Example:
            Partition.from_blocks(items, [["e2", "e3"], ["e1", "e4"]], prior)
        """
        by_id = {item.id: item for item in evidence}
        subsets = []
        for block in blocks:
            try:
                subsets.append(tuple(by_id.pop(evidence_id) for evidence_id in block))
            except KeyError as exc:
                raise EvidenceNotFoundError(str(exc.args[0])) from exc
        if by_id:
            msg = f"evidence not assigned to any subset: {sorted(by_id)}"
            raise ValueError(msg)
        return cls(subsets=tuple(subsets), prior=prior)

    @property
    def r(self) -> int:
        return len(self.subsets)

    @property
    def evidence(self) -> list[Evidence]:
        return [item for subset in self.subsets for item in subset]

    def block_ids(self) -> list[list[str]]:
        return [[item.id for item in subset] for subset in self.subsets]

    def subset_of(self, evidence_id: str) -> int:
        """
        The 1-based index of the subset holding `evidence_id`.

        Raises:
            EvidenceNotFoundError: If no subset holds it.
        """
        for index, subset in enumerate(self.subsets, start=1):
            if any(item.id == evidence_id for item in subset):
                return index
        raise EvidenceNotFoundError(evidence_id)

    def get(self, evidence_id: str) -> Evidence:
        for item in self.evidence:
            if item.id == evidence_id:
                return item
        raise EvidenceNotFoundError(evidence_id)


class MetaconflictAssessment(BaseModel):
    """
    The metaconflict of a partition and its components.

    Parameters:
        c0 (float): Domain conflict between the number of subsets and the prior.
        subset_conflicts (tuple[float, ...]): Conflict c_i within each subset.
        mcf (float): 1 - (1 - c0) * prod(1 - c_i).
        pls_adp (float): Plausibility of an adequate partition, 1 - mcf.
    """

    model_config = ConfigDict(frozen=True)

    c0: float
    subset_conflicts: tuple[float, ...]
    mcf: float
    pls_adp: float

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        for value in (self.c0, self.mcf, self.pls_adp, *self.subset_conflicts):
            if not 0.0 <= value <= 1.0:
                msg = f"metaconflict component {value} outside [0, 1]"
                raise ValueError(msg)
        return self


def subset_conflict(subset: Sequence[Evidence]) -> float:
    """
    Conflict c_i within a subset of evidence.

    A focal selection conflicts when its action sets or its event parts have an empty intersection.

    Parameters:
        subset (Sequence[Evidence]): Non-empty collection of evidence.

    Returns:
        float: The conflict, in [0, 1].

    Raises:
        ValueError: If the subset is empty.
        FrameMismatchError: If the evidence uses different action frames.
    """
    if not subset:
        msg = "subset_conflict needs at least one piece of evidence"
        raise ValueError(msg)
    for item in subset[1:]:
        if item.frame != subset[0].frame:
            raise FrameMismatchError(subset[0].frame, item.frame)
    return cross_conflict([item.propositions() for item in subset])


def domain_conflict(r: int, prior: PriorCounts) -> float:
    """c_0 = sum of m(E_i) over i != r, that is 1 - m(E_r)."""
    if r < 1:
        msg = f"a partition has at least one subset, got r={r}"
        raise ValueError(msg)
    return min(max(1.0 - prior.mass(r), 0.0), 1.0)


def metaconflict_value(c0: float, conflicts: Iterable[float]) -> float:
    return 1.0 - (1.0 - c0) * math.prod(1.0 - conflict for conflict in conflicts)


def metaconflict(p: Partition, conflict: SubsetConflict = subset_conflict) -> MetaconflictAssessment:
    """
    Evaluate the metaconflict criterion of a partition.

    Parameters:
        p (Partition): The partition.
        conflict (SubsetConflict): Subset conflict evaluator, memoised by the search.

    Returns:
        MetaconflictAssessment: c0, every c_i, Mcf and Pls(AdP).
    """
    c0 = domain_conflict(p.r, p.prior)
    conflicts = tuple(conflict(subset) for subset in p.subsets)
    mcf = min(max(metaconflict_value(c0, conflicts), 0.0), 1.0)
    return MetaconflictAssessment(c0=c0, subset_conflicts=conflicts, mcf=mcf, pls_adp=1.0 - mcf)
