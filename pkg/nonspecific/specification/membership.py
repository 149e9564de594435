import itertools
import logging
import math

from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from nonspecific.belief import FocalSet, Frame, MassFunction
from nonspecific.config import config
from nonspecific.errors import NonspecificError
from nonspecific.evidence import Partition, SubsetConflict, domain_conflict, subset_conflict

logger = logging.getLogger(__name__)


class MembershipRangeError(NonspecificError):
    """
    Raised when a membership mass falls outside [0, 1] by more than the tolerance.
    """

    def __init__(self, evidence_id: str, what: str, value: float) -> None:
        super().__init__(f"Membership mass {what} of evidence {evidence_id!r} is {value}, outside [0, 1]")


class MembershipMasses(BaseModel):
    """
    Metalevel evidence about which subset a piece of evidence belongs to.

    Parameters:
        evidence_id (str): The evidence concerned.
        own_subset (int): 1-based index of the subset holding it.
        r (int): Number of subsets of the partition.
        not_in (dict[int, float]): Subset j mapped to m(e not in subset j); r + 1 is the candidate new subset.
        in_own (float | None): m(e in own subset), only when the evidence is alone and removing its
            subset would raise the domain conflict.
        diagnostics (tuple[str, ...]): Limit conventions applied while computing the masses.
    """

    model_config = ConfigDict(frozen=True)

    evidence_id: str
    own_subset: int
    r: int
    not_in: dict[int, float]
    in_own: float | None = None
    diagnostics: tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_masses(self) -> Self:
        for mass in (*self.not_in.values(), *([] if self.in_own is None else [self.in_own])):
            if not 0.0 <= mass <= 1.0:
                msg = f"membership mass {mass} outside [0, 1]"
                raise ValueError(msg)
        if self.in_own is not None and self.own_subset in self.not_in:
            msg = "a domain-increase singleton carries no mass against its own subset"
            raise ValueError(msg)
        return self

    @property
    def subsets(self) -> list[int]:
        """Every subset index the evidence could be placed in."""
        return sorted({*self.not_in, self.own_subset})


def membership_frame(r: int, with_new_subset: bool = True) -> Frame:  # noqa: FBT001, FBT002
    """The frame χ1..χr, plus χ(r+1) for the candidate new subset."""
    return Frame(labels=tuple(f"χ{index}" for index in range(1, r + (2 if with_new_subset else 1))))


class _Ratio:
    """Evaluates conflict-variation ratios, recording limit conventions for zero denominators."""

    def __init__(self, evidence_id: str) -> None:
        self.evidence_id = evidence_id
        self.diagnostics: list[str] = []

    def __call__(self, what: str, numerator: float, denominator: float) -> float:
        tolerance = config.TOLERANCE
        if denominator <= tolerance:
            value = 1.0 if numerator > tolerance else 0.0
            note = f"{self.evidence_id}: {what} has a zero denominator, limit value {value:g} used"
            logger.warning(note)
            self.diagnostics.append(note)
            return value
        return self.clamp(what, numerator / denominator)

    def clamp(self, what: str, value: float) -> float:
        tolerance = config.TOLERANCE
        if not -tolerance <= value <= 1.0 + tolerance:
            raise MembershipRangeError(self.evidence_id, what, value)
        return min(max(value, 0.0), 1.0)


def membership_masses(p: Partition, q: str, conflict: SubsetConflict = subset_conflict) -> MembershipMasses:
    """
    Derive the membership masses of evidence `q` from single-move conflict variations.

    For evidence sharing its subset with others, the mass against the own subset comes from the
    conflict drop when it is removed, the mass against every other subset from the conflict rise
    when it is inserted there, and the mass against a new subset from the domain conflict rise of
    opening one. For evidence alone in its subset, removing the subset changes the domain conflict
    instead: a decrease testifies against the own subset, an increase in favour of it.

    Parameters:
        p (Partition): The partition.
        q (str): Id of the evidence.
        conflict (SubsetConflict): Subset conflict evaluator.

    Returns:
        MembershipMasses: The masses for `q`.

    Raises:
        EvidenceNotFoundError: If `q` is not part of the partition.
        MembershipRangeError: If a conflict variation has the wrong sign.
    """
    own = p.subset_of(q)
    item = p.get(q)
    r = p.r
    ratio = _Ratio(q)
    conflicts = [conflict(subset) for subset in p.subsets]
    not_in: dict[int, float] = {}
    in_own: float | None = None

    for index, subset in enumerate(p.subsets, start=1):
        if index == own:
            continue
        after = conflict([*subset, item])
        before = conflicts[index - 1]
        not_in[index] = ratio(f"insertion into χ{index}", after - before, 1.0 - before)

    c0 = domain_conflict(r, p.prior)
    own_members = p.subsets[own - 1]
    if len(own_members) > 1:
        remaining = [other for other in own_members if other.id != q]
        before = conflicts[own - 1]
        after = conflict(remaining)
        not_in[own] = ratio(f"removal from χ{own}", before - after, 1.0 - after)
        c0_new = domain_conflict(r + 1, p.prior)
        not_in[r + 1] = ratio(f"new subset χ{r + 1}", max(c0_new - c0, 0.0), 1.0 - c0)
    elif r == 1:
        not_in[own] = 0.0
    else:
        c0_removed = domain_conflict(r - 1, p.prior)
        if c0 > c0_removed:
            not_in[own] = ratio(f"removal of χ{own}", c0 - c0_removed, 1.0 - c0_removed)
        elif c0 < c0_removed:
            in_own = ratio.clamp(f"support for χ{own}", c0 / c0_removed)
        else:
            not_in[own] = 0.0

    return MembershipMasses(
        evidence_id=q,
        own_subset=own,
        r=r,
        not_in=dict(sorted(not_in.items())),
        in_own=in_own,
        diagnostics=tuple(ratio.diagnostics),
    )


def falsity(m: MembershipMasses) -> float:
    """
    Support that the evidence belongs to no subset at all: the product of every mass against
    a subset, or zero when the evidence testifies for its own subset.
    """
    if m.in_own is not None:
        return 0.0
    return math.prod(m.not_in.values())


def combine_membership(m: MembershipMasses) -> tuple[MassFunction | None, float]:
    """
    Combine the membership masses of one piece of evidence by Dempster's rule.

    Each mass against subset j is a simple support function on "every subset but j" over the
    membership frame; `in_own` supports the own subset alone. The conflict is the mass of the
    proposition that the evidence belongs nowhere.

    Parameters:
        m (MembershipMasses): The masses.

    Returns:
        tuple[MassFunction | None, float]: The combined bpa m* over the membership frame, None when
            the conflict is one or there are more factors than MAX_MEMBERSHIP_EXPANSION, and the conflict k.

    Example:
        not_in {1: 0.5, 2: 0.5} -> m*({χ2}) = m*({χ1}) = m*(Θ) = 1/3, k = 0.25
    """
    k = falsity(m)
    with_new = m.r + 1 in m.not_in
    frame = membership_frame(m.r, with_new_subset=with_new)
    theta = frame.theta

    factors: list[list[tuple[FocalSet, float]]] = [
        [(theta - {index - 1}, mass), (theta, 1.0 - mass)] for index, mass in m.not_in.items()
    ]
    if m.in_own is not None:
        factors.append([(frozenset({m.own_subset - 1}), m.in_own), (theta, 1.0 - m.in_own)])

    if len(factors) > config.MAX_MEMBERSHIP_EXPANSION:
        logger.info("Membership expansion of %s skipped: %d factors", m.evidence_id, len(factors))
        return None, k
    if 1.0 - k <= config.TOLERANCE:
        return None, k

    agreed: dict[FocalSet, float] = {}
    for selection in itertools.product(*factors):
        focal = theta
        weight = 1.0
        for part, mass in selection:
            focal &= part
            weight *= mass
        if focal and weight > 0:
            agreed[focal] = agreed.get(focal, 0.0) + weight

    total = math.fsum(agreed.values())
    return MassFunction(frame=frame, assignments={focal: mass / total for focal, mass in agreed.items()}), k
