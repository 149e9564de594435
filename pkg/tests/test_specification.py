import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonspecific.evidence import Partition, PriorCounts
from nonspecific.specification import (
    MembershipMasses,
    combine_membership,
    credibilities,
    falsity_discount,
    membership_beliefs,
    membership_masses,
    specify_evidence,
    specify_partition,
    subset_specific_discount,
)

from .helpers import BURGLARY_FRAME, BURGLARY_PRIOR, burglary_evidence, burglary_partition

GOLDEN = 5e-4

NOT_IN = {
    "e1": {1: 0.634, 2: 0.0, 3: 1.0},
    "e2": {1: 0.42, 2: 0.56, 3: 1.0},
    "e3": {1: 0.42, 2: 0.54, 3: 1.0},
    "e4": {1: 0.155, 2: 0.0, 3: 1.0},
}
CREDIBILITY = {
    "e1": {1: 0.0981, 2: 0.7321},
    "e2": {1: 0.4310, 2: 0.2480},
    "e3": {1: 0.4182, 2: 0.2632},
    "e4": {1: 0.3870, 2: 0.5420},
}
# Mass on the single action focal set after the subset-specific discount.
PER_SUBSET = {
    "e1": {1: 0.0784, 2: 0.5856},
    "e2": {1: 0.2308, 2: 0.1328},
    "e3": {1: 0.1940, 2: 0.1221},
    "e4": {1: 0.1935, 2: 0.2710},
}


@pytest.mark.parametrize("evidence_id", sorted(NOT_IN))
def test_membership_masses_of_the_burglary_partition(evidence_id: str) -> None:
    masses = membership_masses(burglary_partition(), evidence_id)
    assert masses.in_own is None
    assert masses.not_in == pytest.approx(NOT_IN[evidence_id], abs=GOLDEN)


def test_singleton_whose_removal_lowers_domain_conflict() -> None:
    evidence = burglary_evidence()[:3]
    partition = Partition.from_blocks(evidence, [["e2", "e3"], ["e1"]], BURGLARY_PRIOR)
    masses = membership_masses(partition, "e1")
    assert masses.in_own is None
    assert masses.not_in[2] == pytest.approx(1 / 3)
    assert 3 not in masses.not_in


def test_singleton_whose_removal_raises_domain_conflict() -> None:
    evidence = burglary_evidence()[:3]
    prior = PriorCounts(masses={1: 0.4, 2: 0.6})
    partition = Partition.from_blocks(evidence, [["e2", "e3"], ["e1"]], prior)
    masses = membership_masses(partition, "e1")
    assert masses.in_own == pytest.approx(0.4 / 0.6)
    assert 2 not in masses.not_in
    bel, pls = membership_beliefs(masses)
    assert pls[2] == 1.0
    assert bel[2] == pytest.approx(masses.in_own + (1 - masses.in_own) * masses.not_in[1])
    _, k = combine_membership(masses)
    assert k == 0.0


def test_lone_evidence_in_a_single_subset() -> None:
    evidence = burglary_evidence()[:1]
    masses = membership_masses(Partition.from_blocks(evidence, [["e1"]], PriorCounts(masses={1: 1.0})), "e1")
    assert masses.not_in == {1: 0.0}


def test_zero_denominator_uses_the_limit_value() -> None:
    evidence = burglary_evidence()[1:3]
    partition = Partition.from_blocks(evidence, [["e2", "e3"]], PriorCounts(masses={3: 1.0}))
    masses = membership_masses(partition, "e2")
    assert masses.not_in[2] == 0.0
    assert masses.diagnostics


def test_falsity_of_the_burglary_evidence() -> None:
    partition = burglary_partition()
    falsities = {item.id: combine_membership(membership_masses(partition, item.id))[1] for item in partition.evidence}
    assert falsities == pytest.approx({"e1": 0.0, "e2": 0.2352, "e3": 0.2268, "e4": 0.0}, abs=GOLDEN)


def test_combined_membership_expansion() -> None:
    masses = MembershipMasses(evidence_id="e", own_subset=1, r=2, not_in={1: 0.5, 2: 0.5})
    combined, k = combine_membership(masses)
    assert k == pytest.approx(0.25)
    assert combined is not None
    assert combined.mass(frozenset({1})) == pytest.approx(1 / 3)
    assert combined.mass(frozenset({0})) == pytest.approx(1 / 3)
    assert combined.theta_mass == pytest.approx(1 / 3)


def test_plausibilities_and_credibilities_of_e1() -> None:
    masses = membership_masses(burglary_partition(), "e1")
    bel, pls = membership_beliefs(masses)
    assert pls == pytest.approx({1: 0.366, 2: 1.0, 3: 0.0}, abs=GOLDEN)
    assert set(bel.values()) == {0.0}
    assert credibilities(bel, pls, own_subset=2, r=2) == pytest.approx(CREDIBILITY["e1"], abs=GOLDEN)


def test_in_own_beliefs() -> None:
    masses = MembershipMasses(evidence_id="e", own_subset=1, r=2, not_in={2: 0.0}, in_own=0.6)
    bel, pls = membership_beliefs(masses)
    assert bel[1] == pytest.approx(0.6)
    assert pls == pytest.approx({1: 1.0, 2: 0.4})


def test_full_attribution() -> None:
    assert credibilities({1: 0.0, 2: 0.0}, {1: 1.0, 2: 0.0}, own_subset=1, r=2) == {1: 1.0, 2: 0.0}


def test_falsity_discount() -> None:
    e2, e3 = burglary_evidence()[1:3]
    brown_employee = BURGLARY_FRAME.focal(["brown_employee"])
    assert falsity_discount(e2, 0.2352).mass(brown_employee) == pytest.approx(0.5354, abs=GOLDEN)
    assert falsity_discount(e3, 0.2268).mass(BURGLARY_FRAME.focal(["red"])) == pytest.approx(0.4639, abs=GOLDEN)
    assert falsity_discount(e2, 0.0) == e2.action_bpa()


def test_zero_credibility_gives_a_vacuous_bpa() -> None:
    m = burglary_evidence()[0].action_bpa()
    assert subset_specific_discount(m, {1: 0.0})[1].theta_mass == 1.0


@pytest.mark.parametrize("evidence_id", sorted(CREDIBILITY))
def test_specification_of_the_burglary_evidence(evidence_id: str) -> None:
    assessment = specify_evidence(burglary_partition(), evidence_id)
    assert assessment.credibility == pytest.approx(CREDIBILITY[evidence_id], abs=GOLDEN)
    (focal,) = [focal for focal in assessment.discounted_for_falsity.assignments if focal != BURGLARY_FRAME.theta]
    for index, expected in PER_SUBSET[evidence_id].items():
        bpa = assessment.discounted_per_subset[index]
        assert bpa.mass(focal) == pytest.approx(expected, abs=GOLDEN)
        assert bpa.theta_mass == pytest.approx(1 - expected, abs=GOLDEN)


def test_most_plausible_subsets() -> None:
    assessments = specify_partition(burglary_partition())
    assert {a.evidence_id: a.most_plausible_subset for a in assessments} == {"e2": 1, "e3": 1, "e1": 2, "e4": 2}


@st.composite
def membership_cases(draw: st.DrawFn) -> MembershipMasses:
    r = draw(st.integers(1, 5))
    own = draw(st.integers(1, r))
    unit = st.floats(0.0, 1.0)
    if r > 1 and draw(st.booleans()):
        not_in = {index: draw(unit) for index in range(1, r + 1) if index != own}
        return MembershipMasses(evidence_id="e", own_subset=own, r=r, not_in=not_in, in_own=draw(unit))
    not_in = {index: draw(unit) for index in range(1, r + 1)}
    if draw(st.booleans()):
        not_in[r + 1] = draw(unit)
    return MembershipMasses(evidence_id="e", own_subset=own, r=r, not_in=not_in)


@settings(max_examples=1000, deadline=None)
@given(membership_cases())
def test_credibilities_never_exceed_one(masses: MembershipMasses) -> None:
    bel, pls = membership_beliefs(masses)
    for index in pls:
        assert bel[index] <= pls[index] + 1e-12
    alphas = credibilities(bel, pls, masses.own_subset, masses.r)
    assert sum(alphas.values()) <= 1.0 + 1e-9


@settings(max_examples=300, deadline=None)
@given(membership_cases())
def test_expansion_agrees_with_the_closed_form(masses: MembershipMasses) -> None:
    combined, k = combine_membership(masses)
    if combined is None or 1.0 - k < 1e-3:
        return
    assert sum(combined.assignments.values()) == pytest.approx(1.0, abs=1e-9)
    if masses.in_own is None:
        _, pls = membership_beliefs(masses)
        for index in masses.subsets:
            singleton_complement = frozenset(i - 1 for i in masses.subsets if i != index)
            excluded = sum(mass for focal, mass in combined.assignments.items() if focal <= singleton_complement)
            assert 1.0 - excluded == pytest.approx(pls[index], abs=1e-9)
