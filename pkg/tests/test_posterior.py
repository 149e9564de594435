import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nonspecific.belief import MassFunction, TotalConflictError
from nonspecific.config import config
from nonspecific.evidence import PriorCounts
from nonspecific.posterior import (
    CountBpa,
    ExpansionLimitError,
    SubsetExistence,
    build_existence,
    combine_existence,
    count_bpa,
    emptiness_alpha,
    posterior,
    posterior_by_combination,
    subset_existence,
)
from nonspecific.specification import MembershipMasses, specify_partition

from .helpers import BURGLARY_FRAME, BURGLARY_PRIOR, burglary_partition

GOLDEN = 5e-4


def existence(index: int, exists: float) -> SubsetExistence:
    return SubsetExistence(
        index=index,
        mass_exists=exists,
        mass_theta=1.0 - exists,
        conflict=0.0,
        emptiness_alpha=1.0,
        discounted_exists=exists,
        discounted_theta=1.0 - exists,
    )


@pytest.fixture(scope="module")
def burglary_existences() -> list[SubsetExistence]:
    assessments = specify_partition(burglary_partition())
    memberships = [a.memberships for a in assessments]
    return [
        build_existence(index, [a.discounted_per_subset[index] for a in assessments], memberships)[0]
        for index in (1, 2)
    ]


def test_subset_existence_of_the_burglary_subsets(burglary_existences: list[SubsetExistence]) -> None:
    first, second = burglary_existences
    assert (first.mass_exists, first.mass_theta) == pytest.approx((0.4893, 0.5107), abs=GOLDEN)
    assert (second.mass_exists, second.mass_theta) == pytest.approx((0.7268, 0.2732), abs=GOLDEN)
    assert first.emptiness_alpha == pytest.approx(0.9826, abs=GOLDEN)
    assert second.emptiness_alpha == pytest.approx(1.0)


def test_subset_events_are_combined(burglary_existences: list[SubsetExistence]) -> None:
    for record in burglary_existences:
        assert record.combined_action is not None
        assert record.combined_action.frame == BURGLARY_FRAME


def test_vacuous_evidence_supports_nothing() -> None:
    vacuous = MassFunction.vacuous(BURGLARY_FRAME)
    assert subset_existence(1, [vacuous, vacuous]) == (0.0, 1.0, 0.0)
    with pytest.raises(ValueError, match="at least one"):
        subset_existence(1, [])


def test_totally_contradictory_existence_evidence() -> None:
    red = MassFunction(frame=BURGLARY_FRAME, assignments={BURGLARY_FRAME.focal(["red"]): 1.0})
    brown = MassFunction(frame=BURGLARY_FRAME, assignments={BURGLARY_FRAME.focal(["brown_employee"]): 1.0})
    with pytest.raises(TotalConflictError):
        subset_existence(1, [red, brown])


def test_emptiness_alpha() -> None:
    memberships = [
        MembershipMasses(evidence_id="a", own_subset=1, r=2, not_in={1: 0.5, 2: 0.2, 3: 1.0}),
        MembershipMasses(evidence_id="b", own_subset=1, r=2, not_in={1: 0.5, 2: 0.4, 3: 1.0}),
        MembershipMasses(evidence_id="c", own_subset=2, r=2, not_in={1: 0.8}, in_own=0.5),
    ]
    assert emptiness_alpha(1, memberships) == pytest.approx(1 - 0.5 * 0.5 * (1 - 0.2 * 0.5))
    assert emptiness_alpha(2, memberships) == 1.0


def test_combine_existence_of_the_burglary_subsets(burglary_existences: list[SubsetExistence]) -> None:
    combined = combine_existence(burglary_existences)
    expected = {
        frozenset({1, 2}): 0.3494,
        frozenset({1}): 0.1314,
        frozenset({2}): 0.3774,
        frozenset(): 0.1418,
    }
    assert combined == pytest.approx(expected, abs=GOLDEN)

    counts = count_bpa(combined)
    assert counts.at_least == pytest.approx({1: 0.5087, 2: 0.3494}, abs=GOLDEN)
    assert counts.theta == pytest.approx(0.1418, abs=GOLDEN)

    result = posterior(BURGLARY_PRIOR, counts)
    assert result.conflict_k == pytest.approx(0.2097, abs=GOLDEN)
    assert result.masses == pytest.approx({1: 0.4939, 2: 0.5061}, abs=GOLDEN)


def test_single_and_uniform_existence_expansions() -> None:
    assert combine_existence([existence(1, 0.7)]) == pytest.approx({frozenset({1}): 0.7, frozenset(): 0.3})
    combined = combine_existence([existence(index, 0.5) for index in (1, 2, 3)])
    assert len(combined) == 8
    assert set(combined.values()) == {0.125}
    counts = count_bpa(combined)
    assert counts.at_least == pytest.approx({1: 0.375, 2: 0.375, 3: 0.125})
    assert counts.theta == pytest.approx(0.125)


def test_expansion_limit(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(config, "MAX_EXPANSION_SUBSETS", 2)
    with pytest.raises(ExpansionLimitError):
        combine_existence([existence(index, 0.5) for index in (1, 2, 3)])


def test_vacuous_count_evidence_keeps_the_prior() -> None:
    result = posterior(BURGLARY_PRIOR, CountBpa(at_least={}, theta=1.0))
    assert result.masses == pytest.approx(BURGLARY_PRIOR.masses)
    assert result.conflict_k == 0.0


def test_degenerate_prior() -> None:
    result = posterior(PriorCounts(masses={2: 1.0}), CountBpa(at_least={1: 0.3, 2: 0.5}, theta=0.2))
    assert result.masses == {2: 1.0}


def test_prior_and_count_evidence_in_total_conflict() -> None:
    with pytest.raises(TotalConflictError):
        posterior(PriorCounts(masses={1: 1.0}), CountBpa(at_least={2: 1.0}, theta=0.0))


existence_lists = st.lists(st.floats(0.0, 1.0), min_size=1, max_size=6).map(
    lambda values: [existence(index, value) for index, value in enumerate(values, start=1)],
)


@st.composite
def priors(draw: st.DrawFn) -> PriorCounts:
    choice = st.sampled_from([0.0, 0.1, 0.25, 0.5, 1.0]) | st.floats(0.0, 1.0)
    weights = draw(st.lists(choice, min_size=1, max_size=7))
    total = sum(weights)
    assume(total > 0.1)
    return PriorCounts(masses={count: weight / total for count, weight in enumerate(weights)})


@settings(max_examples=1000, deadline=None)
@given(existence_lists)
def test_count_bpa_preserves_the_total(existences: list[SubsetExistence]) -> None:
    combined = combine_existence(existences)
    assert sum(combined.values()) == pytest.approx(1.0, abs=1e-9)
    counts = count_bpa(combined)
    assert sum(counts.at_least.values()) + counts.theta == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=1000, deadline=None)
@given(priors(), existence_lists)
def test_closed_form_posterior_matches_generic_combination(
    prior: PriorCounts,
    existences: list[SubsetExistence],
) -> None:
    counts = count_bpa(combine_existence(existences))
    try:
        closed_form = posterior(prior, counts)
    except TotalConflictError:
        closed_form = None
    assume(closed_form is not None and closed_form.conflict_k < 1.0 - 1e-4)
    assert closed_form is not None
    for count, mass in prior.masses.items():
        if mass == 0.0:
            assert closed_form.mass(count) == 0.0
    generic = posterior_by_combination(prior, counts)
    assert generic.conflict_k == pytest.approx(closed_form.conflict_k, abs=1e-9)
    for count in prior.masses:
        assert generic.mass(count) == pytest.approx(closed_form.mass(count), abs=1e-9)


action_focals = st.frozensets(st.integers(0, BURGLARY_FRAME.size - 1), min_size=1, max_size=BURGLARY_FRAME.size - 1)


@settings(max_examples=1000, deadline=None)
@given(
    st.lists(st.tuples(action_focals, st.floats(0.01, 0.9)), min_size=1, max_size=5),
    st.data(),
)
def test_existence_grows_as_mass_leaves_theta(
    supports: list[tuple[frozenset[int], float]],
    data: st.DataObject,
) -> None:
    index = data.draw(st.integers(0, len(supports) - 1), label="index")
    focal, mass = supports[index]
    raised = list(supports)
    raised[index] = (focal, data.draw(st.floats(mass + 0.05, 0.95), label="raised"))

    def exists(items: list[tuple[frozenset[int], float]]) -> float:
        bpas = [MassFunction.simple(BURGLARY_FRAME, focal, mass) for focal, mass in items]
        return subset_existence(1, bpas)[0]

    assert exists(raised) > exists(supports)


@st.composite
def membership_lists(draw: st.DrawFn) -> tuple[int, list[MembershipMasses]]:
    r = draw(st.integers(1, 4))
    unit = st.floats(0.0, 1.0)
    memberships = []
    for number in range(draw(st.integers(1, 5))):
        own = draw(st.integers(1, r))
        if r > 1 and draw(st.booleans()):
            not_in = {index: draw(unit) for index in range(1, r + 1) if index != own}
            memberships.append(
                MembershipMasses(evidence_id=f"e{number}", own_subset=own, r=r, not_in=not_in, in_own=draw(unit)),
            )
        else:
            not_in = {index: draw(unit) for index in range(1, r + 2)}
            memberships.append(MembershipMasses(evidence_id=f"e{number}", own_subset=own, r=r, not_in=not_in))
    return r, memberships


@settings(max_examples=1000, deadline=None)
@given(membership_lists())
def test_emptiness_alpha_is_a_credibility(case: tuple[int, list[MembershipMasses]]) -> None:
    r, memberships = case
    for index in range(1, r + 1):
        assert 0.0 <= emptiness_alpha(index, memberships) <= 1.0
