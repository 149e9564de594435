import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from nonspecific.belief import (
    DiscountRangeError,
    FocalRangeError,
    Frame,
    FrameMismatchError,
    MassFunction,
    TotalConflictError,
    UnknownLabelError,
    belief,
    combine,
    combine_all,
    conflict_of,
    discount,
    enumerated_conflict,
    plausibility,
    sequential_conflict,
)

FRAME = Frame(labels=("a", "b", "c"))


def test_frame_resolves_and_renders_labels() -> None:
    focal = FRAME.focal(["c", "a"])
    assert focal == frozenset({0, 2})
    assert FRAME.render(focal) == "{a,c}"
    assert FRAME.render(FRAME.theta) == "Θ"


def test_frame_rejects_unknown_and_duplicate_labels() -> None:
    with pytest.raises(UnknownLabelError):
        FRAME.focal(["z"])
    with pytest.raises(ValidationError):
        Frame(labels=("a", "a"))
    with pytest.raises(ValidationError):
        Frame(labels=())


def test_mass_function_validates_normalization() -> None:
    with pytest.raises(ValidationError):
        MassFunction(frame=FRAME, assignments={frozenset({0}): 0.5})
    with pytest.raises(ValidationError):
        MassFunction(frame=FRAME, assignments={frozenset(): 0.5, FRAME.theta: 0.5})
    with pytest.raises(FocalRangeError):
        MassFunction(frame=FRAME, assignments={frozenset({5}): 1.0})


def test_from_labels_puts_residual_on_theta() -> None:
    m = MassFunction.from_labels(FRAME, [(["a"], 0.6)])
    assert m.mass(frozenset({0})) == pytest.approx(0.6)
    assert m.theta_mass == pytest.approx(0.4)
    assert m.to_labels() == pytest.approx({"{a}": 0.6, "Θ": 0.4})


def test_combine_simple_support_functions() -> None:
    a = MassFunction.simple(FRAME, FRAME.focal(["a"]), 0.6)
    b = MassFunction.simple(FRAME, FRAME.focal(["b"]), 0.5)
    combined, conflict = combine(a, b)
    assert conflict == pytest.approx(0.3)
    assert combined.mass(frozenset({0})) == pytest.approx(0.3 / 0.7)
    assert combined.mass(frozenset({1})) == pytest.approx(0.2 / 0.7)
    assert combined.theta_mass == pytest.approx(0.2 / 0.7)


def test_combine_total_conflict_raises() -> None:
    a = MassFunction.simple(FRAME, FRAME.focal(["a"]), 1.0)
    b = MassFunction.simple(FRAME, FRAME.focal(["b"]), 1.0)
    with pytest.raises(TotalConflictError):
        combine(a, b)
    assert conflict_of([a, b]) == pytest.approx(1.0)


def test_combine_rejects_different_frames() -> None:
    other = Frame(labels=("x", "y"))
    with pytest.raises(FrameMismatchError):
        combine(MassFunction.vacuous(FRAME), MassFunction.vacuous(other))


def test_combine_all_accumulates_conflict() -> None:
    masses = [
        MassFunction.simple(FRAME, FRAME.focal(["a"]), 0.6),
        MassFunction.simple(FRAME, FRAME.focal(["b"]), 0.5),
        MassFunction.simple(FRAME, FRAME.focal(["c"]), 0.4),
    ]
    _, conflict = combine_all(masses)
    assert conflict == pytest.approx(conflict_of(masses))
    with pytest.raises(ValueError, match="at least one"):
        combine_all([])


def test_discount_scales_non_theta_masses() -> None:
    m = MassFunction.from_labels(FRAME, [(["a"], 0.7)])
    discounted = discount(m, 1.0 - 0.2352)
    assert discounted.mass(frozenset({0})) == pytest.approx(0.5354, abs=5e-4)
    assert discount(m, 1.0) == m
    assert discount(m, 0.0) == MassFunction.vacuous(FRAME)
    with pytest.raises(DiscountRangeError):
        discount(m, 1.5)


def test_belief_and_plausibility() -> None:
    m = MassFunction.from_labels(FRAME, [(["a"], 0.5), (["a", "b"], 0.3)])
    assert belief(m, FRAME.focal(["a", "b"])) == pytest.approx(0.8)
    assert plausibility(m, FRAME.focal(["b"])) == pytest.approx(0.5)
    assert belief(m, FRAME.theta) == pytest.approx(1.0)


focal_sets = st.frozensets(st.integers(min_value=0, max_value=FRAME.size - 1), min_size=1)


@st.composite
def mass_functions(draw: st.DrawFn) -> MassFunction:
    focals = draw(st.lists(focal_sets, min_size=1, max_size=4))
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=len(focals), max_size=len(focals)))
    total = sum(weights)
    assignments: dict[frozenset[int], float] = {}
    for focal, weight in zip(focals, weights, strict=True):
        assignments[focal] = assignments.get(focal, 0.0) + weight / total
    return MassFunction(frame=FRAME, assignments=assignments)


@settings(max_examples=1000, deadline=None)
@given(mass_functions(), mass_functions(), st.floats(0.0, 1.0))
def test_operations_stay_normalized(a: MassFunction, b: MassFunction, alpha: float) -> None:
    assert sum(discount(a, alpha).assignments.values()) == pytest.approx(1.0, abs=1e-9)
    if conflict_of([a, b]) < 1.0 - 1e-6:
        combined, _ = combine(a, b)
        assert sum(combined.assignments.values()) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=1000, deadline=None)
@given(st.lists(mass_functions(), min_size=1, max_size=4), mass_functions())
def test_conflict_grows_with_evidence(masses: list[MassFunction], extra: MassFunction) -> None:
    assert conflict_of([*masses, extra]) >= conflict_of(masses) - 1e-12


@settings(max_examples=1000, deadline=None)
@given(st.lists(mass_functions(), min_size=2, max_size=5))
def test_batch_and_sequential_conflict_agree(masses: list[MassFunction]) -> None:
    focal_lists = [m.focal_list() for m in masses]
    assert enumerated_conflict(focal_lists) == pytest.approx(sequential_conflict(focal_lists), abs=1e-9)


@settings(max_examples=1000, deadline=None)
@given(mass_functions(), focal_sets)
def test_belief_never_exceeds_plausibility(m: MassFunction, focal: frozenset[int]) -> None:
    assert belief(m, focal) <= plausibility(m, focal) + 1e-12


def assert_same_masses(left: MassFunction, right: MassFunction) -> None:
    for focal in left.assignments.keys() | right.assignments.keys():
        assert left.mass(focal) == pytest.approx(right.mass(focal), abs=1e-9)


@settings(max_examples=1000, deadline=None)
@given(mass_functions(), mass_functions(), mass_functions())
def test_combination_is_commutative_and_associative(a: MassFunction, b: MassFunction, c: MassFunction) -> None:
    assume(conflict_of([a, b, c]) < 1.0 - 1e-3)
    ab, k_ab = combine(a, b)
    ba, k_ba = combine(b, a)
    assert k_ab == pytest.approx(k_ba, abs=1e-9)
    assert_same_masses(ab, ba)
    left, _ = combine(ab, c)
    right, _ = combine(a, combine(b, c)[0])
    assert_same_masses(left, right)


@settings(max_examples=1000, deadline=None)
@given(mass_functions(), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_discounts_compose(m: MassFunction, alpha: float, beta: float) -> None:
    assert_same_masses(discount(discount(m, alpha), beta), discount(m, alpha * beta))


@settings(max_examples=1000, deadline=None)
@given(mass_functions(), focal_sets)
def test_plausibility_is_dual_to_belief(m: MassFunction, focal: frozenset[int]) -> None:
    complement = FRAME.theta - focal
    expected = 1.0 - belief(m, complement) if complement else 1.0
    assert plausibility(m, focal) == pytest.approx(expected, abs=1e-9)
