import random

from nonspecific.belief import Frame
from nonspecific.evidence import Evidence, Partition, PriorCounts

BURGLARY_FRAME = Frame(labels=("brown_employee", "brown_nonemployee", "red"))
BURGLARY_PRIOR = PriorCounts(masses={1: 0.6, 2: 0.4})
RANDOM_FRAME = Frame(labels=("a", "b", "c", "d"))
RANDOM_EVENTS = (1, 2, 3)


def make_evidence(
    evidence_id: str,
    labels: list[str],
    mass: float,
    events: set[int],
    frame: Frame = BURGLARY_FRAME,
) -> Evidence:
    return Evidence(id=evidence_id, frame=frame, action=((frame.focal(labels), mass),), events=frozenset(events))


def burglary_evidence() -> list[Evidence]:
    return [
        make_evidence("e1", ["brown_nonemployee"], 0.8, {1}),
        make_evidence("e2", ["brown_employee"], 0.7, {1, 2}),
        make_evidence("e3", ["red"], 0.6, {2}),
        make_evidence("e4", ["brown_employee", "brown_nonemployee"], 0.5, {1, 2}),
    ]


def burglary_partition() -> Partition:
    return Partition.from_blocks(burglary_evidence(), [["e2", "e3"], ["e1", "e4"]], BURGLARY_PRIOR)


def random_scenario(rng: random.Random, n: int) -> tuple[list[Evidence], PriorCounts]:
    """n pieces of evidence over a 4-label frame and a prior over 1..3 events."""
    evidence = []
    for index in range(n):
        focal_count = rng.choice((1, 1, 2))
        budget = rng.uniform(0.3, 0.95)
        action = []
        for _ in range(focal_count):
            size = rng.randint(1, RANDOM_FRAME.size - 1)
            focal = frozenset(rng.sample(range(RANDOM_FRAME.size), size))
            action.append((focal, budget / focal_count))
        events = frozenset(rng.sample(RANDOM_EVENTS, rng.randint(1, 2)))
        evidence.append(Evidence(id=f"e{index + 1}", frame=RANDOM_FRAME, action=tuple(action), events=events))

    weights = [rng.uniform(0.05, 1.0) for _ in RANDOM_EVENTS]
    total = sum(weights)
    prior = PriorCounts(masses={count: weight / total for count, weight in zip(RANDOM_EVENTS, weights, strict=True)})
    return evidence, prior
