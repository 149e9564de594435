import logging
import random
from collections.abc import Sequence
from enum import Enum

from pydantic import BaseModel, ConfigDict

from nonspecific.errors import NonspecificError
from nonspecific.evidence import (
    Evidence,
    EvidenceNotFoundError,
    MetaconflictAssessment,
    Partition,
    PriorCounts,
    domain_conflict,
    metaconflict,
    metaconflict_value,
)
from nonspecific.utilities.helpers import ConflictCache, bell_number, blocks_of, restricted_growth_strings

from .options import SearchConfig

logger = logging.getLogger(__name__)

# Two metaconflict values closer than this are a tie.
TIE_EPSILON = 1e-12

Blocks = list[list[int]]


class SearchSizeError(NonspecificError):
    """
    Raised when exhaustive enumeration is asked for more evidence than allowed.
    """

    def __init__(self, n: int, limit: int) -> None:
        super().__init__(
            f"Exhaustive search over {n} pieces of evidence ({bell_number(n)} partitions) exceeds the limit of {limit}",
        )


class EmptySearchSpaceError(NonspecificError):
    """
    Raised when no partition satisfies the requested numbers of subsets.
    """

    def __init__(self, n: int, counts: frozenset[int]) -> None:
        super().__init__(f"No partition of {n} pieces of evidence has a number of subsets in {sorted(counts)}")


class CountVerdict(str, Enum):
    """What is known about the best partition with a given number of subsets."""

    BEST = "best"
    OPEN = "open"
    DOMINATED_BY_PRIOR = "dominated_by_prior"
    DOMINATED_BY_DOMAIN_CONFLICT = "dominated_by_domain_conflict"


class SearchResult(BaseModel):
    """
    Outcome of a partition search.

    Parameters:
        best (Partition): The partition with the smallest metaconflict found.
        assessment (MetaconflictAssessment): Its metaconflict.
        explored_counts (dict[int, CountVerdict]): Verdict per number of subsets 1..n.
        trace (tuple[float, ...]): Metaconflict after each accepted step of the winning run.
        method (str): "exhaustive" or "local".
        diagnostics (tuple[str, ...]): Notes collected during the search.
    """

    model_config = ConfigDict(frozen=True)

    best: Partition
    assessment: MetaconflictAssessment
    explored_counts: dict[int, CountVerdict]
    trace: tuple[float, ...]
    method: str
    diagnostics: tuple[str, ...] = ()


class _Evaluator:
    """Metaconflict of position blocks over a fixed evidence list, with memoised subset conflicts."""

    def __init__(self, evidence: Sequence[Evidence], prior: PriorCounts, cache: ConflictCache) -> None:
        self.evidence = list(evidence)
        self.prior = prior
        self.cache = cache

    def conflict(self, block: Sequence[int]) -> float:
        return self.cache([self.evidence[position] for position in block])

    def mcf(self, blocks: Blocks) -> float:
        return metaconflict_value(domain_conflict(len(blocks), self.prior), (self.conflict(b) for b in blocks))

    def id_key(self, blocks: Blocks) -> tuple[int, list[list[str]]]:
        """Number of subsets, then the blocks as sorted evidence ids."""
        return len(blocks), sorted(sorted(self.evidence[position].id for position in block) for block in blocks)

    def partition(self, blocks: Blocks) -> Partition:
        return Partition(
            subsets=tuple(tuple(self.evidence[position] for position in block) for block in blocks),
            prior=self.prior,
        )


def count_verdicts(
    prior: PriorCounts,
    current_best_mcf: float,
    r_current: int,
    max_count: int,
) -> dict[int, CountVerdict]:
    """
    Classify every number of subsets 1..max_count against the best partition found so far.

    A count j is dominated by domain conflict when the best metaconflict is already below its
    domain conflict sum_{i != j} m(E_i), and dominated by the prior when j < r_current and
    m(E_j) < m(E_r_current).

    Parameters:
        prior (PriorCounts): Prior over the number of events.
        current_best_mcf (float): Minimum metaconflict achieved with r_current subsets.
        r_current (int): Number of subsets of that minimum.
        max_count (int): Largest count to classify.

    Returns:
        dict[int, CountVerdict]: Verdict per count.
    """
    verdicts = {}
    for j in range(1, max(max_count, r_current) + 1):
        if j == r_current:
            verdicts[j] = CountVerdict.BEST
        elif current_best_mcf < domain_conflict(j, prior):
            verdicts[j] = CountVerdict.DOMINATED_BY_DOMAIN_CONFLICT
        elif j < r_current and prior.mass(j) < prior.mass(r_current):
            verdicts[j] = CountVerdict.DOMINATED_BY_PRIOR
        else:
            verdicts[j] = CountVerdict.OPEN
    return verdicts


def prune_counts(
    prior: PriorCounts,
    current_best_mcf: float,
    r_current: int,
    max_count: int | None = None,
) -> set[int]:
    """
    Counts of subsets that are not provably worse than the current best.

    Parameters:
        prior (PriorCounts): Prior over the number of events.
        current_best_mcf (float): A minimum metaconflict achieved with r_current subsets.
        r_current (int): Number of subsets of that minimum.
        max_count (int | None): Largest count considered, defaults to the largest prior count.

    Returns:
        set[int]: The counts that survive both pruning rules, r_current included.
    """
    limit = max(prior.max_count, r_current) if max_count is None else max_count
    verdicts = count_verdicts(prior, current_best_mcf, r_current, limit)
    return {j for j, verdict in verdicts.items() if verdict in (CountVerdict.BEST, CountVerdict.OPEN)}


def exhaustive_minimize(
    evidence: Sequence[Evidence],
    prior: PriorCounts,
    cfg: SearchConfig | None = None,
    cache: ConflictCache | None = None,
) -> SearchResult:
    """
    Minimize the metaconflict over every set partition of the evidence.

    Ties go to fewer subsets, then to the lexicographically smallest blocks of sorted evidence ids,
    so the result does not depend on the input order.

    Parameters:
        evidence (Sequence[Evidence]): The evidence, in input order.
        prior (PriorCounts): Prior over the number of events.
        cfg (SearchConfig | None): Search options.
        cache (ConflictCache | None): Memo of subset conflicts to share with other searches.

    Returns:
        SearchResult: The global minimum.

    Raises:
        SearchSizeError: If there is more evidence than cfg.max_exhaustive_n.
        EmptySearchSpaceError: If no partition has an allowed number of subsets.
    """
    cfg = cfg or SearchConfig()
    n = len(evidence)
    if n == 0:
        msg = "cannot partition an empty evidence list"
        raise ValueError(msg)
    if n > cfg.max_exhaustive_n:
        raise SearchSizeError(n, cfg.max_exhaustive_n)

    evaluator = _Evaluator(evidence, prior, cache or ConflictCache())
    allowed = cfg.candidate_counts
    best_blocks: Blocks | None = None
    best_mcf = 1.0
    trace: list[float] = []

    for labels in restricted_growth_strings(n):
        blocks = blocks_of(labels)
        if allowed is not None and len(blocks) not in allowed:
            continue
        mcf = evaluator.mcf(blocks)
        if best_blocks is None or mcf < best_mcf - TIE_EPSILON:
            best_blocks, best_mcf = blocks, mcf
            trace.append(mcf)
        elif abs(mcf - best_mcf) <= TIE_EPSILON and evaluator.id_key(blocks) < evaluator.id_key(best_blocks):
            best_blocks = blocks

    if best_blocks is None:
        raise EmptySearchSpaceError(n, allowed or frozenset())

    best = evaluator.partition(best_blocks)
    assessment = metaconflict(best, evaluator.cache)
    logger.info("Exhaustive search over %d partitions: mcf %.6f with %d subsets", bell_number(n), best_mcf, best.r)
    return SearchResult(
        best=best,
        assessment=assessment,
        explored_counts=count_verdicts(prior, assessment.mcf, best.r, n),
        trace=tuple(trace),
        method="exhaustive",
    )


def _random_start(n: int, r: int, rng: random.Random) -> Blocks:
    positions = list(range(n))
    rng.shuffle(positions)
    blocks = [[position] for position in positions[:r]]
    for position in positions[r:]:
        blocks[rng.randrange(r)].append(position)
    return [sorted(block) for block in sorted(blocks, key=min)]


def _start_counts(n: int, prior: PriorCounts, allowed: frozenset[int] | None) -> list[int]:
    if allowed is not None:
        return sorted(count for count in allowed if count <= n)
    supported = [count for count in prior.support if 1 <= count <= n]
    return supported or list(range(1, n + 1))


def _hill_climb(blocks: Blocks, evaluator: _Evaluator, allowed: frozenset[int] | None) -> tuple[Blocks, list[float]]:
    """Steepest descent over single-evidence moves; stops at the first local minimum."""
    blocks = [list(block) for block in blocks]
    conflicts = [evaluator.conflict(block) for block in blocks]
    current = metaconflict_value(domain_conflict(len(blocks), evaluator.prior), conflicts)
    trace = [current]

    while True:
        best_move: tuple[int, int, int | None] | None = None
        best_value = current
        r = len(blocks)
        for source, block in enumerate(blocks):
            for position in block:
                remaining = [other for other in block if other != position]
                source_conflict = evaluator.conflict(remaining) if remaining else None
                targets: list[int | None] = [target for target in range(r) if target != source]
                if remaining:
                    targets.append(None)
                for target in targets:
                    new_r = r - (0 if remaining else 1) + (1 if target is None else 0)
                    if allowed is not None and new_r not in allowed:
                        continue
                    moved = [
                        conflict for index, conflict in enumerate(conflicts) if index not in (source, target)
                    ]
                    if source_conflict is not None:
                        moved.append(source_conflict)
                    if target is not None:
                        moved.append(evaluator.conflict(sorted([*blocks[target], position])))
                    value = metaconflict_value(domain_conflict(new_r, evaluator.prior), moved)
                    if value < best_value - TIE_EPSILON:
                        best_move, best_value = (source, position, target), value

        if best_move is None:
            return blocks, trace

        source, position, target = best_move
        if target is None:
            blocks.append([position])
        else:
            blocks[target] = sorted([*blocks[target], position])
        blocks[source].remove(position)
        if not blocks[source]:
            del blocks[source]
        conflicts = [evaluator.conflict(block) for block in blocks]
        current = best_value
        trace.append(current)
        logger.debug("Moved evidence %d, mcf now %.6f", position, current)


def local_minimize(
    evidence: Sequence[Evidence],
    prior: PriorCounts,
    cfg: SearchConfig | None = None,
    start: Sequence[Sequence[str]] | None = None,
    cache: ConflictCache | None = None,
) -> SearchResult:
    """
    Minimize the metaconflict by steepest-descent hill climbing with seeded restarts.

    A step moves one piece of evidence into another subset or into a new subset of its own;
    a subset emptied by the move disappears. The first start is `start` when given, otherwise
    all evidence in one subset; the other starts are random partitions whose number of subsets
    cycles through the counts the prior supports.

    Parameters:
        evidence (Sequence[Evidence]): The evidence, in input order.
        prior (PriorCounts): Prior over the number of events.
        cfg (SearchConfig | None): Search options.
        start (Sequence[Sequence[str]] | None): Blocks of evidence ids to start the first run from.
        cache (ConflictCache | None): Memo of subset conflicts to share with other searches.

    Returns:
        SearchResult: The best local minimum over all runs, the earliest run winning ties.

    Raises:
        EvidenceNotFoundError: If `start` names evidence that was not passed in.
    """
    cfg = cfg or SearchConfig()
    n = len(evidence)
    if n == 0:
        msg = "cannot partition an empty evidence list"
        raise ValueError(msg)

    evaluator = _Evaluator(evidence, prior, cache or ConflictCache())
    allowed = cfg.candidate_counts
    counts = _start_counts(n, prior, allowed)
    if not counts:
        raise EmptySearchSpaceError(n, allowed or frozenset())

    rng = random.Random(cfg.rng_seed)  # noqa: S311
    starts: list[Blocks] = []
    if start is not None:
        positions = {item.id: position for position, item in enumerate(evidence)}
        unknown = [evidence_id for block in start for evidence_id in block if evidence_id not in positions]
        if unknown:
            raise EvidenceNotFoundError(unknown[0])
        starts.append([sorted(positions[evidence_id] for evidence_id in block) for block in start])
    elif allowed is None or 1 in allowed:
        starts.append([list(range(n))])
    while len(starts) < cfg.restarts:
        starts.append(_random_start(n, counts[len(starts) % len(counts)], rng))

    best_blocks, best_trace = _hill_climb(starts[0], evaluator, allowed)
    for run, start_blocks in enumerate(starts[1:], start=1):
        blocks, trace = _hill_climb(start_blocks, evaluator, allowed)
        logger.debug("Run %d: %d moves, mcf %.6f", run, len(trace) - 1, trace[-1])
        if trace[-1] < best_trace[-1] - TIE_EPSILON:
            best_blocks, best_trace = blocks, trace

    best = evaluator.partition(best_blocks)
    assessment = metaconflict(best, evaluator.cache)
    logger.info("Local search over %d runs: mcf %.6f with %d subsets", len(starts), assessment.mcf, best.r)
    return SearchResult(
        best=best,
        assessment=assessment,
        explored_counts=count_verdicts(prior, assessment.mcf, best.r, n),
        trace=tuple(best_trace),
        method="local",
    )


def minimize(
    evidence: Sequence[Evidence],
    prior: PriorCounts,
    cfg: SearchConfig | None = None,
) -> SearchResult:
    """
    Search used by the pipeline: hill climbing from the all-in-one start, confirmed by
    exhaustive enumeration when the evidence is small enough.

    The exhaustive partition replaces the local one only when it is strictly better,
    so the subset numbering of the climb is kept otherwise.
    """
    cfg = cfg or SearchConfig()
    cache = ConflictCache()
    result = local_minimize(evidence, prior, cfg, cache=cache)
    if len(evidence) > cfg.max_exhaustive_n:
        cache.log_stats()
        return result

    oracle = exhaustive_minimize(evidence, prior, cfg, cache=cache)
    cache.log_stats()
    if oracle.assessment.mcf < result.assessment.mcf - TIE_EPSILON:
        note = (
            f"exhaustive search improved the hill-climbing minimum from {result.assessment.mcf:.6f} "
            f"to {oracle.assessment.mcf:.6f}"
        )
        logger.warning(note)
        return oracle.model_copy(update={"diagnostics": (note,)})
    return result
