import logging
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict

from nonspecific.belief import THETA_LABEL, MassFunction
from nonspecific.errors import NonspecificError
from nonspecific.posterior import (
    Conjunction,
    CountBpa,
    PosteriorDistribution,
    SubsetExistence,
    build_existence,
    combination_fits,
    combine_existence,
    count_bpa,
    posterior,
    posterior_by_combination,
)
from nonspecific.search import CountVerdict, SearchResult, minimize
from nonspecific.specification import SpecificationAssessment, specify_evidence
from nonspecific.utilities.helpers import ConflictCache

from .scenario import SCHEMA_VERSION, Scenario

logger = logging.getLogger(__name__)

Stage = Literal["partition", "specify", "posterior"]
STAGES: tuple[Stage, ...] = ("partition", "specify", "posterior")

# Largest tolerated gap between the closed-form posterior and the generic combination.
TWO_PATH_TOLERANCE = 1e-9


class PipelineError(NonspecificError):
    """
    Raised when a computation stage fails.

    Parameters:
        stage (str): The stage that failed.
    """

    def __init__(self, stage: str, cause: Exception) -> None:
        self.stage = stage
        super().__init__(f"Stage '{stage}' failed: {cause}")


def labelled(m: MassFunction | None) -> dict[str, float] | None:
    return None if m is None else m.to_labels()


def conjunction_label(conjunction: Conjunction) -> str:
    return "∧".join(f"χ{index}" for index in sorted(conjunction)) if conjunction else THETA_LABEL


class PartitionRecord(BaseModel):
    """The partition found and its metaconflict."""

    model_config = ConfigDict(frozen=True)

    subsets: list[list[str]]
    r: int
    c0: float
    subset_conflicts: list[float]
    mcf: float
    pls_adp: float
    method: str
    explored_counts: dict[int, CountVerdict]
    trace: list[float]

    @classmethod
    def from_result(cls, result: SearchResult) -> "PartitionRecord":
        assessment = result.assessment
        return cls(
            subsets=result.best.block_ids(),
            r=result.best.r,
            c0=assessment.c0,
            subset_conflicts=list(assessment.subset_conflicts),
            mcf=assessment.mcf,
            pls_adp=assessment.pls_adp,
            method=result.method,
            explored_counts=result.explored_counts,
            trace=list(result.trace),
        )


class SpecificationRecord(BaseModel):
    """One piece of evidence after specification, with bpas keyed by rendered focal sets."""

    model_config = ConfigDict(frozen=True)

    evidence_id: str
    own_subset: int
    not_in: dict[int, float]
    in_own: float | None
    falsity_k: float
    combined: dict[str, float] | None
    bel: dict[int, float]
    pls: dict[int, float]
    credibility: dict[int, float]
    most_plausible_subset: int
    discounted_for_falsity: dict[str, float]
    discounted_per_subset: dict[int, dict[str, float]]

    @classmethod
    def from_assessment(cls, a: SpecificationAssessment) -> "SpecificationRecord":
        return cls(
            evidence_id=a.evidence_id,
            own_subset=a.memberships.own_subset,
            not_in=a.memberships.not_in,
            in_own=a.memberships.in_own,
            falsity_k=a.falsity_k,
            combined=labelled(a.combined),
            bel=a.bel,
            pls=a.pls,
            credibility=a.credibility,
            most_plausible_subset=a.most_plausible_subset,
            discounted_for_falsity=a.discounted_for_falsity.to_labels(),
            discounted_per_subset={index: m.to_labels() for index, m in a.discounted_per_subset.items()},
        )


class ExistenceRecord(BaseModel):
    """Existence evidence of one subset."""

    model_config = ConfigDict(frozen=True)

    index: int
    mass_exists: float
    mass_theta: float
    conflict: float
    emptiness_alpha: float
    discounted_exists: float
    discounted_theta: float
    combined_action: dict[str, float] | None

    @classmethod
    def from_existence(cls, e: SubsetExistence) -> "ExistenceRecord":
        return cls(**e.model_dump(exclude={"combined_action"}), combined_action=labelled(e.combined_action))


class Report(BaseModel):
    """
    Everything the pipeline derived from a scenario, up to the last stage run.

    Stages that were not run are left as None.
    """

    model_config = ConfigDict(frozen=True)

    schema_version: int = SCHEMA_VERSION
    scenario: str
    rng_seed: int
    stages: list[Stage]
    partition: PartitionRecord | None = None
    specifications: list[SpecificationRecord] | None = None
    existence: list[ExistenceRecord] | None = None
    combination: dict[str, float] | None = None
    count_bpa: CountBpa | None = None
    posterior: PosteriorDistribution | None = None
    posterior_check: float | None = None
    diagnostics: list[str] = []


def _verdict_notes(result: SearchResult) -> list[str]:
    return [
        f"r={count}: {verdict.value}"
        for count, verdict in result.explored_counts.items()
        if verdict not in (CountVerdict.BEST, CountVerdict.OPEN)
    ]


def run_pipeline(s: Scenario, until: Stage = "posterior") -> Report:
    """
    Partition the evidence, specify every piece of it and derive the posterior over the number of events.

    Parameters:
        s (Scenario): The scenario.
        until (Stage): Last stage to run.

    Returns:
        Report: The results of every stage run.

    Raises:
        PipelineError: If a stage fails, naming the stage.
    """
    last = STAGES.index(until)
    diagnostics: list[str] = []
    fields: dict[str, Any] = {"scenario": s.name, "rng_seed": s.config.rng_seed, "stages": list(STAGES[: last + 1])}

    stage: Stage = "partition"
    try:
        result = minimize(s.evidence, s.prior, s.config)
        diagnostics.extend(result.diagnostics)
        diagnostics.extend(_verdict_notes(result))
        fields["partition"] = PartitionRecord.from_result(result)
        if last < STAGES.index("specify"):
            return Report(**fields, diagnostics=diagnostics)

        stage = "specify"
        cache = ConflictCache()
        assessments = [specify_evidence(result.best, item.id, cache) for item in s.evidence]
        for assessment in assessments:
            diagnostics.extend(assessment.diagnostics)
        fields["specifications"] = [SpecificationRecord.from_assessment(a) for a in assessments]
        if last < STAGES.index("posterior"):
            return Report(**fields, diagnostics=diagnostics)

        stage = "posterior"
        memberships = [a.memberships for a in assessments]
        existences = []
        for index in range(1, result.best.r + 1):
            discounted = [a.discounted_per_subset[index] for a in assessments]
            existence, notes = build_existence(index, discounted, memberships)
            existences.append(existence)
            diagnostics.extend(notes)
        combined = combine_existence(existences)
        counts = count_bpa(combined)
        closed_form = posterior(s.prior, counts)
        check = posterior_by_combination(s.prior, counts) if combination_fits(s.prior, counts) else None
    except (NonspecificError, ValueError) as exc:
        logger.exception("Pipeline failed at stage %s", stage)
        raise PipelineError(stage, exc) from exc

    gap = None
    if check is None:
        note = "posterior cross-check skipped, the event counts do not fit in one belief frame"
        logger.info(note)
        diagnostics.append(note)
    else:
        gap = max(abs(closed_form.mass(count) - check.mass(count)) for count in s.prior.masses)
    if gap is not None and gap > TWO_PATH_TOLERANCE:
        note = f"closed-form and combined posteriors differ by {gap:.3g}"
        logger.warning(note)
        diagnostics.append(note)

    logger.info("Posterior %s", closed_form.masses)
    return Report(
        **fields,
        existence=[ExistenceRecord.from_existence(e) for e in existences],
        combination={conjunction_label(conjunction): mass for conjunction, mass in combined.items()},
        count_bpa=counts,
        posterior=closed_form,
        posterior_check=gap,
        diagnostics=diagnostics,
    )


