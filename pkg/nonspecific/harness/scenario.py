import logging
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from typing_extensions import Self

from nonspecific.belief import Frame
from nonspecific.config import SCENARIO_PATH
from nonspecific.errors import NonspecificError
from nonspecific.evidence import Evidence, PriorCounts
from nonspecific.search import SearchConfig
from nonspecific.utilities.helpers import DataEncoder, DataValidationError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SCENARIO_SUFFIX = ".scenario"


class ScenarioError(DataValidationError):
    """
    Raised when a scenario file is missing, unparsable or inconsistent.
    """


class ActionRecord(BaseModel):
    """A focal set of the action part, written as frame labels."""

    labels: list[str] = Field(min_length=1)
    mass: float = Field(ge=0.0, le=1.0)


class EvidenceRecord(BaseModel):
    """
    A piece of evidence as written in a scenario.

    Parameters:
        id (str): Unique evidence token.
        action (list[ActionRecord]): Focal sets of the action part; the residual goes to Θ.
        events (list[int | str]): Event numbers, or event labels when the scenario names its events.
    """

    id: str = Field(min_length=1)
    action: list[ActionRecord]
    events: list[int | str] = Field(min_length=1)


class ScenarioDocument(BaseModel):
    """
    The on-disk scenario schema.

    Parameters:
        schema_version (int): Must be 1.
        action_frame (list[str]): Hypothesis labels of the action frame.
        events (int | list[str]): Upper bound on the number of events, or their labels.
        evidence (list[EvidenceRecord]): At least one piece of evidence.
        prior (dict[int, float]): Prior over the number of events.
        config (SearchConfig | None): Stored search options.
    """

    model_config = ConfigDict(extra="forbid")

    schema_version: int = SCHEMA_VERSION
    action_frame: list[str]
    events: int | list[str]
    evidence: list[EvidenceRecord] = Field(min_length=1)
    prior: dict[int, float]
    config: SearchConfig | None = None

    @model_validator(mode="after")
    def check_references(self) -> Self:
        if self.schema_version != SCHEMA_VERSION:
            msg = f"unsupported schema_version {self.schema_version}, expected {SCHEMA_VERSION}"
            raise ValueError(msg)
        ids = [record.id for record in self.evidence]
        duplicates = sorted({evidence_id for evidence_id in ids if ids.count(evidence_id) > 1})
        if duplicates:
            msg = f"duplicate evidence ids: {duplicates}"
            raise ValueError(msg)
        labels = set(self.action_frame)
        for record in self.evidence:
            unknown = sorted({label for action in record.action for label in action.labels} - labels)
            if unknown:
                msg = f"evidence {record.id!r} uses undeclared action labels {unknown}"
                raise ValueError(msg)
            for event in record.events:
                self.event_number(event)
        return self

    def event_number(self, event: int | str) -> int:
        if isinstance(self.events, int):
            if isinstance(event, str) or not 1 <= event <= self.events:
                msg = f"event {event!r} is not a number between 1 and {self.events}"
                raise ValueError(msg)
            return event
        if isinstance(event, str):
            if event not in self.events:
                msg = f"undeclared event label {event!r}"
                raise ValueError(msg)
            return self.events.index(event) + 1
        if not 1 <= event <= len(self.events):
            msg = f"event {event} is not between 1 and {len(self.events)}"
            raise ValueError(msg)
        return event


class Scenario(BaseModel):
    """
    A validated scenario with action parts resolved to focal sets.

    Parameters:
        name (str): Scenario name, the file stem.
        frame (Frame): The action frame.
        event_labels (tuple[str, ...] | None): Event names, when the scenario declares them.
        evidence (tuple[Evidence, ...]): The evidence, in file order.
        prior (PriorCounts): Prior over the number of events.
        config (SearchConfig): Search options.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    frame: Frame
    event_labels: tuple[str, ...] | None = None
    evidence: tuple[Evidence, ...]
    prior: PriorCounts
    config: SearchConfig

    @classmethod
    def from_document(cls, document: ScenarioDocument, name: str) -> "Scenario":
        """
        Resolve a scenario document.

        Raises:
            ValidationError: If the frame, evidence or prior break their invariants.
        """
        frame = Frame(labels=tuple(document.action_frame))
        evidence = tuple(
            Evidence(
                id=record.id,
                frame=frame,
                action=tuple((frame.focal(action.labels), action.mass) for action in record.action),
                events=frozenset(document.event_number(event) for event in record.events),
            )
            for record in document.evidence
        )
        return cls(
            name=name,
            frame=frame,
            event_labels=None if isinstance(document.events, int) else tuple(document.events),
            evidence=evidence,
            prior=PriorCounts(masses=document.prior),
            config=document.config or SearchConfig(),
        )


def bundled_scenarios() -> list[str]:
    """Names of the scenarios shipped with the package."""
    return sorted(path.stem for path in SCENARIO_PATH.glob(f"*{SCENARIO_SUFFIX}"))


def resolve_scenario_path(path_or_name: str | Path) -> Path:
    """An existing file path, or the bundled scenario of that name."""
    path = Path(path_or_name)
    if path.is_file():
        return path
    bundled = SCENARIO_PATH / f"{path_or_name}{SCENARIO_SUFFIX}"
    if bundled.is_file():
        return bundled
    raise ScenarioError(str(path_or_name), [f"no such file, bundled scenarios are {bundled_scenarios()}"])


def parse_scenario(text: str | bytes, source: str = "<string>", name: str = "scenario") -> Scenario:
    """
    Parse and validate scenario text.

    Raises:
        ScenarioError: With one line per problem, JSON syntax errors carrying their line and column.
    """
    try:
        document = DataEncoder.decode_document(text, ScenarioDocument, source)
        return Scenario.from_document(document, name)
    except DataValidationError as exc:
        raise ScenarioError(source, exc.problems) from exc
    except ValidationError as exc:
        raise ScenarioError(source, DataEncoder.describe(exc)) from exc
    except NonspecificError as exc:
        raise ScenarioError(source, [str(exc)]) from exc


def load_scenario(path_or_name: str | Path) -> Scenario:
    """
    Load a scenario file, or a bundled scenario by name.

    Parameters:
        path_or_name (str | Path): A file path, or the name of a bundled scenario such as "burglary".

    Returns:
        Scenario: The validated scenario.

    Raises:
        ScenarioError: If the file is missing or invalid.

    Example:
        load_scenario("burglary").prior.masses -> {1: 0.6, 2: 0.4}
    """
    path = resolve_scenario_path(path_or_name)
    logger.info("Loading scenario %s", path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(str(path), [str(exc)]) from exc
    return parse_scenario(text, source=str(path), name=path.stem)
