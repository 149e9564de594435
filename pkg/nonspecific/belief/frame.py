from collections.abc import Iterable

from pydantic import BaseModel, ConfigDict, field_validator

from nonspecific.errors import NonspecificError

FocalSet = frozenset[int]
MAX_FRAME_SIZE = 64
THETA_LABEL = "Θ"


class UnknownLabelError(NonspecificError):
    """
    Raised when a hypothesis label is not declared in the frame.
    """

    def __init__(self, label: str) -> None:
        super().__init__(f"Unknown hypothesis label: {label!r}")


class Frame(BaseModel):
    """
    A frame of discernment: an ordered list of mutually exclusive hypotheses.

    Parameters:
        labels (tuple[str, ...]): Hypothesis names, unique and non-empty, at most 64 of them.
    """

    model_config = ConfigDict(frozen=True)

    labels: tuple[str, ...]

    @field_validator("labels")
    @classmethod
    def check_labels(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        if not 1 <= len(value) <= MAX_FRAME_SIZE:
            msg = f"a frame holds between 1 and {MAX_FRAME_SIZE} hypotheses, got {len(value)}"
            raise ValueError(msg)
        if any(not label for label in value):
            msg = "hypothesis labels must be non-empty"
            raise ValueError(msg)
        if len(set(value)) != len(value):
            msg = "hypothesis labels must be unique"
            raise ValueError(msg)
        return value

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def theta(self) -> FocalSet:
        """The whole frame as a focal set."""
        return frozenset(range(len(self.labels)))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise UnknownLabelError(label) from exc

    def focal(self, labels: Iterable[str]) -> FocalSet:
        """
        Resolve hypothesis labels to a focal set.

        Parameters:
            labels (Iterable[str]): Labels declared in this frame.

        Returns:
            FocalSet: The set of hypothesis indices.

        Raises:
            UnknownLabelError: If a label is not part of the frame.
        """
        return frozenset(self.index(label) for label in labels)

    def contains(self, focal: FocalSet) -> bool:
        return all(0 <= index < len(self.labels) for index in focal)

    def render(self, focal: FocalSet) -> str:
        """
        Render a focal set as text, the whole frame as "Θ".

        Example:
            Frame(labels=("a", "b", "c")).render(frozenset({0, 2})) -> "{a,c}"
        """
        if focal == self.theta:
            return THETA_LABEL
        return "{" + ",".join(self.labels[index] for index in sorted(focal)) + "}"
