from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from nonspecific.config import config
from nonspecific.errors import NonspecificError


class InvalidOptionError(NonspecificError):
    """
    An exception raised when a search option is updated with a value of the wrong type.

    Parameters:
        key (str): The option that has an invalid value.
    """

    def __init__(self, key: str, value: object) -> None:
        super().__init__(f"Value {value!r} for option '{key}' does not match the option's type.")


class SearchConfig(BaseModel):
    """
    Options of the partition search.

    Parameters:
        max_exhaustive_n (int): Largest evidence count enumerated exhaustively.
        restarts (int): Number of hill-climbing starts.
        rng_seed (int): Seed of the random starts.
        candidate_counts (frozenset[int] | None): Restrict the search to these numbers of subsets.
    """

    model_config = ConfigDict(frozen=True)

    max_exhaustive_n: int = Field(default_factory=lambda: config.MAX_EXHAUSTIVE_N, ge=1)
    restarts: int = Field(default_factory=lambda: config.RESTARTS, ge=1)
    rng_seed: int = Field(default_factory=lambda: config.RNG_SEED, ge=0, lt=2**64)
    candidate_counts: frozenset[int] | None = None

    @field_validator("candidate_counts")
    @classmethod
    def check_counts(cls, value: frozenset[int] | None) -> frozenset[int] | None:
        if value is not None and (not value or min(value) < 1):
            msg = "candidate counts must be a non-empty set of positive integers"
            raise ValueError(msg)
        return value

    def updated(self, key: str, value: Any) -> "SearchConfig":  # noqa: ANN401
        """
        Return a copy with one option changed.

        Parameters:
            key (str): The field name in SearchConfig to update.
            value (Any): The new value, of the same type as the existing one.

        Returns:
            SearchConfig: The updated, re-validated options.

        Raises:
            KeyError:
                If the provided key is not a field of SearchConfig.
            InvalidOptionError:
                If the provided value is not of the option's type.

        Example:
            SearchConfig().updated(key="restarts", value=32)
        """
        if key not in type(self).model_fields:
            raise KeyError(key)

        current = getattr(self, key)
        if current is not None and (isinstance(value, bool) or not isinstance(value, type(current))):
            raise InvalidOptionError(key, value)

        return SearchConfig.model_validate({**self.model_dump(), key: value})
