from typing import TypeVar

from pydantic import BaseModel, ValidationError

from nonspecific.errors import NonspecificError

ModelT = TypeVar("ModelT", bound=BaseModel)


class DataValidationError(NonspecificError):
    """
    Raised when a document does not parse or does not match its schema.

    Parameters:
        source (str): Where the document came from.
        problems (list[str]): One line per problem, "field.path: message" or the JSON parse position.
    """

    def __init__(self, source: str, problems: list[str]) -> None:
        self.source = source
        self.problems = problems
        details = "\n".join(f"  - {problem}" for problem in problems)
        super().__init__(f"Invalid document {source}:\n{details}")


class DataEncoder:
    """
    A class providing methods for encoding and decoding documents as JSON through pydantic models.
    """

    @staticmethod
    def encode_document(document: BaseModel) -> str:
        """
        Encode a model to an indented JSON string.

        Parameters:
            document (BaseModel): The model to be encoded.

        Returns:
            str: The JSON text, newline terminated.
        """
        return document.model_dump_json(indent=2) + "\n"

    @staticmethod
    def decode_document(text: str | bytes, model: type[ModelT], source: str = "<string>") -> ModelT:
        """
        Decode JSON text into `model`.

        Parameters:
            text (str | bytes): The JSON text.
            model (type[ModelT]): The pydantic model describing the document.
            source (str): Name used in error messages, usually the file path.

        Returns:
            ModelT: The validated document.

        Raises:
            DataValidationError: If the text is not JSON or does not match the schema.
        """
        try:
            return model.model_validate_json(text)
        except ValidationError as exc:
            raise DataValidationError(source, DataEncoder.describe(exc)) from exc

    @staticmethod
    def describe(exc: ValidationError) -> list[str]:
        """
        Flatten a pydantic validation error into "field.path: message" lines.
        """
        problems = []
        for error in exc.errors(include_url=False):
            location = ".".join(str(part) for part in error["loc"])
            problems.append(f"{location}: {error['msg']}" if location else error["msg"])
        return problems
