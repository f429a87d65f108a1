from datetime import datetime, timezone
from typing import Any, ClassVar, Dict, TypeVar

from pydantic import BaseModel, ConfigDict, Field

from src.common.constants import SCHEMA_VERSION

ModelType = TypeVar("ModelType", bound="Base", covariant=True)


class Base(BaseModel):
    """
    Base class for persisted records. ``kind`` tags the record type inside its
    envelope; subclasses override it.
    """

    model_config = ConfigDict(extra="forbid")

    kind: ClassVar[str] = "record"

    def __repr__(self) -> str:
        """
        Provides a string representation of the object.
        """
        params = ", ".join(
            f"{attr}={value!r}"
            for attr, value in self.__dict__.items()
            if not attr.startswith("_")
        )
        return f"{type(self).__name__}({params})"

    def as_dict(self) -> Dict[str, Any]:
        """
        JSON-ready dictionary; nested models, tuples and enums are flattened.
        """
        return self.model_dump(mode="json")


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class Envelope(BaseModel):
    """
    One line of the results database. ``created_at`` sits outside ``payload``
    so identical runs produce identical payload bytes.
    """

    model_config = ConfigDict(extra="forbid")

    kind: str
    version: int = SCHEMA_VERSION
    config_hash: str = ""
    payload: Dict[str, Any]
    created_at: str = Field(default_factory=utc_now)

    @classmethod
    def wrap(cls, record: Base, config_hash: str = "") -> "Envelope":
        return cls(kind=record.kind, config_hash=config_hash, payload=record.as_dict())
