from collections.abc import Mapping, Sequence
from itertools import islice
from typing import (
    Any,
    Iterator,
    Optional,
    Type,
    TypeVar,
)

from pydantic import ValidationError

from src.common.exceptions import ConfigError
from src.common.interfaces import AbstractCRUDRepository
from src.database.core.connection import JsonLinesDatabase
from src.database.models.base import Base, Envelope


RecordType = TypeVar("RecordType", bound=Base)

# query keys answered by the envelope rather than the payload
_ENVELOPE_KEYS = frozenset({"config_hash", "version"})


def _matches(envelope: Envelope, query: Mapping[str, Any]) -> bool:
    for key, expected in query.items():
        source = envelope.model_dump() if key in _ENVELOPE_KEYS else envelope.payload
        if source.get(key) != expected:
            return False
    return True


class JsonLinesCRUDRepository(AbstractCRUDRepository[RecordType, Mapping[str, Any]]):
    """
    Records of one ``kind`` inside a shared JSON-lines database.

    Queries are equality filters on payload fields; ``config_hash`` and
    ``version`` filter on the envelope.
    """

    def __init__(self, db: JsonLinesDatabase, model: Type[RecordType], config_hash: str = "") -> None:
        super().__init__(model)
        self._db = db
        self._kind = model.kind
        self.config_hash = config_hash

    def _envelopes(self) -> Iterator[Envelope]:
        for number, document in enumerate(self._db.iter_documents(), start=1):
            if document.get("kind") != self._kind:
                continue
            try:
                yield Envelope.model_validate(document)
            except ValidationError as exc:
                raise ConfigError(f"{self._db.path}: malformed envelope #{number}", {"errors": exc.errors()}) from exc

    def _load(self, envelope: Envelope) -> RecordType:
        try:
            return self.model.model_validate(envelope.payload)
        except ValidationError as exc:
            raise ConfigError(f"{self._db.path}: {self._kind} record fails validation", {"errors": exc.errors()}) from exc

    def append(self, entry: RecordType) -> RecordType:

        self._db.append_lines([Envelope.wrap(entry, self.config_hash).model_dump()])
        return entry

    def append_many(self, entries: Sequence[RecordType]) -> Sequence[RecordType]:

        self._db.append_lines([Envelope.wrap(e, self.config_hash).model_dump() for e in entries])
        return entries

    def select(self, query: Mapping[str, Any]) -> Optional[RecordType]:
        for envelope in self._envelopes():
            if _matches(envelope, query):
                return self._load(envelope)
        return None

    def select_many(
        self, query: Mapping[str, Any], offset: Optional[int] = None, limit: Optional[int] = None
    ) -> Sequence[RecordType]:

        hits = (e for e in self._envelopes() if _matches(e, query))
        stop = None if limit is None else (offset or 0) + limit
        return [self._load(e) for e in islice(hits, offset or 0, stop)]

    def exists(self, query: Mapping[str, Any]) -> bool:

        return any(_matches(e, query) for e in self._envelopes())

    def count(self, query: Mapping[str, Any]) -> int:

        return sum(1 for e in self._envelopes() if _matches(e, query))

    def envelopes(self, query: Mapping[str, Any]) -> list[Envelope]:
        return [e for e in self._envelopes() if _matches(e, query)]

    def with_query_model(self, model: Type[RecordType]) -> "JsonLinesCRUDRepository[RecordType]":

        return JsonLinesCRUDRepository(self._db, model, self.config_hash)
