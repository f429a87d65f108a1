import abc
from collections.abc import Mapping, Sequence
from typing import (
    Any,
    Generic,
    Optional,
    Type,
    TypeVar,
)

from src.common.interfaces.repository import Repository


EntryType = TypeVar("EntryType")
QueryType = TypeVar("QueryType", bound=Mapping[str, Any])


class AbstractCRUDRepository(Repository, Generic[EntryType, QueryType]):
    """
    Append-only CRUD contract: records are never updated or deleted once written.
    """

    model: Type[EntryType]

    def __init__(self, model: Type[EntryType]) -> None:

        self.model = model

    @abc.abstractmethod
    def append(self, entry: EntryType) -> EntryType:

        raise NotImplementedError

    @abc.abstractmethod
    def append_many(self, entries: Sequence[EntryType]) -> Sequence[EntryType]:

        raise NotImplementedError

    @abc.abstractmethod
    def select(self, query: QueryType) -> Optional[EntryType]:

        raise NotImplementedError

    @abc.abstractmethod
    def select_many(
        self, query: QueryType, offset: Optional[int] = None, limit: Optional[int] = None
    ) -> Sequence[EntryType]:

        raise NotImplementedError

    @abc.abstractmethod
    def exists(self, query: QueryType) -> bool:

        raise NotImplementedError

    @abc.abstractmethod
    def count(self, query: QueryType) -> int:

        raise NotImplementedError
