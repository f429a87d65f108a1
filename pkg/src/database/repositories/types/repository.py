from typing import Protocol, TypeVar, Any, Type

RepositoryType = TypeVar("RepositoryType", bound="Repository")


class Repository(Protocol):
    """
    A protocol representing a results-database repository.

    ``model`` is the record class; its ``kind`` selects the lines of the shared
    JSON-lines file the repository sees.
    """
    model: Type[Any]
