from typing import Any, Protocol, Type


class Repository(Protocol):
    """
    A protocol representing a Repository pattern.

    A Repository mediates between the numerical layers and the results store,
    acting like an in-memory collection of records. Callers query and append
    without knowing how the records are laid out on disk.

    Attributes:
        model (Type[Any]): A class reference indicating the type of record
                           the repository handles.
    """

    model: Type[Any]
