"""
OrJSON serializer for the results database.

Every persisted line goes through this class so that identical payloads
produce identical bytes: keys are sorted and numpy arrays are emitted
natively.
"""

import orjson
from typing import Any, Union

_OPTIONS = orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_SORT_KEYS


class OrjsonSerializer:
    """
    Fast deterministic JSON serializer using orjson library.

    Features:
    - Native support for datetime, dataclass, numpy types
    - Sorted keys, compact output
    - Thread-safe
    """

    @staticmethod
    def dumps(obj: Any) -> bytes:
        """
        Serialize object to JSON bytes.

        Example:
            >>> OrjsonSerializer.dumps({"b": 1, "a": 2})
            b'{"a":2,"b":1}'
        """
        return orjson.dumps(obj, option=_OPTIONS)

    @staticmethod
    def loads(data: Union[bytes, str]) -> Any:
        if isinstance(data, str):
            data = data.encode('utf-8')
        return orjson.loads(data)

    @staticmethod
    def dumps_str(obj: Any) -> str:
        return orjson.dumps(obj, option=_OPTIONS).decode('utf-8')

    @staticmethod
    def dumps_line(obj: Any) -> bytes:
        """One JSON-lines record, newline terminated."""
        return orjson.dumps(obj, option=_OPTIONS | orjson.OPT_APPEND_NEWLINE)
