import fcntl
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from pathlib import Path
from typing import Any, TypeAlias, Union

from src.common.exceptions import ConfigError
from src.common.serializers import OrjsonSerializer
from src.core.logger import logger


PathType: TypeAlias = Union[str, Path]


class JsonLinesDatabase:
    """
    Append-only JSON-lines file.

    Writers take an exclusive ``flock`` for the whole batch so concurrent
    processes never interleave partial lines. Readers skip nothing: a line that
    does not parse is an error.
    """

    def __init__(self, path: PathType) -> None:
        self.path = Path(path)

    def __repr__(self) -> str:
        return f"JsonLinesDatabase(path={str(self.path)!r})"

    def ensure(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.touch(exist_ok=True)

    def append_lines(self, documents: Sequence[Any]) -> int:
        if not documents:
            return 0
        self.ensure()
        payload = b"".join(OrjsonSerializer.dumps_line(doc) for doc in documents)
        with open(self.path, "ab") as handle:
            fcntl.flock(handle.fileno(), fcntl.LOCK_EX)
            try:
                handle.write(payload)
                handle.flush()
            finally:
                fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
        logger.debug("Appended %d line(s) to %s", len(documents), self.path)
        return len(documents)

    def iter_documents(self) -> Iterator[dict[str, Any]]:
        if not self.path.exists():
            return
        with open(self.path, "rb") as handle:
            fcntl.flock(handle.fileno(), fcntl.LOCK_SH)
            try:
                lines = handle.readlines()
            finally:
                fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                yield OrjsonSerializer.loads(line)
            except ValueError as exc:
                raise ConfigError(
                    f"{self.path}:{number}: unreadable results line",
                    details={"line": number},
                ) from exc


@contextmanager
def open_database(path: PathType) -> Iterator[JsonLinesDatabase]:
    """
    Open the results database, creating parent directories on first use.

    Yields:
        JsonLinesDatabase: the single writer handle of this process.
    """
    db = JsonLinesDatabase(path)
    db.ensure()
    logger.debug("Results database at %s", db.path)
    yield db
