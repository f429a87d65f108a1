from typing import Generic, TypeVar

from src.database.core.connection import JsonLinesDatabase
from src.database.models.base import Base
from src.database.repositories.crud import JsonLinesCRUDRepository
from src.database.repositories.types.repository import Repository

TypeModel = TypeVar("TypeModel", bound=Base)


class BaseRepository(Repository, Generic[TypeModel]):

    def __init__(self, db: JsonLinesDatabase, config_hash: str = "") -> None:
        self._db = db
        self._crud = JsonLinesCRUDRepository(self._db, self.model, config_hash)

    def add(self, record: TypeModel) -> TypeModel:
        return self._crud.append(record)

    def add_many(self, records: list[TypeModel]) -> list[TypeModel]:
        return list(self._crud.append_many(records))

    def all(self) -> list[TypeModel]:
        return list(self._crud.select_many({}))

    def count(self) -> int:
        return self._crud.count({})
