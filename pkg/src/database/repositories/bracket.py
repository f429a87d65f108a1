import src.database.models as models
from src.database.repositories.base import BaseRepository


class BracketRepository(BaseRepository[models.BracketRecord]):
    model = models.BracketRecord

    def for_system(self, system_hash: str) -> list[models.BracketRecord]:
        return list(self._crud.select_many({"system_hash": system_hash}))
