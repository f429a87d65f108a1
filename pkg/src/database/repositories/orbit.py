from typing import Optional

import src.database.models as models
from src.database.repositories.base import BaseRepository


class OrbitRepository(BaseRepository[models.OrbitRecord]):
    model = models.OrbitRecord

    def get_by_class(self, system_hash: str, k: float, winding: int) -> Optional[models.OrbitRecord]:
        return self._crud.select({"system_hash": system_hash, "k": k, "winding": winding})

    def for_system(self, system_hash: str) -> list[models.OrbitRecord]:
        return list(self._crud.select_many({"system_hash": system_hash}))
