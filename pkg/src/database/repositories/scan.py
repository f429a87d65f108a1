import src.database.models as models
from src.database.repositories.base import BaseRepository


class ScanRepository(BaseRepository[models.ScanSummary]):
    model = models.ScanSummary

    def at_energy(self, system_hash: str, k: float) -> list[models.ScanSummary]:
        return list(self._crud.select_many({"system_hash": system_hash, "k": k}))
