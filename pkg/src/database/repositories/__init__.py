from src.database.repositories.base import BaseRepository
from src.database.repositories.bracket import BracketRepository
from src.database.repositories.orbit import OrbitRepository
from src.database.repositories.scan import ScanRepository

__all__ = (
    "BaseRepository",
    "BracketRepository",
    "OrbitRepository",
    "ScanRepository",
)
