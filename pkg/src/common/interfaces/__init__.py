from src.common.interfaces.crud import AbstractCRUDRepository
from src.common.interfaces.repository import Repository


__all__ = (
    "AbstractCRUDRepository",
    "Repository",
)
