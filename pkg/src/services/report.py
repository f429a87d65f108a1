from dataclasses import dataclass, field
from typing import Final

import pandas as pd

from src.database.models import RECORD_TYPES, Envelope
from src.database.repositories import BracketRepository, OrbitRepository, ScanRepository
from src.services.base import Service

CSV_SCHEMAS: Final[dict[str, tuple[str, ...]]] = {
    "trajectory.csv": ("t", "x", "y", "vx", "vy", "E", "p_x", "p_y"),
    "scan_k<k>_w<winding>.csv": ("seed", "x", "vx", "residual", "classification"),
    "index_k<k>_w<winding>.csv": ("n", "m", "m0", "m_T", "m0_T", "lower", "upper"),
}


def jsonl_schemas() -> dict[str, dict]:
    schemas = {"envelope": Envelope.model_json_schema()}
    schemas.update({kind: model.model_json_schema() for kind, model in RECORD_TYPES.items()})
    return schemas


@dataclass
class DatabaseSummary:
    orbits: pd.DataFrame
    brackets: pd.DataFrame
    scans: pd.DataFrame
    counts: dict[str, int] = field(default_factory=dict)


class ReportService(Service[OrbitRepository]):

    def __init__(self, orbits: OrbitRepository, brackets: BracketRepository, scans: ScanRepository) -> None:
        super().__init__(orbits)
        self._brackets = brackets
        self._scans = scans

    def summarize(self) -> DatabaseSummary:
        orbits = self._repo.all()
        brackets = self._brackets.all()
        scans = self._scans.all()
        return DatabaseSummary(
            orbits=pd.DataFrame(
                [
                    {
                        "system": r.system,
                        "k": r.k,
                        "winding": r.winding,
                        "action": r.action,
                        "x_star": r.x_star,
                        "el_residual": r.el_residual,
                        "m": r.index.m if r.index else None,
                        "m0": r.index.m0 if r.index else None,
                        "mhat": r.index.mhat if r.index else None,
                        "passed": r.passed if r.index else None,
                    }
                    for r in orbits
                ],
                columns=["system", "k", "winding", "action", "x_star", "el_residual", "m", "m0", "mhat", "passed"],
            ),
            brackets=pd.DataFrame(
                [
                    {
                        "system": r.system,
                        "lower": r.bracket.lower,
                        "upper": r.bracket.upper,
                        "gap": r.bracket.gap,
                        "contractible": r.bracket.contractible,
                        "status": r.status.value,
                    }
                    for r in brackets
                ],
                columns=["system", "lower", "upper", "gap", "contractible", "status"],
            ),
            scans=pd.DataFrame(
                [
                    {
                        "system": r.system,
                        "k": r.k,
                        "winding": r.winding,
                        "seeds": r.seeds,
                        "fixed_points": len(r.fixed_points),
                        "min_residual": r.min_residual,
                        "no_return": r.no_return,
                        "convexity_violations": r.convexity_violations,
                    }
                    for r in scans
                ],
                columns=["system", "k", "winding", "seeds", "fixed_points", "min_residual", "no_return", "convexity_violations"],
            ),
            counts={"orbit": len(orbits), "bracket": len(brackets), "scan": len(scans)},
        )
