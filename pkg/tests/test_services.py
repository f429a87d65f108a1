import numpy as np
import pandas as pd
import pytest

from src.cli.dto import RunConfig
from src.common.exceptions import InvalidArgument
from src.core.settings import ExecutorKind
from src.database.core.connection import open_database
from src.database.models import BracketStatus
from src.database.repositories import BracketRepository, OrbitRepository
from src.geometry import SystemConfig, build_system
from src.index import IndexReport, IterateCounts
from src.services import (
    ManeService,
    OrbitService,
    RunContext,
    convexity_sweep,
    initial_state,
    iterates_frame,
    write_frame,
)
from src.services.base import energy_tag
from src.solver import find_orbit


def context(tmp_path, preset: str, **sections) -> RunContext:
    config = RunConfig(schema_version=1, system={"preset": preset}, **sections)
    return RunContext(config, build_system(SystemConfig(preset=preset)), tmp_path, executor=ExecutorKind.SERIAL)


@pytest.mark.parametrize(("k", "tag"), [(0.5, "0p5"), (1.0, "1"), (2.25, "2p25"), (1e-3, "0p001")])
def test_energy_tag(k, tag):
    assert energy_tag(k) == tag


def test_write_frame_creates_parents(tmp_path):
    path = write_frame(pd.DataFrame({"a": [1, 2]}), tmp_path / "deep" / "table.csv")
    assert path.read_text().splitlines() == ["a", "1", "2"]


def test_initial_state_from_energy(tmp_path):
    ctx = context(tmp_path, "appendix-cylinder", simulate={"x": 0.0, "vx": 0.3, "k": 1.0, "vy_sign": -1})
    state = initial_state(ctx)
    assert state.energy(ctx.system) == pytest.approx(1.0)
    assert state.v[1] < 0

    too_fast = context(tmp_path, "appendix-cylinder", simulate={"vx": 3.0, "k": 1.0})
    with pytest.raises(InvalidArgument):
        initial_state(too_fast)


def test_convexity_sweep_above_one_half(tmp_path):
    ctx = context(
        tmp_path,
        "appendix-cylinder",
        scan={"k": [1.0], "convexity_samples": 6, "convexity_duration": 10.0},
    )
    sweep = convexity_sweep(ctx, 1.0)
    assert sweep.trajectories == 6
    assert sweep.violations == 0
    if sweep.turning_points:
        assert sweep.min_acceleration > 0


def test_iterates_frame_bounds():
    report = IndexReport(
        m=1,
        m0=1,
        m_fixed=1,
        m0_fixed=1,
        m0_monodromy=1,
        mhat=0.25,
        mhat_monodromy=0.25,
        mhat_flagged=False,
        null_tol=1e-6,
        kernel_tol=1e-5,
        block_kind="elliptic",
        poincare_trace=1.3,
        poincare_nullity=0,
        iterates=[IterateCounts(n=4, m=2, m0=1, m_fixed=2, m0_fixed=1)],
    )
    frame = iterates_frame(report)
    assert frame.loc[0, "lower"] == pytest.approx(-1.0)
    assert frame.loc[0, "upper"] == pytest.approx(3.0)
    assert np.array_equal(frame.columns, ["n", "m", "m0", "m_T", "m0_T", "lower", "upper"])


def test_mane_budget_keeps_best_bracket(tmp_path):
    ctx = context(tmp_path, "appendix-cylinder", mane={"tol": 1e-6, "max_steps": 1, "grid": 64})
    with open_database(tmp_path / "results.jsonl") as db:
        record = ManeService(BracketRepository(db)).estimate(ctx)
        stored = BracketRepository(db).for_system(ctx.system.identity_hash)
    assert record.status == BracketStatus.BUDGET
    assert record.bracket.steps == 1
    assert record.bracket.lower == pytest.approx(0.25)
    assert [r.status for r in stored] == [BracketStatus.BUDGET]


def test_find_adds_section_seeds(tmp_path, monkeypatch):
    ctx = context(
        tmp_path,
        "flat-cylinder",
        find={
            "k": [0.5],
            "windings": [1],
            "index": False,
            "scan_seeds": True,
            "solver": {"nodes": 16, "sigma_schedule": [2.0]},
        },
        scan={"grid": {"x_min": -1.0, "x_max": 1.0, "nx": 3, "nv": 3}},
    )
    seen = []

    def recording_find_orbit(*args, extra_starts=(), **kwargs):
        seen.append(list(extra_starts))
        return find_orbit(*args, extra_starts=extra_starts, **kwargs)

    monkeypatch.setattr("src.services.orbits.find_orbit", recording_find_orbit)
    with open_database(tmp_path / "results.jsonl") as db:
        outcome = OrbitService(OrbitRepository(db)).find(ctx)
    assert len(outcome.records) == 1
    assert outcome.records[0].action == pytest.approx(1.0, abs=1e-8)
    assert [len(starts) for starts in seen] == [3]
    assert sorted(float(loop.nodes[0, 0]) for loop in seen[0]) == pytest.approx([-1.0, 0.0, 1.0])
    assert all(loop.size == 16 for loop in seen[0])
