from dataclasses import dataclass
from pathlib import Path

import numpy as np

from src.common.exceptions import InvalidArgument
from src.core.logger import logger
from src.dynamics import State, flow, make_event, state_at_energy
from src.services.base import RunContext, write_frame


@dataclass(frozen=True)
class SimulationOutcome:
    csv: Path
    rows: int
    energy: float
    energy_drift: float
    turning_points: int


def initial_state(context: RunContext) -> State:
    params = context.config.simulate
    q = np.array([params.x, params.y])
    if params.vy is not None:
        return State.of(q, [params.vx, params.vy])
    start = state_at_energy(context.system, q, params.vx, params.k, params.vy_sign)
    if start is None:
        raise InvalidArgument(
            f"no state at x={params.x} with vx={params.vx} and energy {params.k}",
            {"x": params.x, "vx": params.vx, "k": params.k},
        )
    return start


def simulate_trajectory(context: RunContext) -> SimulationOutcome:
    params = context.config.simulate
    start = initial_state(context)
    trajectory = flow(
        context.system,
        start,
        params.duration,
        params.tol,
        events={"vx_zero": make_event(lambda _t, s: s[2])},
        max_step=params.max_step or np.inf,
    )
    frame = trajectory.to_frame(context.system)
    path = write_frame(frame, context.out_dir / "trajectory.csv")
    turning_times, _ = trajectory.events["vx_zero"]
    logger.info("simulate: %d samples, energy drift %.3e", len(frame), trajectory.energy_drift)
    return SimulationOutcome(
        csv=path,
        rows=len(frame),
        energy=start.energy(context.system),
        energy_drift=trajectory.energy_drift,
        turning_points=len(turning_times),
    )
