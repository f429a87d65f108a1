"""Integration of the magnetic geodesic equation nabla_t gamma' = Y(gamma')."""

from collections.abc import Callable, Sequence
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import solve_ivp

from src.common.exceptions import InvalidArgument, StepFailure
from src.core.logger import logger
from src.dynamics.state import State, Trajectory
from src.geometry.chart import Array, christoffel
from src.geometry.system import MagneticSystem, lorentz_force

EventFn = Callable[[float, Array], float]


def geodesic_rhs(system: MagneticSystem) -> Callable[[float, Array], Array]:
    """Right-hand side of x'' = -Gamma(x', x') + Y(x') on the state (x, y, vx, vy)."""

    def rhs(_t: float, s: Array) -> Array:
        q, v = s[:2], s[2:]
        gamma = christoffel(system.chart, q)
        accel = -np.einsum("kij,i,j->k", gamma, v, v) + lorentz_force(system, q, v)
        return np.concatenate([v, accel])

    return rhs


def make_event(fn: EventFn, terminal: bool = False, direction: float = 0.0) -> EventFn:
    def event(t: float, s: Array) -> float:
        return fn(t, s)

    event.terminal = terminal
    event.direction = direction
    return event


def flow(
    system: MagneticSystem,
    s0: State,
    duration: float,
    tol: float = 1e-9,
    events: Optional[dict[str, EventFn]] = None,
    max_step: float = np.inf,
    t_eval: Optional[ArrayLike] = None,
) -> Trajectory:
    """
    Adaptive Dormand-Prince 5(4) integration from ``s0`` over ``duration``.

    With ``t_eval`` the trajectory holds the dense-output states at those times
    instead of the accepted steps.

    The energy drift max |E(t) - E(0)| over the accepted steps is reported,
    not enforced.
    """
    if duration <= 0 or tol <= 0:
        raise InvalidArgument("flow needs duration > 0 and tol > 0")

    named = dict(events or {})
    solution = solve_ivp(
        geodesic_rhs(system),
        (0.0, duration),
        s0.as_vector(),
        method="RK45",
        rtol=tol,
        atol=tol,
        events=list(named.values()) or None,
        max_step=max_step,
        t_eval=t_eval,
    )
    if solution.status == -1:
        t_last = float(solution.t[-1]) if solution.t.size else 0.0
        raise StepFailure(f"integration failed: {solution.message}", {"t": t_last})

    states = solution.y.T
    energies = system.energy(states[:, :2], states[:, 2:])
    drift = float(np.max(np.abs(energies - energies[0])))
    fired = {}
    if named:
        for name, t_ev, y_ev in zip(named, solution.t_events, solution.y_events):
            fired[name] = (np.asarray(t_ev), np.asarray(y_ev).reshape(-1, 4))
    logger.debug("flow: %d steps, t_end=%.6g, drift=%.3e", len(solution.t), solution.t[-1], drift)
    return Trajectory(t=solution.t, states=states, tol=tol, energy_drift=drift, events=fired)


def state_at_energy(system: MagneticSystem, q: ArrayLike, vx: float, k: float, sign: float = 1.0) -> Optional[State]:
    """The state at q with the given vx and energy k whose vy has the sign of ``sign``."""
    point = np.asarray(q, dtype=float)
    g = system.chart.metric(point)
    a, b, c = g[1, 1], 2.0 * g[0, 1] * vx, g[0, 0] * vx * vx - 2.0 * k
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return None
    root = (-b + np.copysign(np.sqrt(disc), sign)) / (2.0 * a)
    if root == 0 or np.sign(root) != np.sign(sign):
        return None
    return State.of(point, [vx, root])


def turning_point_accelerations(
    system: MagneticSystem, s0: State, duration: float, tol: float = 1e-9
) -> tuple[Array, Array]:
    """
    The x-accelerations at every zero of vx along the trajectory from ``s0``.

    Returns (times, accelerations).
    """
    rhs = geodesic_rhs(system)
    trajectory = flow(system, s0, duration, tol, events={"vx_zero": make_event(lambda _t, s: s[2])})
    times, states = trajectory.events["vx_zero"]
    accelerations = np.array([rhs(0.0, s)[2] for s in states])
    return times, accelerations


def sample_energy_states(
    system: MagneticSystem,
    k: float,
    count: int,
    x_range: tuple[float, float],
    seed: int = 0,
) -> Sequence[State]:
    """Random states of energy k with x uniform in ``x_range`` and random direction."""
    rng = np.random.default_rng(seed)
    states: list[State] = []
    while len(states) < count:
        x = rng.uniform(*x_range)
        y = rng.uniform(0.0, 1.0)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        q = np.array([x, y])
        g = system.chart.metric(q)
        direction = np.array([np.cos(angle), np.sin(angle)])
        speed = np.sqrt(2.0 * k / (direction @ g @ direction))
        states.append(State.of(q, speed * direction))
    return states
