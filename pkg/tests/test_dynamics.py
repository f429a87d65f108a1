import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from src.common.exceptions import InvalidArgument, NoReturn, NotCritical
from src.dynamics import (
    BlockKind,
    HamiltonianJet,
    SectionGrid,
    State,
    flow,
    geodesic_rhs,
    legendre,
    legendre_inverse,
    loop_from_section_point,
    monodromy,
    poincare_scan,
    sample_energy_states,
    seed_loops,
    state_at_energy,
    turning_point_accelerations,
)
from src.loopspace import DiscreteLoop


def test_flat_flow_is_a_straight_line(flat):
    start = State.of([0.1, 0.2], [0.6, 0.8])
    trajectory = flow(flat, start, 3.0, tol=1e-11)
    frame = trajectory.to_frame(flat)
    assert_allclose(frame["x"], 0.1 + 0.6 * frame["t"], atol=1e-9)
    assert_allclose(frame["y"], 0.2 + 0.8 * frame["t"], atol=1e-9)
    assert_allclose(frame["vx"], 0.6, atol=1e-9)
    assert trajectory.energy_drift < 1e-9


def test_trajectory_frame_columns(bump):
    trajectory = flow(bump, State.of([0.3, 0.0], [0.2, 1.0]), 1.0)
    assert list(trajectory.to_frame(bump).columns) == ["t", "x", "y", "vx", "vy", "E", "p_x", "p_y"]


def test_bump_conserves_y_momentum(bump):
    start = state_at_energy(bump, [0.3, 0.0], 0.2, 1.0)
    trajectory = flow(bump, start, 10.0, tol=1e-11)
    frame = trajectory.to_frame(bump)
    assert np.ptp(frame["p_y"]) < 1e-8
    assert np.ptp(frame["E"]) < 1e-8


def test_energy_is_conserved_on_appendix(appendix):
    start = state_at_energy(appendix, [0.0, 0.0], 0.5, 1.0)
    trajectory = flow(appendix, start, 5.0, tol=1e-10)
    assert trajectory.energy_drift < 1e-7


def test_reversed_field_retraces_the_orbit(bump):
    start = State.of([0.4, 0.0], [0.3, 0.9])
    forward = flow(bump, start, 2.0, tol=1e-11).final
    back = flow(bump.with_reversed_field(), State.of(forward.q, -forward.v), 2.0, tol=1e-11).final
    assert_allclose(back.q, start.q, atol=1e-8)
    assert_allclose(back.v, -start.v, atol=1e-8)


def test_flow_rejects_bad_arguments(flat):
    with pytest.raises(InvalidArgument):
        flow(flat, State.of([0, 0], [1, 0]), -1.0)


def test_state_at_energy(appendix):
    state = state_at_energy(appendix, [0.5, 0.0], 0.3, 1.0, sign=-1.0)
    assert state.energy(appendix) == pytest.approx(1.0)
    assert state.v[1] < 0
    # |vx| above sqrt(2k / g11) leaves no room for vy
    assert state_at_energy(appendix, [0.5, 0.0], 2.0, 1.0) is None


def test_sampled_states_have_the_energy(appendix):
    states = sample_energy_states(appendix, 0.7, 25, (-6.0, 3.0), seed=3)
    assert len(states) == 25
    assert_allclose([s.energy(appendix) for s in states], 0.7)
    assert all(-6.0 <= s.q[0] <= 3.0 for s in states)


def test_turning_points_are_minima_above_one_half(appendix):
    # x'' = e^x vy (beta vy + 1) at vx = 0, positive once sqrt(2k) > 1
    for state in sample_energy_states(appendix, 1.0, 8, (-6.0, 3.0), seed=11):
        _, accelerations = turning_point_accelerations(appendix, state, 15.0)
        assert np.all(accelerations > 0)


def test_turning_point_sign_flips_below_one_half(appendix):
    start = State.of([0.0, 0.0], [0.0, -np.sqrt(2 * 0.3) / 2.0])
    rhs = geodesic_rhs(appendix)
    assert rhs(0.0, start.as_vector())[2] < 0


def test_hamiltonian_vector_field_matches_geodesic_flow(appendix):
    q = np.array([0.3, 0.1])
    v = np.array([0.4, -0.2])
    p = legendre(appendix, q, v)
    jet = HamiltonianJet(appendix)
    z = np.concatenate([q, p])
    assert_allclose(jet.vector_field(z)[:2], v, atol=1e-12)
    assert_allclose(legendre_inverse(appendix, q, p), v, atol=1e-12)
    assert jet.value(z) == pytest.approx(appendix.energy(q, v))

    # p' from the Hamiltonian equals d/dt (g v + theta) along the flow
    h = 1e-6
    rhs = geodesic_rhs(appendix)
    s = np.concatenate([q, v])
    ahead, behind = s + h * rhs(0.0, s), s - h * rhs(0.0, s)
    p_dot = (legendre(appendix, ahead[:2], ahead[2:]) - legendre(appendix, behind[:2], behind[2:])) / (2 * h)
    assert_allclose(jet.vector_field(z)[2:], p_dot, atol=1e-6)


def test_flat_monodromy(flat, flat_orbit):
    mono = monodromy(flat, flat_orbit, 0.5)
    expected = np.block([[np.eye(2), np.eye(2)], [np.zeros((2, 2)), np.eye(2)]])
    assert_allclose(mono.matrix, expected, atol=1e-8)
    assert mono.kernel_dimension() == 2
    assert mono.poincare_kernel_dimension() == 1
    assert mono.kind() == BlockKind.PARABOLIC
    assert mono.symplectic_defect < 1e-8


def test_bump_monodromy_is_a_rotation(bump, bump_orbit):
    # transverse oscillation x'' = a''(0) y' x with a''(0) = -1 and y' = sqrt(2): angle 2^(-1/4)
    mono = monodromy(bump, bump_orbit, 1.0)
    assert mono.kind() == BlockKind.ELLIPTIC
    assert mono.trace == pytest.approx(2.0 * np.cos(2.0**-0.25), abs=1e-5)
    assert mono.kernel_dimension() == 1
    assert mono.closing_error < 1e-8
    assert_allclose(np.abs(mono.poincare_eigenvalues), 1.0, atol=1e-6)


def test_monodromy_needs_a_critical_loop(bump):
    loop = DiscreteLoop.circle(0.4, 1, 0.7, 32)
    with pytest.raises(NotCritical):
        monodromy(bump, loop, 1.0)


def test_section_grid_validation():
    with pytest.raises(ValidationError):
        SectionGrid(x_min=1.0, x_max=0.0)
    with pytest.raises(ValidationError):
        SectionGrid(x_min=0.0, x_max=1.0, unknown=3)
    grid = SectionGrid(x_min=0.0, x_max=1.0, nx=3, nv=5)
    assert grid.size == 15
    assert grid.fractions()[2] == 0.0


def test_flat_scan_finds_the_vertical_geodesics(flat):
    grid = SectionGrid(x_min=-1.0, x_max=1.0, nx=3, nv=3)
    result = poincare_scan(flat, 0.5, 1, grid)
    assert sorted(result.fixed_points) == [(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]
    assert result.no_return == 6
    frame = result.to_frame()
    assert list(frame.columns) == ["seed", "x", "vx", "residual", "classification"]
    assert (frame["classification"] == "fixed").sum() == 3


def test_bump_scan_finds_the_crest_orbit(bump):
    grid = SectionGrid(x_min=-0.5, x_max=0.5, nx=3, nv=3)
    result = poincare_scan(bump, 1.0, 1, grid)
    assert any(abs(x) < 1e-6 and abs(vx) < 1e-6 for x, vx in result.fixed_points)


def test_loop_from_section_point_on_flat(flat):
    loop = loop_from_section_point(flat, 0.5, 1, (0.3, 0.0), 16)
    assert loop.winding == 1
    assert loop.period == pytest.approx(1.0, abs=1e-8)
    assert_allclose(loop.nodes[:, 0], 0.3, atol=1e-10)
    assert_allclose(loop.nodes[:, 1], np.arange(16) / 16, atol=1e-8)

    backwards = loop_from_section_point(flat, 0.5, -1, (0.3, 0.0), 16)
    assert_allclose(backwards.nodes[:, 1], -np.arange(16) / 16, atol=1e-8)

    with pytest.raises(InvalidArgument):
        loop_from_section_point(flat, 0.5, 0, (0.3, 0.0), 16)
    with pytest.raises(NoReturn):
        loop_from_section_point(flat, 0.5, 1, (0.0, 0.9), 16, window=(-1.0, 1.0))


def test_seed_loops_from_flat_scan(flat):
    result = poincare_scan(flat, 0.5, 1, SectionGrid(x_min=-1.0, x_max=1.0, nx=3, nv=3))
    loops = seed_loops(flat, result, 16)
    assert sorted(float(loop.nodes[0, 0]) for loop in loops) == pytest.approx([-1.0, 0.0, 1.0])
    assert all(loop.period == pytest.approx(1.0, abs=1e-8) for loop in loops)


def test_appendix_scan_has_no_fixed_points(appendix):
    grid = SectionGrid(x_min=-6.0, x_max=3.0, nx=7, nv=7)
    result = poincare_scan(appendix, 1.0, 1, grid)
    assert result.fixed_points == []


def test_scan_rejects_contractible_class(flat):
    with pytest.raises(InvalidArgument):
        poincare_scan(flat, 0.5, 0, SectionGrid(x_min=0.0, x_max=1.0, nx=1, nv=1))


@pytest.mark.slow
@pytest.mark.parametrize("k", [0.6, 1.0, 2.0])
def test_appendix_scan_full_grid(appendix, k):
    result = poincare_scan(appendix, k, 1, SectionGrid(x_min=-6.0, x_max=3.0), fp_tol=1e-6, workers=4)
    assert len(result.seeds) >= 10_000
    assert result.fixed_points == []


@pytest.mark.slow
def test_appendix_convexity_sweep(appendix):
    for state in sample_energy_states(appendix, 0.75, 100, (-6.0, 3.0), seed=0):
        _, accelerations = turning_point_accelerations(appendix, state, 20.0)
        assert np.all(accelerations > 0)
