import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.common.exceptions import InvalidArgument
from src.loopspace import (
    DiscreteLoop,
    PenaltyFamily,
    PenaltyProfile,
    TangentPerturbation,
    action,
    critical_energy,
    el_residual,
    gradient,
    hessian,
    iterate_loop,
    loop_length,
    minimal_length,
    momentum_jump,
    penalized_action,
    resample_loop,
    rotate_loop,
    speed_residual,
)
from tests.conftest import BUMP_K, FLAT_K, random_loop

STEP = 1e-6


def numeric_gradient(fn, vector: np.ndarray) -> np.ndarray:
    out = np.empty_like(vector)
    for i in range(vector.size):
        ahead, behind = vector.copy(), vector.copy()
        ahead[i] += STEP
        behind[i] -= STEP
        out[i] = (fn(ahead) - fn(behind)) / (2 * STEP)
    return out


def check_derivatives(system, loop, k, penalty=None) -> None:
    def value(vector):
        candidate = DiscreteLoop.from_vector(vector, loop.winding)
        base = action(system, candidate, k)
        return base if penalty is None else penalized_action(system, candidate, k, penalty)

    def grad(vector):
        return gradient(system, DiscreteLoop.from_vector(vector, loop.winding), k, penalty).as_vector()

    vector = loop.as_vector()
    exact = grad(vector)
    approx = numeric_gradient(value, vector)
    assert np.linalg.norm(exact - approx) <= 1e-6 * max(1.0, np.linalg.norm(exact))

    second = hessian(system, loop, k, penalty)
    columns = np.empty_like(second)
    for i in range(vector.size):
        ahead, behind = vector.copy(), vector.copy()
        ahead[i] += STEP
        behind[i] -= STEP
        columns[:, i] = (grad(ahead) - grad(behind)) / (2 * STEP)
    assert np.max(np.abs(second - columns)) <= 1e-5 * max(1.0, np.max(np.abs(second)))


@pytest.mark.parametrize("r", [-5.0, 0.0, 1.0])
@pytest.mark.parametrize("k", [0.45, 1.0])
def test_appendix_circle_action(appendix, r, k):
    loop = DiscreteLoop.circle(r, -1, 1.0, 512)
    expected = 0.5 * (1 + np.exp(r)) ** 2 - np.exp(r) - 1 + k
    assert action(appendix, loop, k) == pytest.approx(expected, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("name", ["appendix", "flat", "bump"])
def test_derivatives_match_finite_differences(systems, name):
    rng = np.random.default_rng(7)
    for _ in range(3):
        check_derivatives(systems[name], random_loop(rng, size=12), k=0.8)


def test_derivatives_with_active_penalty(bump):
    rng = np.random.default_rng(5)
    loop = random_loop(rng, size=10)
    nodes = loop.nodes.copy()
    nodes[0, 0] = 0.9
    penalty = PenaltyFamily(sigma=0.4, profile=PenaltyProfile.QUARTIC)
    check_derivatives(bump, loop.with_nodes(nodes), 1.0, penalty)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["appendix", "flat", "bump"])
def test_derivatives_on_many_loops(systems, name):
    rng = np.random.default_rng(2024)
    for _ in range(100):
        winding = int(rng.choice([-2, -1, 1, 2]))
        check_derivatives(systems[name], random_loop(rng, size=16, winding=winding), rng.uniform(0.2, 2.0))


def test_bump_circle_is_critical(bump, bump_orbit):
    grad = gradient(bump, bump_orbit, BUMP_K)
    assert np.max(np.abs(grad.xi)) < 1e-12
    assert abs(grad.alpha) < 1e-12
    assert np.max(el_residual(bump, bump_orbit, BUMP_K)) < 1e-10
    assert speed_residual(bump, bump_orbit, BUMP_K) < 1e-12
    assert action(bump, bump_orbit, BUMP_K) == pytest.approx(np.sqrt(2.0) + 0.5)


def test_flat_circle_is_critical(flat, flat_orbit):
    grad = gradient(flat, flat_orbit, FLAT_K)
    assert grad.norm() < 1e-12
    assert critical_energy(flat, flat_orbit) == pytest.approx(FLAT_K)
    assert action(flat, flat_orbit, FLAT_K) == pytest.approx(1.0)
    assert loop_length(flat, flat_orbit) == pytest.approx(1.0)


def test_off_crest_circle_is_not_critical(bump):
    loop = DiscreteLoop.circle(0.4, 1, 1.0 / np.sqrt(2.0), 32)
    assert np.max(el_residual(bump, loop, BUMP_K)) > 1e-3


def test_speed_residual_needs_positive_energy(flat, flat_orbit):
    with pytest.raises(InvalidArgument):
        speed_residual(flat, flat_orbit, 0.0)


def test_penalty_profile_values():
    cubic = PenaltyFamily(sigma=1.0)
    points = np.array([[2.5, 7.0], [-2.5, 0.0], [0.5, 3.0]])
    assert_allclose(cubic.value(points), [3.375, 3.375, 0.0])
    assert_allclose(cubic.gradient(points), [[6.75, 0.0], [-6.75, 0.0], [0.0, 0.0]])
    assert_allclose(cubic.hessian(points)[:, 0, 0], [9.0, 9.0, 0.0])
    assert np.all(cubic.hessian(points)[:, 1, 1] == 0.0)

    quartic = PenaltyFamily(sigma=1.0, center=np.array([1.0, 0.0]), profile=PenaltyProfile.QUARTIC)
    assert quartic.power == 4
    assert float(quartic.value([3.0, 0.0])) == pytest.approx(1.0)
    assert float(quartic.value([-1.0, 9.0])) == pytest.approx(1.0)


def test_penalty_activity_and_validation():
    penalty = PenaltyFamily(sigma=2.0)
    nodes = np.array([[0.5, 0.0], [1.5, 0.5]])
    assert not penalty.is_active(nodes)
    assert penalty.is_active(nodes, margin=1.0)
    with pytest.raises(InvalidArgument):
        PenaltyFamily(sigma=0.0)


def test_penalty_only_touches_the_base_node(flat, flat_orbit):
    shifted = flat_orbit.with_nodes(flat_orbit.nodes + np.array([3.0, 0.0]))
    penalty = PenaltyFamily(sigma=2.0)
    plain = gradient(flat, shifted, FLAT_K)
    penalized = gradient(flat, shifted, FLAT_K, penalty)
    assert_allclose(penalized.xi[0] - plain.xi[0], [3.0, 0.0])
    assert_allclose(penalized.xi[1:], plain.xi[1:])
    assert penalized_action(flat, shifted, FLAT_K, penalty) == pytest.approx(1.0 + 1.0)

    jump, target = momentum_jump(flat, shifted, penalty)
    assert_allclose(jump, 0.0, atol=1e-12)
    assert_allclose(target, [-3.0, 0.0])


def test_rotation_and_iteration(appendix):
    loop = random_loop(np.random.default_rng(3), size=12, winding=-1)
    k = 0.7
    base = action(appendix, loop, k)
    rotated = rotate_loop(loop, 5)
    assert rotated.winding == loop.winding
    assert_allclose(rotated.nodes[0], loop.nodes[5])
    assert action(appendix, rotated, k) == pytest.approx(base, rel=1e-12)
    assert_allclose(rotate_loop(loop, loop.size).nodes, loop.nodes + loop.closing_shift)

    tripled = iterate_loop(loop, 3)
    assert (tripled.size, tripled.winding) == (36, -3)
    assert tripled.period == pytest.approx(3 * loop.period)
    assert action(appendix, tripled, k) == pytest.approx(3 * base, rel=1e-12)
    assert iterate_loop(loop, 1) is loop
    with pytest.raises(InvalidArgument):
        iterate_loop(loop, 0)


def test_resampled_circle_stays_a_circle(bump_orbit):
    finer = resample_loop(bump_orbit, 64)
    assert finer.size == 64
    assert_allclose(finer.nodes, DiscreteLoop.circle(0.0, 1, bump_orbit.period, 64).nodes, atol=1e-12)


def test_payload(bump_orbit):
    payload = bump_orbit.to_payload()
    assert payload["N"] == 32
    assert payload["winding"] == 1
    assert_allclose(DiscreteLoop.from_payload(payload).nodes, bump_orbit.nodes)
    with pytest.raises(InvalidArgument):
        DiscreteLoop.from_payload({**payload, "N": 31})


def test_loop_validation():
    with pytest.raises(InvalidArgument):
        DiscreteLoop(np.zeros((4, 2)), 1.0, 1)
    with pytest.raises(InvalidArgument):
        DiscreteLoop(np.zeros((8, 3)), 1.0, 1)
    with pytest.raises(InvalidArgument):
        DiscreteLoop(np.zeros((8, 2)), -1.0, 1)
    with pytest.raises(InvalidArgument):
        DiscreteLoop(np.full((8, 2), np.nan), 1.0, 1)


def test_tangent_perturbation_vector_layout():
    tangent = TangentPerturbation(np.arange(16.0).reshape(8, 2), 2.5)
    assert tangent.dimension == 17
    assert tangent.as_vector()[-1] == 2.5
    assert_allclose(TangentPerturbation.from_vector(tangent.as_vector()).xi, tangent.xi)


def test_minimal_length(flat, appendix):
    assert minimal_length(flat, 1, size=32) == pytest.approx(1.0, rel=1e-6)
    assert minimal_length(flat, -2, size=32) == pytest.approx(2.0, rel=1e-6)
    assert minimal_length(flat, 0) == 0.0
    assert minimal_length(appendix, 1, size=32) == pytest.approx(1.0, abs=1e-4)
