import numpy as np
import pytest

from src.geometry import MagneticSystem, preset
from src.loopspace import DiscreteLoop

BUMP_K = 1.0
FLAT_K = 0.5


@pytest.fixture(scope="session")
def appendix() -> MagneticSystem:
    return preset("appendix-cylinder")


@pytest.fixture(scope="session")
def flat() -> MagneticSystem:
    return preset("flat-cylinder")


@pytest.fixture(scope="session")
def bump() -> MagneticSystem:
    return preset("bump-cylinder")


@pytest.fixture(scope="session")
def systems(appendix, flat, bump) -> dict[str, MagneticSystem]:
    return {"appendix": appendix, "flat": flat, "bump": bump}


@pytest.fixture
def bump_orbit() -> DiscreteLoop:
    """x = 0 traversed once at energy 1: T = 1/sqrt(2k)."""
    return DiscreteLoop.circle(0.0, 1, 1.0 / np.sqrt(2.0 * BUMP_K), 32)


@pytest.fixture
def flat_orbit() -> DiscreteLoop:
    """Unit-length geodesic at energy 1/2, so T = 1."""
    return DiscreteLoop.circle(0.0, 1, 1.0, 32)


def random_loop(rng: np.random.Generator, size: int = 16, spread: float = 0.3, winding: int = 1) -> DiscreteLoop:
    base = DiscreteLoop.circle(rng.uniform(-0.5, 0.5), winding, rng.uniform(0.5, 2.0), size)
    return base.with_nodes(base.nodes + spread / size * rng.standard_normal(base.nodes.shape))


@pytest.fixture
def make_random_loop():
    return random_loop
