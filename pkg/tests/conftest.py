import numpy as np
import pytest

from udgdom.core import Graph, PointInstance
from udgdom.instances import GeneratorConfig, generate

T = 1000


def star(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def small_udg(seed: int, n: int, flowers: int = 0, density: float = 1.5) -> PointInstance:
    """A random UDG with about ``density`` points per unit-threshold square."""
    side = max(T, int(T * (n / density) ** 0.5))
    return generate(GeneratorConfig(n, side, T, seed=seed, flowers=flowers))


def brute_edges(inst: PointInstance) -> set[tuple[int, int]]:
    """All-pairs reference adjacency, exact in int64."""
    p = np.array(inst.points, dtype=np.int64).reshape(-1, 2)
    dx = p[:, None, 0] - p[None, :, 0]
    dy = p[:, None, 1] - p[None, :, 1]
    close = dx * dx + dy * dy <= inst.threshold**2
    u, v = np.nonzero(np.triu(close, 1))
    return set(zip(u.tolist(), v.tolist()))


@pytest.fixture
def k15() -> Graph:
    return star(5)
