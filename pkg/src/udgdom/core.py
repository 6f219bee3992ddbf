"""Graphs, point instances, vertex sets and the predicates shared by every solver.

Vertex ids are dense and 0-based. For a :class:`PointInstance` the id of a
vertex is the index of its point, so a graph built from points shares ids with
the instance it came from. Vertex sets are plain ``frozenset[int]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class UDGError(Exception):
    """Base class for all package errors."""


class InputError(UDGError, ValueError):
    """Malformed or out-of-range input."""


class ParseError(InputError):
    """A text file could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(UDGError, AssertionError):
    """An internal invariant failed (a bug, or an input outside the model)."""


class StructureError(InvariantError):
    """The graph contains a structure no unit disk graph can contain."""


class BudgetError(UDGError):
    """An exact search exceeded its size cap or node budget."""


@dataclass(frozen=True)
class PointInstance:
    """Integer points plus an integer adjacency threshold.

    Two points are adjacent iff their squared distance is at most
    ``threshold**2``. Duplicate points are allowed (they are adjacent twins).
    """

    points: tuple[tuple[int, int], ...]
    threshold: int

    def __post_init__(self):
        pts = tuple((int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if not isinstance(self.threshold, int) or isinstance(self.threshold, bool):
            raise InputError("threshold must be an integer")
        if not 1 <= self.threshold <= INT64_MAX:
            raise InputError(f"threshold out of range: {self.threshold}")
        for i, (x, y) in enumerate(pts):
            if not (INT64_MIN <= x <= INT64_MAX and INT64_MIN <= y <= INT64_MAX):
                raise InputError(f"point {i} does not fit in 64-bit coordinates")

    @property
    def n(self) -> int:
        return len(self.points)

    def adjacent(self, u: int, v: int) -> bool:
        (x1, y1), (x2, y2) = self.points[u], self.points[v]
        dx, dy = x1 - x2, y1 - y2
        return dx * dx + dy * dy <= self.threshold * self.threshold


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph as sorted adjacency tuples."""

    n: int
    adj: tuple[tuple[int, ...], ...]
    m: int = field(init=False)

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise InputError("adjacency length does not match n")
        total = 0
        for v, nbrs in enumerate(self.adj):
            prev = -1
            for u in nbrs:
                if u <= prev:
                    raise InputError(f"neighbors of {v} not strictly ascending")
                if u == v:
                    raise InputError(f"self-loop at {v}")
                if not 0 <= u < self.n:
                    raise InputError(f"neighbor {u} of {v} out of range")
                prev = u
            total += len(nbrs)
        # symmetry: every arc must have its reverse
        for v, nbrs in enumerate(self.adj):
            for u in nbrs:
                if u > v and not _sorted_contains(self.adj[u], v):
                    raise InputError(f"edge {v}-{u} is not symmetric")
        object.__setattr__(self, "m", total // 2)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph; repeated edges are merged, self-loops rejected."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def closed_neighborhood(self, v: int) -> set[int]:
        s = set(self.adj[v])
        s.add(v)
        return s


def _sorted_contains(seq: Sequence[int], x: int) -> bool:
    from bisect import bisect_left

    i = bisect_left(seq, x)
    return i < len(seq) and seq[i] == x


@dataclass(frozen=True)
class Corona:
    """Five solution vertices sharing a neighbor outside the solution.

    ``petals`` are sorted; ``cores`` lists, in ascending id order, every
    non-solution vertex whose solution-neighborhood is exactly ``petals``.
    """

    petals: tuple[int, int, int, int, int]
    cores: tuple[int, ...]

    def __post_init__(self):
        if len(self.petals) != 5 or list(self.petals) != sorted(set(self.petals)):
            raise InvariantError(f"corona needs 5 sorted distinct petals: {self.petals}")
        if not self.cores:
            raise InvariantError("corona without a core")


@dataclass(frozen=True)
class Solution:
    """A vertex set produced by a solver, with how it was produced.

    ``sizes`` holds the solution size at the start of every loop iteration;
    the last iteration changes nothing, so the last entry is the final size.
    """

    vertices: frozenset[int]
    algorithm: str
    iterations: int = 0
    order: str = "id"
    sizes: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.vertices)

    def sorted(self) -> list[int]:
        return sorted(self.vertices)


def check_ids(g: Graph, s: Iterable[int]) -> None:
    for v in s:
        if not isinstance(v, int) or not 0 <= v < g.n:
            raise InputError(f"vertex id {v!r} out of range for n={g.n}")


def is_dominating(g: Graph, s: Iterable[int]) -> bool:
    s = frozenset(s)
    check_ids(g, s)
    adj = g.adj
    for v in range(g.n):
        if v in s:
            continue
        for u in adj[v]:
            if u in s:
                break
        else:
            return False
    return True


def undominated(g: Graph, s: Iterable[int]) -> list[int]:
    """Vertices neither in ``s`` nor adjacent to it."""
    s = frozenset(s)
    check_ids(g, s)
    return [v for v in range(g.n) if v not in s and not any(u in s for u in g.adj[v])]


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    s = frozenset(s)
    check_ids(g, s)
    return not any(u in s for v in s for u in g.adj[v])


def hop_distance_within(g: Graph, u: int, v: int, d: int) -> bool:
    """True iff ``v`` is reachable from ``u`` in at most ``d`` hops."""
    check_ids(g, (u, v))
    if d < 0:
        raise InputError("distance bound must be nonnegative")
    if u == v:
        return True
    return v in ball(g, u, d)


def ball(g: Graph, src: int, radius: int) -> dict[int, int]:
    """Hop distances from ``src`` for every vertex within ``radius`` hops."""
    dist = {src: 0}
    queue = deque([src])
    adj = g.adj
    while queue:
        x = queue.popleft()
        dx = dist[x]
        if dx == radius:
            continue
        for y in adj[x]:
            if y not in dist:
                dist[y] = dx + 1
                queue.append(y)
    return dist


@dataclass(frozen=True)
class OrderPolicy:
    """How "arbitrary" choices are resolved.

    ``seed is None`` means ascending vertex id. Otherwise vertices are ranked
    by a permutation drawn from PCG64 raw 64-bit output (ties broken by id),
    which is stable across platforms and numpy versions.
    """

    seed: int | None = None

    def __post_init__(self):
        if self.seed is not None and (
            not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0
        ):
            raise InputError(f"order seed must be a nonnegative integer, got {self.seed!r}")

    @classmethod
    def parse(cls, text: str) -> "OrderPolicy":
        if text == "id":
            return cls()
        if text.startswith("seed:"):
            try:
                return cls(int(text[5:]))
            except ValueError:
                pass
        raise InputError(f"bad order policy {text!r}; expected 'id' or 'seed:<int>'")

    def __str__(self) -> str:
        return "id" if self.seed is None else f"seed:{self.seed}"

    def order(self, n: int) -> list[int]:
        if self.seed is None:
            return list(range(n))
        keys = np.random.PCG64(self.seed).random_raw(n)
        return np.lexsort((np.arange(n), keys)).tolist()

    def ranks(self, n: int) -> list[int]:
        """``ranks[v]`` is the position of ``v`` in :meth:`order`."""
        if self.seed is None:
            return list(range(n))
        rank = [0] * n
        for i, v in enumerate(self.order(n)):
            rank[v] = i
        return rank
