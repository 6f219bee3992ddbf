"""Grid index, adjacency construction, disk intersections and geometric MIS.

All adjacency decisions are made on exact integers. Floating point appears
only inside :class:`Region`, where it steers a search whose answers are then
settled by integer distance checks.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterator, Sequence

from udgdom.core import Graph, InvariantError, OrderPolicy, PointInstance

Point = tuple[int, int]

# neighbor cells scanned once per unordered cell pair
_FORWARD = ((1, -1), (1, 0), (1, 1), (0, 1))
_VICINITY = tuple((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1))

EPS = 1e-9


@dataclass(frozen=True)
class GridIndex:
    """Points bucketed into square cells whose side equals the threshold."""

    cell_size: int
    cells: dict[tuple[int, int], list[int]]
    cell_of: tuple[tuple[int, int], ...]

    def vicinity(self, cell: tuple[int, int]) -> Iterator[int]:
        """Ids of all points in the 3x3 block of cells around ``cell``."""
        cx, cy = cell
        cells = self.cells
        for dx, dy in _VICINITY:
            ids = cells.get((cx + dx, cy + dy))
            if ids:
                yield from ids


def build_grid(inst: PointInstance) -> GridIndex:
    t = inst.threshold
    cells: dict[tuple[int, int], list[int]] = {}
    cell_of = []
    for i, (x, y) in enumerate(inst.points):
        key = (x // t, y // t)
        cell_of.append(key)
        bucket = cells.get(key)
        if bucket is None:
            cells[key] = [i]
        else:
            bucket.append(i)
    return GridIndex(t, cells, tuple(cell_of))


def build_adjacency(inst: PointInstance, grid: GridIndex | None = None) -> Graph:
    """Unit disk graph of ``inst`` via a scan of neighboring grid cells."""
    if grid is None:
        grid = build_grid(inst)
    pts = inst.points
    t2 = inst.threshold * inst.threshold
    nbrs: list[list[int]] = [[] for _ in range(inst.n)]
    cells = grid.cells
    for (cx, cy), ids in cells.items():
        k = len(ids)
        for a in range(k):
            i = ids[a]
            xi, yi = pts[i]
            for b in range(a + 1, k):
                j = ids[b]
                xj, yj = pts[j]
                dx = xi - xj
                dy = yi - yj
                if dx * dx + dy * dy <= t2:
                    nbrs[i].append(j)
                    nbrs[j].append(i)
        for ox, oy in _FORWARD:
            other = cells.get((cx + ox, cy + oy))
            if not other:
                continue
            for i in ids:
                xi, yi = pts[i]
                ni = nbrs[i]
                for j in other:
                    xj, yj = pts[j]
                    dx = xi - xj
                    dy = yi - yj
                    if dx * dx + dy * dy <= t2:
                        ni.append(j)
                        nbrs[j].append(i)
    return Graph(inst.n, tuple(tuple(sorted(s)) for s in nbrs))


def geometric_mis(
    inst: PointInstance, grid: GridIndex | None = None, order: OrderPolicy = OrderPolicy()
) -> frozenset[int]:
    """Maximal independent set by repeatedly picking a point and deleting its vicinity."""
    if grid is None:
        grid = build_grid(inst)
    pts = inst.points
    t2 = inst.threshold * inst.threshold
    alive = [True] * inst.n
    chosen: list[int] = []
    per_cell: dict[tuple[int, int], int] = {}
    for p in order.order(inst.n):
        if not alive[p]:
            continue
        chosen.append(p)
        cell = grid.cell_of[p]
        per_cell[cell] = per_cell.get(cell, 0) + 1
        if per_cell[cell] > 4:
            raise InvariantError(f"cell {cell} holds more than 4 independent points")
        px, py = pts[p]
        for q in grid.vicinity(cell):
            if alive[q]:
                qx, qy = pts[q]
                dx = px - qx
                dy = py - qy
                if dx * dx + dy * dy <= t2:
                    alive[q] = False
    return frozenset(chosen)


# ---------------------------------------------------------------------------
# Intersection of equal-radius disks


@dataclass(frozen=True)
class Region:
    """Common intersection of the disks of radius ``radius`` around ``centers``.

    ``arcs`` are ``(center_index, start_angle)`` pairs: the boundary seen from
    the interior point ``origin`` (threshold-normalized coordinates relative
    to ``centers[0]``) is the arc of ``centers[center_index]`` from its start
    angle up to the next arc's start angle, or up to pi for the last one.
    Start angles ascend from -pi, so an arc crossing the cut at pi shows up
    both first and last.
    """

    centers: tuple[Point, ...]
    radius: int
    empty: bool
    degenerate: bool
    origin: tuple[float, float]
    arcs: tuple[tuple[int, float], ...]
    arc_starts: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arc_starts", tuple(a for _, a in self.arcs))


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_indices(points: Sequence[Point]) -> list[int]:
    """Indices of the strictly convex hull vertices in counter-clockwise order."""
    idx = sorted(range(len(points)), key=lambda i: points[i])
    uniq: list[int] = []
    for i in idx:
        if not uniq or points[uniq[-1]] != points[i]:
            uniq.append(i)
    if len(uniq) <= 2:
        return uniq
    lower: list[int] = []
    for i in uniq:
        while len(lower) >= 2 and _cross(points[lower[-2]], points[lower[-1]], points[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(uniq):
        while len(upper) >= 2 and _cross(points[upper[-2]], points[upper[-1]], points[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _enclosing_circle(pts: list[tuple[float, float]]) -> tuple[float, float, float]:
    """Smallest enclosing circle (Welzl's incremental form), fixed shuffle."""
    shuffled = list(pts)
    random.Random(0x5EED).shuffle(shuffled)
    c = None
    for i, p in enumerate(shuffled):
        if c is None or not _in_circle(c, p):
            c = (p[0], p[1], 0.0)
            for j in range(i):
                q = shuffled[j]
                if not _in_circle(c, q):
                    c = _diameter_circle(p, q)
                    for k in range(j):
                        r = shuffled[k]
                        if not _in_circle(c, r):
                            c = _circumcircle(p, q, r) or c
    return c


def _in_circle(c, p) -> bool:
    return math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1 + 1e-14) + 1e-14


def _diameter_circle(a, b):
    cx, cy = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    return (cx, cy, max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1])))


def _circumcircle(a, b, c):
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2
    if d == 0:
        return None
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    x = ox + (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    y = oy + (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    r = max(math.hypot(x - p[0], y - p[1]) for p in (a, b, c))
    return (x, y, r)


def _ray_exit(o, c, theta: float) -> float:
    """Distance from ``o`` (inside the unit disk at ``c``) to its circle along ``theta``."""
    ux, uy = math.cos(theta), math.sin(theta)
    fx, fy = o[0] - c[0], o[1] - c[1]
    b = fx * ux + fy * uy
    return -b + math.sqrt(max(0.0, b * b - (fx * fx + fy * fy - 1.0)))


def _crossing_angles(o, a, b) -> list[float]:
    """Angles, seen from ``o``, of the intersection points of unit circles ``a`` and ``b``."""
    ux, uy = b[0] - a[0], b[1] - a[1]
    d = math.hypot(ux, uy)
    if d == 0 or d > 2:
        return []
    h = math.sqrt(max(0.0, 1.0 - d * d / 4))
    mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    return [
        math.atan2(my + s * h * ux / d - o[1], mx - s * h * uy / d - o[0]) for s in (1.0, -1.0)
    ]


def _merge_envelopes(o, pts, e1, e2):
    """Pointwise minimum of two polar envelopes; each is ``[(start, center), ...]``
    covering [-pi, pi) with the first start at -pi."""
    cuts = sorted({a for a, _ in e1} | {a for a, _ in e2})
    cuts.append(math.pi)
    out: list[tuple[float, int]] = []
    i = j = 0
    for lo, hi in zip(cuts, cuts[1:]):
        while i + 1 < len(e1) and e1[i + 1][0] <= lo:
            i += 1
        while j + 1 < len(e2) and e2[j + 1][0] <= lo:
            j += 1
        a, b = e1[i][1], e2[j][1]
        pieces = [lo] + sorted(t for t in _crossing_angles(o, pts[a], pts[b]) if lo < t < hi) + [hi]
        for p, q in zip(pieces, pieces[1:]):
            mid = (p + q) / 2
            win = a if _ray_exit(o, pts[a], mid) <= _ray_exit(o, pts[b], mid) else b
            if not out or out[-1][1] != win:
                out.append((p, win))
    return out


def _envelope(o, pts, ids):
    if len(ids) == 1:
        return [(-math.pi, ids[0])]
    mid = len(ids) // 2
    return _merge_envelopes(o, pts, _envelope(o, pts, ids[:mid]), _envelope(o, pts, ids[mid:]))


def disks_common_intersection(centers: Sequence[Point], radius: int) -> Region:
    """Intersection of the disks of radius ``radius`` around ``centers``.

    Interior centers never contribute to the boundary, so only hull vertices
    enter the divide-and-conquer merge of polar envelopes around an interior
    point. Two circles cross at most twice, so each merge is linear and the
    whole build is O(k log k).
    """
    if not centers:
        raise ValueError("need at least one center")
    centers = tuple((int(x), int(y)) for x, y in centers)
    rx, ry = centers[0]
    norm = [((x - rx) / radius, (y - ry) / radius) for x, y in centers]
    hull = convex_hull_indices(centers)
    ox, oy, mec = _enclosing_circle([norm[i] for i in hull])
    origin = (ox, oy)
    if mec > 1 + EPS:
        return Region(centers, radius, True, False, origin, ())
    if mec >= 1 - EPS:
        # tangency or near-tangency: the region is (almost) a single point
        return Region(centers, radius, False, True, origin, ())
    env = _envelope(origin, norm, hull)
    return Region(centers, radius, False, False, origin, tuple((c, a) for a, c in env))


def _within(p: Point, c: Point, r2: int) -> bool:
    dx = p[0] - c[0]
    dy = p[1] - c[1]
    return dx * dx + dy * dy <= r2


def region_contains(region: Region, p: Point) -> bool:
    """Exact membership of integer point ``p`` in ``region``.

    The arc found by angular binary search gives a certified rejection when
    ``p`` lies outside its disk; acceptances are confirmed against every
    center.
    """
    r2 = region.radius * region.radius
    if region.empty:
        return False
    centers = region.centers
    if not region.degenerate:
        rx, ry = centers[0]
        px = (p[0] - rx) / region.radius - region.origin[0]
        py = (p[1] - ry) / region.radius - region.origin[1]
        arcs = region.arcs
        j = bisect_right(region.arc_starts, math.atan2(py, px)) - 1
        if not _within(p, centers[arcs[j][0]], r2):
            return False
    return all(_within(p, c, r2) for c in centers)
