"""Instance generation, the two published lower-bound instances, and file I/O.

File formats (decimal integers, single spaces, ``\\n``-terminated lines):

* points:   ``udgp <n> <threshold>`` then ``n`` lines ``<x> <y>``
* graph:    ``udgg <n> <m>`` then ``m`` lines ``<u> <v>`` with ``u < v``
* solution: ``sol <k>`` then ``k`` ascending vertex ids, one per line
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from udgdom.core import INT64_MAX, INT64_MIN, Graph, InputError, ParseError, PointInstance

PAPER_THRESHOLD = 1000001


def _mirrored(rows: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    out = []
    for x, y in rows:
        out.append((x, y))
        out.append((-x, y))
    return out


# r*, cores c*_1..c*_4, witnesses w_1..w_4, then each "remaining" entry as
# (+x, y), (-x, y)
_FIG4 = [
    (0, 0),
    (-2492384, 879081),
    (-1310377, 2686162),
    (1310377, 2686162),
    (2492384, 879081),
    (-492423, 870355),
    (-484809, 874619),
    (484809, 874619),
    (492423, 870355),
] + _mirrored(
    [
        (776025, 3531423),
        (1492384, 879081),
        (999986, 5235),
        (2309705, 2722805),
        (3491646, 917468),
        (3023782, 31960),
        (1776763, 3570742),
        (1840296, 1838114),
        (2022913, -3866),
        (503019, -864274),
        (2957226, 1764474),
        (810377, 1820137),
    ]
)

_FIG6 = [(0, 0), (0, 4500000)] + _mirrored(
    [
        (336577, 3647829),
        (3372414, 3440722),
        (3657983, 1789254),
        (469471, 882947),
        (2857376, 5297889),
        (3887452, 5297889),
        (1043683, 2940723),
        (2506389, 2940723),
        (892089, 1789254),
        (2657983, 1789254),
        (1775036, 1258725),
        (529919, 5348048),
        (997564, 4430244),
        (4605648, 790625),
        (5515150, 1274216),
        (5515150, 2304292),
        (4605648, 2787883),
        (1775036, 2258725),
        (2373785, 4388387),
        (4657983, 1789254),
        (3372414, 4440722),
        (515038, -857167),
        (999780, 20942),
        (4371043, 4388387),
    ]
)

PAPER_INSTANCES = {"fig4": _FIG4, "fig6": _FIG6}

# vertex ids of the named fig4 vertices
FIG4_RELIEVER = 0
FIG4_CORES = (1, 2, 3, 4)
FIG4_WITNESSES = (5, 6, 7, 8)


def paper_instance(name: str) -> PointInstance:
    """``fig4`` (33 points, ratio 4.8) or ``fig6`` (50 points, ratio 4.25)."""
    try:
        pts = PAPER_INSTANCES[name]
    except KeyError:
        raise InputError(f"unknown paper instance {name!r}; choose from {sorted(PAPER_INSTANCES)}")
    return PointInstance(tuple(pts), PAPER_THRESHOLD)


@dataclass(frozen=True)
class GeneratorConfig:
    """Random points in ``[0, box_side]^2``.

    With ``clusters > 0`` points are drawn around uniformly placed cluster
    centers, offset uniformly by at most ``spread`` per axis and clipped to
    the box.

    With ``flowers > 0`` the first points are planted K_{1,5} stars: five
    petals (ids first, so id-order greedy picks them) around a core, and up
    to four extra points just outside each petal. Uniform points fill up the
    remaining ``n``. Uniform instances almost never contain five independent
    neighbors of one vertex, so this is what exercises the reductions.
    """

    n: int
    box_side: int
    threshold: int
    seed: int = 0
    clusters: int = 0
    spread: int = 0
    flowers: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InputError("n must be at least 1")
        if self.threshold < 1:
            raise InputError("threshold must be at least 1")
        if self.box_side < self.threshold:
            raise InputError("box side must be at least the threshold")
        if self.box_side >= 2**62:
            raise InputError("box side too large")
        if self.clusters < 0 or self.spread < 0 or self.flowers < 0:
            raise InputError("clusters, spread and flowers must be nonnegative")
        if self.clusters and self.flowers:
            raise InputError("choose clusters or flowers, not both")
        if 6 * self.flowers > self.n:
            raise InputError("each flower needs 6 points")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must fit in 64 unsigned bits")


def _uniform(bits: np.ndarray, hi: int) -> np.ndarray:
    # modulo bias is below 2**-40 for any box this package accepts
    return (bits % np.uint64(hi + 1)).astype(np.int64)


def _unit(bg: np.random.PCG64) -> float:
    return int(bg.random_raw()) / 2.0**64


def _flowers(cfg: GeneratorConfig, bg: np.random.PCG64) -> tuple[list, list, list]:
    t = cfg.threshold
    petals, cores, extras = [], [], []
    box = cfg.box_side

    def clip(v):
        return min(max(int(round(v)), 0), box)

    for _ in range(cfg.flowers):
        cx, cy = _unit(bg) * box, _unit(bg) * box
        base = _unit(bg) * 2 * math.pi
        ring = []
        for i in range(5):
            ang = base + 2 * math.pi * i / 5 + (_unit(bg) - 0.5) * math.radians(6)
            rad = t * (0.93 + 0.07 * _unit(bg))
            ring.append((clip(cx + rad * math.cos(ang)), clip(cy + rad * math.sin(ang)), ang))
        petals += [(x, y) for x, y, _ in ring]
        cores.append((clip(cx), clip(cy)))
        for _ in range(int(bg.random_raw() % np.uint64(5))):
            px, py, ang = ring[int(bg.random_raw() % np.uint64(5))]
            ang += (_unit(bg) - 0.5) * math.radians(100)
            rad = t * (0.5 + 0.45 * _unit(bg))
            extras.append((clip(px + rad * math.cos(ang)), clip(py + rad * math.sin(ang))))
    return petals, cores, extras


def generate(cfg: GeneratorConfig) -> PointInstance:
    """Deterministic random instance; the stream is PCG64 raw output."""
    bg = np.random.PCG64(cfg.seed)
    if cfg.flowers:
        petals, cores, extras = _flowers(cfg, bg)
        planted = (petals + cores + extras)[: cfg.n]
        rest = cfg.n - len(planted)
        filler = _uniform(bg.random_raw(2 * rest), cfg.box_side).reshape(rest, 2).tolist()
        return PointInstance(tuple(planted) + tuple(map(tuple, filler)), cfg.threshold)
    if cfg.clusters == 0:
        xy = _uniform(bg.random_raw(2 * cfg.n), cfg.box_side).reshape(cfg.n, 2)
    else:
        centers = _uniform(bg.random_raw(2 * cfg.clusters), cfg.box_side).reshape(-1, 2)
        which = (bg.random_raw(cfg.n) % np.uint64(cfg.clusters)).astype(np.int64)
        offs = _uniform(bg.random_raw(2 * cfg.n), 2 * cfg.spread).reshape(cfg.n, 2) - cfg.spread
        xy = np.clip(centers[which] + offs, 0, cfg.box_side)
    return PointInstance(tuple(map(tuple, xy.tolist())), cfg.threshold)


# ---------------------------------------------------------------------------
# text formats


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split(" ")
    if len(parts) != count or any(p == "" for p in parts):
        raise ParseError(f"expected {count} space-separated integers, got {line!r}", lineno)
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"not an integer in {line!r}", lineno) from None
    if any(str(v) != p for v, p in zip(vals, parts)):
        raise ParseError(f"non-canonical integer in {line!r}", lineno)
    return vals


def _lines(text: str) -> list[str]:
    if text and not text.endswith("\n"):
        raise ParseError("missing final newline", text.count("\n") + 1)
    return text.split("\n")[:-1] if text else []


def _header(lines: list[str], tag: str, count: int) -> list[int]:
    if not lines:
        raise ParseError("empty file", 1)
    head = lines[0].split(" ")
    if head[0] != tag:
        raise ParseError(f"expected header {tag!r}", 1)
    return _ints(" ".join(head[1:]), 1, count)


def _check_length(lines: list[str], expected: int) -> None:
    if len(lines) > expected + 1:
        raise ParseError("trailing content after the declared records", expected + 2)
    if len(lines) < expected + 1:
        raise ParseError(f"expected {expected} records, found {len(lines) - 1}", len(lines) + 1)


def format_points(inst: PointInstance) -> str:
    out = [f"udgp {inst.n} {inst.threshold}"]
    out += [f"{x} {y}" for x, y in inst.points]
    return "\n".join(out) + "\n"


def parse_points(text: str) -> PointInstance:
    lines = _lines(text)
    n, threshold = _header(lines, "udgp", 2)
    if n < 0:
        raise ParseError("negative point count", 1)
    if threshold < 1:
        raise ParseError("threshold must be positive", 1)
    _check_length(lines, n)
    pts = []
    for i in range(1, n + 1):
        x, y = _ints(lines[i], i + 1, 2)
        if not (INT64_MIN <= x <= INT64_MAX and INT64_MIN <= y <= INT64_MAX):
            raise ParseError("coordinate overflows 64 bits", i + 1)
        pts.append((x, y))
    try:
        return PointInstance(tuple(pts), threshold)
    except InputError as e:
        raise ParseError(str(e), 1) from None


def format_graph(g: Graph) -> str:
    out = [f"udgg {g.n} {g.m}"]
    out += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> Graph:
    lines = _lines(text)
    n, m = _header(lines, "udgg", 2)
    if n < 0 or m < 0:
        raise ParseError("negative count", 1)
    _check_length(lines, m)
    seen: set[tuple[int, int]] = set()
    for i in range(1, m + 1):
        u, v = _ints(lines[i], i + 1, 2)
        if not u < v:
            raise ParseError(f"edge must satisfy u < v, got {u} {v}", i + 1)
        if not (0 <= u and v < n):
            raise ParseError(f"vertex out of range for n={n}", i + 1)
        if (u, v) in seen:
            raise ParseError(f"duplicate edge {u} {v}", i + 1)
        seen.add((u, v))
    return Graph.from_edges(n, seen)


def format_solution(vertices: Iterable[int]) -> str:
    vs = sorted(set(vertices))
    return "\n".join([f"sol {len(vs)}"] + [str(v) for v in vs]) + "\n"


def parse_solution(text: str) -> frozenset[int]:
    """Vertex ids are not range-checked here; that needs the graph."""
    lines = _lines(text)
    (k,) = _header(lines, "sol", 1)
    if k < 0:
        raise ParseError("negative size", 1)
    _check_length(lines, k)
    prev = -1
    out = []
    for i in range(1, k + 1):
        (v,) = _ints(lines[i], i + 1, 1)
        if v <= prev:
            raise ParseError("ids must be strictly ascending and nonnegative", i + 1)
        prev = v
        out.append(v)
    return frozenset(out)


def _read(path: str | os.PathLike) -> str:
    with open(path, "rb") as f:
        data = f.read()
    try:
        return data.decode("ascii")
    except UnicodeDecodeError as e:
        raise ParseError("file is not ASCII text", data.count(b"\n", 0, e.start) + 1) from None


def _write(path: str | os.PathLike, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="") as f:
        f.write(text)


def read_points(path) -> PointInstance:
    return parse_points(_read(path))


def write_points(path, inst: PointInstance) -> None:
    _write(path, format_points(inst))


def read_graph(path) -> Graph:
    return parse_graph(_read(path))


def write_graph(path, g: Graph) -> None:
    _write(path, format_graph(g))


def read_solution(path) -> frozenset[int]:
    return parse_solution(_read(path))


def write_solution(path, vertices: Iterable[int]) -> None:
    _write(path, format_solution(vertices))


def corona_chain(length: int, threshold: int = PAPER_THRESHOLD) -> PointInstance:
    """A chain of ``length`` flowers in which each weak reduction creates the
    next weakly reducible corona.

    Flower ``k`` has a core and five petals at radius 0.95. One petal of
    flower ``k`` points at flower ``k + 1`` and touches that flower's "slot"
    petal, which therefore starts outside the greedy solution and only
    enters it as the witness added by reducing flower ``k``. Only flower 0 is
    a corona of the initial (id-order) solution. Non-adjacent pairs are at
    least 1.117 apart and adjacent ones at most 0.95, so rounding is harmless.
    Ids: non-slot petals, then slots, then cores.
    """
    if length < 1:
        raise InputError("chain length must be at least 1")
    t = threshold
    cores, petals, slots = [], [], []
    cx = cy = 0.0
    heading = 0.0
    for k in range(length):
        back = heading + math.pi  # direction of the slot as seen from this core
        ring = [back + 2 * math.pi * j / 5 for j in range(5)]
        forward = heading + math.radians(36 if k % 2 == 0 else -36)
        cores.append((cx, cy))
        for ang in ring:
            pos = (cx + 0.95 * t * math.cos(ang), cy + 0.95 * t * math.sin(ang))
            if k > 0 and ang == back:
                slots.append(pos)
            else:
                petals.append(pos)
        # next core: 0.95 to the forward petal, 0.6 to the slot, 0.95 to the core
        cx += 2.5 * t * math.cos(forward)
        cy += 2.5 * t * math.sin(forward)
        heading = forward
    pts = [(int(round(x)), int(round(y))) for x, y in petals + slots + cores]
    return PointInstance(tuple(pts), t)
