"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 oracle budget exhausted. Run reports are single-line JSON records tagged
with ``schema``.
"""

from __future__ import annotations

import argparse
import gc
import json
import math
import os
import statistics
import sys
import time
from fractions import Fraction
from pathlib import Path

from udgdom import algorithms, oracle
from udgdom.core import (
    BudgetError,
    Graph,
    InputError,
    OrderPolicy,
    PointInstance,
    Solution,
    UDGError,
    is_independent,
    undominated,
)
from udgdom.instances import (
    GeneratorConfig,
    corona_chain,
    format_graph,
    format_points,
    generate,
    paper_instance,
    read_graph,
    read_points,
    read_solution,
    write_points,
    write_solution,
)
from udgdom.spatial import build_adjacency

REPORT_SCHEMA = "udgdom.run/1"
SUMMARY_SCHEMA = "udgdom.summary/1"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

ALGORITHMS = ("mis5", "reduce44", "geo44", "weak43", "exact")
BOUNDS = {
    "mis5": Fraction(5),
    "reduce44": Fraction(44, 9),
    "geo44": Fraction(44, 9),
    "weak43": Fraction(43, 9),
    "exact": Fraction(1),
}
CHECKS = ("dominating", "independent", "irreducible", "overwhelmed")

# random instances for ``ratio``: threshold and default points per unit area
RANDOM_THRESHOLD = 1000
RANDOM_DENSITY = 2.0


class UsageError(UDGError):
    pass


def _default_cap() -> int:
    return int(os.environ.get("UDGDOM_ORACLE_CAP", 30))


# ---------------------------------------------------------------------------
# loading


class Loaded:
    """An input as points (when available) and as a graph."""

    def __init__(self, label: str, graph: Graph, points: PointInstance | None = None):
        self.label = label
        self.graph = graph
        self.points = points


def load_input(spec: str, fmt: str = "points") -> Loaded:
    if spec.startswith("builtin:"):
        inst = builtin_instance(spec[8:])
        return Loaded(spec, build_adjacency(inst), inst)
    if fmt == "points":
        inst = read_points(spec)
        return Loaded(spec, build_adjacency(inst), inst)
    if fmt == "graph":
        return Loaded(spec, read_graph(spec))
    raise UsageError(f"unknown format {fmt!r}")


def builtin_instance(name: str) -> PointInstance:
    if name.startswith("chain"):
        try:
            return corona_chain(int(name[5:]))
        except ValueError:
            raise UsageError(f"bad chain instance {name!r}; expected chain<length>") from None
    return paper_instance(name)


def _parse_random(spec: str) -> list[Loaded]:
    fields = {"n": None, "count": 1, "seed": 0, "flowers": 0, "density": RANDOM_DENSITY}
    for part in spec.split(":")[1:]:
        for key in fields:
            if part.startswith(key) and part[len(key) :]:
                try:
                    fields[key] = (float if key == "density" else int)(part[len(key) :])
                except ValueError:
                    raise UsageError(f"bad random field {part!r}") from None
                break
        else:
            raise UsageError(f"unknown random field {part!r}")
    if fields["n"] is None:
        raise UsageError("random instances need n<count>")
    n = fields["n"]
    box = max(RANDOM_THRESHOLD, int(RANDOM_THRESHOLD * (n / fields["density"]) ** 0.5))
    out = []
    for i in range(fields["count"]):
        seed = fields["seed"] + i
        inst = generate(
            GeneratorConfig(n, box, RANDOM_THRESHOLD, seed=seed, flowers=fields["flowers"])
        )
        out.append(Loaded(f"{spec}#seed{seed}", build_adjacency(inst), inst))
    return out


def load_many(spec: str) -> list[Loaded]:
    if spec.startswith("builtin:"):
        return [load_input(f"builtin:{name}") for name in spec[8:].split(",")]
    if spec.startswith("random:"):
        return _parse_random(spec)
    path = Path(spec)
    if not path.is_dir():
        raise UsageError(f"{spec!r} is neither builtin:, random: nor a directory")
    out = []
    for f in sorted(path.iterdir()):
        if f.suffix == ".pts":
            out.append(load_input(str(f), "points"))
        elif f.suffix == ".udgg":
            out.append(load_input(str(f), "graph"))
    return out


# ---------------------------------------------------------------------------
# running


def run(algo: str, data: Loaded, order: OrderPolicy, cap: int | None = None) -> Solution:
    g = data.graph
    if algo == "mis5":
        return algorithms.mis5(g, order)
    if algo == "reduce44":
        return algorithms.reduce44_graph(g, order)
    if algo == "weak43":
        return algorithms.weak43(g, order)
    if algo == "geo44":
        if data.points is None:
            raise UsageError("geo44 needs point coordinates; a graph file has none")
        return algorithms.reduce44_geometric(data.points, order)
    if algo == "exact":
        cap = _default_cap() if cap is None else cap
        found = oracle.exact_min_dominating_set(g, cap)
        if found is None:
            raise BudgetError(f"no dominating set of size <= {cap}")
        return Solution(found, "exact", 0, str(order), (len(found),))
    raise UsageError(f"unknown algorithm {algo!r}")


def report(algo, data: Loaded, sol: Solution, seconds: float, optimum: int | None) -> dict:
    rec = {
        "schema": REPORT_SCHEMA,
        "algorithm": algo,
        "instance": data.label,
        "n": data.graph.n,
        "m": data.graph.m,
        "size": len(sol),
        "optimum": optimum,
        "ratio": None,
        "within_bound": None,
        "iterations": sol.iterations,
        "seconds": round(seconds, 6),
        "order": sol.order,
    }
    if optimum:
        rec["ratio"] = round(len(sol) / optimum, 6)
        rec["within_bound"] = Fraction(len(sol), optimum) <= BOUNDS[algo]
    return rec


def emit(rec: dict) -> None:
    print(json.dumps(rec), flush=True)


def failed_checks(g: Graph, d: frozenset[int], checks) -> list[str]:
    """Human-readable reasons for every failing check."""
    problems = []
    if "dominating" in checks:
        missing = undominated(g, d)
        if missing:
            problems.append(f"dominating: vertex {missing[0]} is not dominated")
    if "independent" in checks and not is_independent(g, d):
        u, v = next((u, v) for u in sorted(d) for v in g.adj[u] if v in d)
        problems.append(f"independent: {u} and {v} are adjacent")
    if "irreducible" in checks:
        for corona, core in algorithms.reducible_coronas(g, d):
            problems.append(f"irreducible: corona {list(corona.petals)} reduces to core {core}")
            break
    if "overwhelmed" in checks:
        for plan in algorithms.weakly_reducible_coronas(g, d):
            problems.append(
                f"overwhelmed: corona {list(plan.corona.petals)} weakly reduces via core "
                f"{plan.core} with witnesses {sorted(plan.witnesses)}"
            )
            break
    return problems


def _applicable_checks(algo: str) -> tuple[str, ...]:
    checks = ["dominating"]
    if algo != "exact":
        checks.append("independent")
    if algo in ("reduce44", "geo44"):
        checks.append("irreducible")
    if algo == "weak43":
        checks.append("overwhelmed")
    return tuple(checks)


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(
        args.n,
        args.box,
        args.threshold,
        seed=args.seed,
        clusters=args.clusters,
        spread=args.spread,
        flowers=args.flowers,
    )
    inst = generate(cfg)
    write_points(args.out, inst)
    g = build_adjacency(inst)
    print(f"wrote {inst.n} points (threshold {inst.threshold}, {g.m} edges) to {args.out}")
    return EXIT_OK


def cmd_export(args) -> int:
    inst = builtin_instance(args.name)
    text = format_points(inst) if args.format == "points" else format_graph(build_adjacency(inst))
    with open(args.out, "w", encoding="ascii", newline="") as f:
        f.write(text)
    print(f"wrote {args.name} ({inst.n} vertices) to {args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    data = load_input(args.input, args.format)
    order = OrderPolicy.parse(args.order)
    start = time.perf_counter()
    sol = run(args.algo, data, order, args.cap)
    seconds = time.perf_counter() - start
    problems = failed_checks(data.graph, sol.vertices, _applicable_checks(args.algo))
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return EXIT_FAIL
    optimum = None
    if args.opt_cap:
        found = oracle.exact_min_dominating_set(data.graph, args.opt_cap)
        if found is None:
            raise BudgetError(f"optimum exceeds {args.opt_cap}")
        optimum = len(found)
    if args.output:
        write_solution(args.output, sol.vertices)
    emit(report(args.algo, data, sol, seconds, optimum))
    return EXIT_OK


def cmd_verify(args) -> int:
    data = load_input(args.input, args.format)
    d = read_solution(args.solution)
    bad = [v for v in sorted(d) if v >= data.graph.n]
    if bad:
        raise InputError(f"solution names vertex {bad[0]} but the graph has {data.graph.n}")
    checks = args.check or ["dominating", "independent"]
    problems = failed_checks(data.graph, d, checks)
    for p in problems:
        print(p)
    if problems:
        return EXIT_FAIL
    print(f"ok: {', '.join(checks)}")
    return EXIT_OK


def cmd_ratio(args) -> int:
    instances = load_many(args.instances)
    worst = Fraction(0)
    ratios = []
    status = EXIT_OK
    for data in instances:
        try:
            found = oracle.exact_min_dominating_set(data.graph, args.oracle_cap)
        except BudgetError as e:
            emit({"schema": REPORT_SCHEMA, "instance": data.label, "error": str(e)})
            continue
        if found is None:
            emit({"schema": REPORT_SCHEMA, "instance": data.label,
                  "error": f"optimum exceeds oracle cap {args.oracle_cap}"})
            continue
        opt = len(found)
        policies = [OrderPolicy()] + [OrderPolicy(s) for s in range(args.search_adversarial)]
        best = None
        for policy in policies:
            start = time.perf_counter()
            sol = run(args.algo, data, policy, args.oracle_cap)
            seconds = time.perf_counter() - start
            if best is None or len(sol) > len(best[0]):
                best = (sol, seconds)
        sol, seconds = best
        rec = report(args.algo, data, sol, seconds, opt)
        rec["orders_tried"] = len(policies)
        emit(rec)
        if not rec["within_bound"]:
            status = EXIT_FAIL
        r = Fraction(len(sol), opt)
        ratios.append(r)
        worst = max(worst, r)
    emit(
        {
            "schema": SUMMARY_SCHEMA,
            "algorithm": args.algo,
            "instances": len(instances),
            "solved": len(ratios),
            "max_ratio": round(float(worst), 6) if ratios else None,
            "max_ratio_exact": str(worst) if ratios else None,
            "mean_ratio": round(float(sum(ratios) / len(ratios)), 6) if ratios else None,
            "bound": str(BOUNDS[args.algo]),
        }
    )
    return status


def bench_instance(
    n: int, seed: int, density: float = RANDOM_DENSITY, shuffled: bool = False
) -> PointInstance:
    """Uniform points at ``density`` per threshold-sized cell.

    Unless ``shuffled``, points are listed in row-major cell order so that
    vertex ids follow the geometry; with random ids the timings mostly
    measure cache misses once the graph outgrows the cache.
    """
    box = max(RANDOM_THRESHOLD, int(RANDOM_THRESHOLD * (n / density) ** 0.5))
    inst = generate(GeneratorConfig(n, box, RANDOM_THRESHOLD, seed=seed))
    if shuffled:
        return inst
    t = inst.threshold
    return PointInstance(tuple(sorted(inst.points, key=lambda p: (p[1] // t, p[0]))), t)


def bench(
    algo: str, sizes: list[int], seeds: int, repeats: int = 3, shuffled: bool = False
) -> list[tuple[int, float, float | None]]:
    """Median over seeds of the solver wall time per size, with the ratio to
    the previous size. Each seed keeps its fastest of ``repeats`` runs."""
    rows = []
    prev = None
    # one untimed run so lazy imports and allocator warm-up stay out of the table
    warm = bench_instance(min(sizes), 0)
    run(algo, Loaded("warm-up", build_adjacency(warm), warm), OrderPolicy())
    for n in sizes:
        times = []
        for seed in range(seeds):
            inst = bench_instance(n, seed, shuffled=shuffled)
            # geo44 works from coordinates alone, so it gets no prebuilt graph
            g = Graph(0, ()) if algo == "geo44" else build_adjacency(inst)
            data = Loaded(f"bench:{n}:{seed}", g, inst)
            best = math.inf
            for _ in range(repeats):
                gc.collect()
                gc.disable()
                try:
                    start = time.perf_counter()
                    run(algo, data, OrderPolicy())
                    best = min(best, time.perf_counter() - start)
                finally:
                    gc.enable()
            times.append(best)
        med = statistics.median(times)
        rows.append((n, med, None if prev is None else med / prev))
        prev = med
    return rows


def doubling_trend(rows) -> float:
    """Time growth per doubling of n from a least-squares fit of log time on log n."""
    xs = [math.log2(n) for n, _, _ in rows]
    ys = [math.log2(t) for _, t, _ in rows]
    if len(xs) < 2:
        raise UsageError("a trend needs at least two sizes")
    mx = statistics.fmean(xs)
    my = statistics.fmean(ys)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    return 2.0**slope


def cmd_bench(args) -> int:
    sizes = args.sizes
    rows = bench(args.algo, sizes, args.seeds, args.repeats, args.shuffled)
    print(f"{'n':>10} {'median_s':>12} {'ratio':>8}")
    for n, med, ratio in rows:
        print(f"{n:>10} {med:>12.4f} {'-' if ratio is None else f'{ratio:.3f}':>8}")
    if len(set(sizes)) > 1:
        print(f"fitted time ratio per doubling: {doubling_trend(rows):.3f}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} must be positive")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"{text} must be nonnegative")
    return v


def _sizes(text: str) -> list[int]:
    return [_positive(s) for s in text.split(",")]


def _checks(text: str) -> list[str]:
    out = [c for c in text.split(",") if c]
    for c in out:
        if c not in CHECKS:
            raise argparse.ArgumentTypeError(f"unknown check {c!r}; choose from {CHECKS}")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="udgdom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random points file")
    g.add_argument("--n", type=_positive, required=True)
    g.add_argument("--box", type=_positive, required=True)
    g.add_argument("--threshold", type=_positive, required=True)
    g.add_argument("--seed", type=_nonneg, default=0)
    g.add_argument("--clusters", type=_nonneg, default=0)
    g.add_argument("--spread", type=_nonneg, default=0)
    g.add_argument("--flowers", type=_nonneg, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("export", help="write a built-in instance (fig4, fig6, chain<k>)")
    e.add_argument("--name", required=True)
    e.add_argument("--format", choices=("points", "graph"), default="points")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)

    s = sub.add_parser("solve", help="run one algorithm and report")
    s.add_argument("--algo", choices=ALGORITHMS, required=True)
    s.add_argument("--input", required=True, help="file path or builtin:<name>")
    s.add_argument("--format", choices=("points", "graph"), default="points")
    s.add_argument("--order", default="id", help="'id' or 'seed:<int>'")
    s.add_argument("--cap", type=_positive, default=None, help="size cap for --algo exact")
    s.add_argument("--opt-cap", type=_positive, default=None, help="also compute the optimum")
    s.add_argument("--output", help="write the solution file here")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution file")
    v.add_argument("--input", required=True)
    v.add_argument("--format", choices=("points", "graph"), default="points")
    v.add_argument("--solution", required=True)
    v.add_argument("--check", type=_checks, action="extend", default=None,
                   help="comma-separated: " + ", ".join(CHECKS))
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("ratio", help="approximation ratios against the exact optimum")
    r.add_argument("--algo", choices=ALGORITHMS, required=True)
    r.add_argument("--instances", required=True,
                   help="directory, builtin:<a>[,<b>...] or random:n<N>:count<C>[:seed<S>]"
                        "[:flowers<F>][:density<D>]")
    r.add_argument("--oracle-cap", type=_positive, default=None)
    r.add_argument("--search-adversarial", type=_nonneg, default=0, metavar="BUDGET",
                   help="also try this many seeded orders and keep the worst")
    r.set_defaults(func=cmd_ratio)

    b = sub.add_parser("bench", help="median solver time per size")
    b.add_argument("--algo", choices=("mis5", "reduce44", "geo44", "weak43"), required=True)
    b.add_argument("--sizes", type=_sizes, required=True, help="comma-separated vertex counts")
    b.add_argument("--seeds", type=_positive, default=5)
    b.add_argument("--repeats", type=_positive, default=3, help="runs per seed; the fastest counts")
    b.add_argument("--shuffled", action="store_true", help="keep random vertex ids instead of row-major order")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "oracle_cap", 0) is None:
        args.oracle_cap = _default_cap()
    try:
        return args.func(args)
    except BudgetError as e:
        print(f"budget: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
