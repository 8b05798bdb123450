"""Command line interface: ``clocal <command> <graph> ...``.

A graph is a file in the text format or a generator spec such as
``ring:1000``, ``grid:4,5``, ``random-regular:100,3`` or ``random:20,4,30``.
Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import statistics
import sys
from fractions import Fraction
from pathlib import Path

from . import harness
from .coloring import FINAL_PALETTE_CONSTANT, color, palette_bound
from .distsim import ALGORITHMS, dist_run, get_algorithm, queries_of
from .errors import BudgetExceededError, InputError, VerificationError
from .graph import GENERATORS, LabeledGraph, ProbeSession, generate, load_graph, random_weights
from .mcm import as_eps, mcm_k
from .mwm import mwm_parameters, preprocess, rho
from .orientation import orient_edge, verify_bounds

log = logging.getLogger("clocal")


def resolve_graph(spec: str, seed: int = 0, weighted: bool = False) -> LabeledGraph:
    if Path(spec).exists():
        g = load_graph(spec)
        return random_weights(g, seed) if weighted and not g.is_weighted else g
    kind, _, params = spec.partition(":")
    if kind in GENERATORS:
        return generate(kind, [p for p in params.split(",") if p], seed=seed, weighted=weighted)
    raise InputError(f"{spec!r} is neither a file nor a generator spec ({', '.join(sorted(GENERATORS))})")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, (int, str)) else k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    return x


def _query_label(q) -> str:
    return q if isinstance(q, str) else (f"{q[0]}-{q[1]}" if isinstance(q, tuple) else str(q))


def emit(args, summary: dict, rows: list[dict] | None = None) -> None:
    out = sys.stdout
    if args.json:
        payload = dict(summary)
        if rows is not None:
            payload["answers"] = rows
        json.dump(_jsonable(payload), out, indent=2)
        out.write("\n")
    elif args.csv:
        if rows:
            w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _query_label(v) if isinstance(v, tuple) else v for k, v in r.items()})
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(list(summary))
            w.writerow([_jsonable(v) for v in summary.values()])
    else:
        for r in rows or ():
            print("  ".join(f"{k}={_query_label(v) if isinstance(v, tuple) else v}" for k, v in r.items()), file=out)
        for k, v in summary.items():
            print(f"{k}: {v}", file=out)


def answer_queries(g, fn, queries) -> tuple[dict, dict]:
    answers, probes, radii = {}, [], []
    for q in queries:
        s = ProbeSession(g, q)
        answers[q] = fn(g, s, q)
        probes.append(s.probe_count)
        radii.append(s.radius)
    stats = {
        "queries": len(answers),
        "probes_max": max(probes, default=0),
        "probes_mean": round(statistics.fmean(probes), 3) if probes else 0,
        "radius_max": max(radii, default=0),
    }
    return answers, stats


def _edge_arg(g, pair) -> tuple[int, int]:
    return g.check_edge(tuple(pair))


def _query_arg(g, kind, text: str):
    try:
        parts = [int(p) for p in text.replace(",", " ").replace("-", " ").split()]
    except ValueError as exc:
        raise InputError(f"bad query {text!r}") from exc
    if kind == "vertex":
        if len(parts) != 1:
            raise InputError(f"expected a vertex, got {text!r}")
        g.check_vertex(parts[0])
        return parts[0]
    if len(parts) != 2:
        raise InputError(f"expected an edge 'u,v', got {text!r}")
    return g.check_edge(tuple(parts))


def _selected(args, g, kind):
    edge = getattr(args, "edge", None)
    if edge:
        return [_edge_arg(g, edge)]
    vertex = getattr(args, "vertex", None)
    if vertex is not None:
        g.check_vertex(vertex)
        return [vertex]
    query = getattr(args, "query", None)
    if query is not None:
        return [_query_arg(g, kind, query)]
    return queries_of(g, kind)


# ---- commands ---------------------------------------------------------------

def cmd_color(args, g) -> int:
    qs = _selected(args, g, "vertex")
    answers, stats = answer_queries(g, color, qs)
    if args.verify and len(qs) == g.n:
        harness.check_solution(g, "coloring", answers)
    summary = {"palette_bound": palette_bound(g), "constant": FINAL_PALETTE_CONSTANT, **stats}
    emit(args, summary, [{"vertex": v, "color": c} for v, c in answers.items()])
    return 0


def cmd_orient(args, g) -> int:
    if args.stats or args.verify:
        st = verify_bounds(g)
        summary = {"rad": st.rad, "reach": st.reach, "palette_bound": st.palette, "reach_bound": st.reach_limit, "acyclic": True}
        if not args.edge:
            emit(args, summary)
            return 0
    qs = [_edge_arg(g, args.edge)] if args.edge else g.edges()
    answers, stats = answer_queries(g, orient_edge, qs)
    emit(args, stats, [{"edge": e, "tail": t, "head": h} for e, (t, h) in answers.items()])
    return 0


def cmd_greedy(args, g) -> int:
    alg = get_algorithm(args.command)
    qs = _selected(args, g, alg.kind)
    answers, stats = answer_queries(g, alg.fn, qs)
    if args.verify and len(qs) == len(queries_of(g, alg.kind)):
        harness.check_solution(g, harness.PROBLEM_OF[args.command], answers)
    label = "vertex" if alg.kind == "vertex" else "edge"
    emit(args, stats, [{label: q, "value": a} for q, a in answers.items()])
    return 0


def _verify_ratio(chosen_value, optimum, bound, what):
    if Fraction(chosen_value) < bound * optimum:
        raise VerificationError(f"{what} {chosen_value} below {float(bound):.4f} x optimum {optimum}", chosen_value)


def cmd_mcm(args, g) -> int:
    eps = as_eps(args.eps)
    alg = get_algorithm("mcm").bind(eps)
    qs = _selected(args, g, "edge")
    answers, stats = answer_queries(g, alg, qs)
    summary = {"eps": str(eps), "k": mcm_k(eps), **stats}
    rows = [{"edge": e, "in_matching": a} for e, a in answers.items()]
    if len(qs) == g.num_edges:
        chosen = [e for e, a in answers.items() if a]
        summary["matching_size"] = len(chosen)
        if args.verify:
            harness.check_solution(g, "matching", answers)
            opt = harness.brute_mcm(g)
            k = mcm_k(eps)
            summary["optimum"] = opt
            _verify_ratio(len(chosen), opt, Fraction(k, k + 1), "matching size")
    emit(args, summary, rows)
    return 0


def cmd_mwm(args, g) -> int:
    eps = as_eps(args.eps, upper_inclusive=False)
    k, L = mwm_parameters(eps)
    alg = get_algorithm("mwm").bind(eps)
    qs = _selected(args, g, "edge")
    answers, stats = answer_queries(g, alg, qs)
    pre = preprocess(g, eps)
    summary = {"eps": str(eps), "k": k, "L": L, "w_min": pre.w_min, **stats}
    rows = [{"edge": e, "in_matching": a} for e, a in answers.items()]
    if len(qs) == g.num_edges:
        chosen = [e for e, a in answers.items() if a]
        weight = sum((g.weight(*e) for e in chosen), Fraction(0))
        summary["matching_weight"] = weight
        if args.verify:
            harness.check_solution(g, "matching", answers)
            opt = harness.brute_mwm(g)
            summary["optimum"] = opt
            bound = Fraction(rho(eps)).limit_denominator(10**9) * (1 - eps / 2)
            _verify_ratio(weight, opt, bound, "matching weight")
    emit(args, summary, rows)
    return 0


def cmd_dist(args, g) -> int:
    spec = get_algorithm(args.algorithm)
    eps = None
    if spec.needs_eps:
        if args.eps is None:
            raise InputError(f"{args.algorithm} needs --eps")
        eps = as_eps(args.eps, upper_inclusive=args.algorithm != "mwm")
    res = dist_run(g, args.algorithm, eps)
    if res.sweep is not None and res.sweep.answers != res.answers:
        bad = next(q for q in res.answers if res.answers[q] != res.sweep.answers.get(q))
        raise VerificationError("distributed output differs from the probe-model output", bad)
    summary = {"algorithm": args.algorithm, "rounds": res.rounds}
    if args.rounds_report:
        summary["messages_per_round"] = res.trace.message_sizes
        summary["log_star_n"] = log_star(g.n)
    label = "vertex" if spec.kind == "vertex" else "edge"
    emit(args, summary, [{label: q, "value": a} for q, a in sorted(res.answers.items())])
    return 0


def log_star(n: float) -> int:
    k = 0
    while n > 1:
        n = math.log2(n)
        k += 1
    return k


def cmd_verify(args, g) -> int:
    checks = {}
    for name in ("color", "mis", "color-seq", "mm", "orient"):
        rep = harness.consistency_fuzz(g, name, args.trials, seed=args.seed)
        checks[name] = "ok" if rep else f"FAIL: {rep.message} ({rep.witness})"
    st = verify_bounds(g)
    checks["orientation_bounds"] = f"ok (rad {st.rad}, reach {st.reach} <= {st.reach_limit})"
    if args.eps is not None:
        eps = as_eps(args.eps)
        rep = harness.consistency_fuzz(g, "mcm", args.trials, eps=eps, seed=args.seed)
        checks["mcm"] = "ok" if rep else f"FAIL: {rep.message} ({rep.witness})"
    failed = [k for k, v in checks.items() if not v.startswith("ok")]
    emit(args, {**checks, "result": "FAIL" if failed else "PASS"})
    return 1 if failed else 0


def cmd_bench(args) -> int:
    try:
        specs = json.loads(Path(args.specs).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read experiment specs: {exc}") from exc
    if isinstance(specs, dict):
        specs = [specs]
    fmt = "json" if args.json else "csv"
    text = harness.bench(specs, output=args.output, fmt=fmt)
    if args.output is None:
        sys.stdout.write(text)
    return 0


# ---- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clocal", description="Probe-model graph oracles and their distributed simulation.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(q, graph=True):
        if graph:
            q.add_argument("graph", help="graph file or generator spec such as ring:1000")
        q.add_argument("--seed", type=int, default=0, help="generator seed")
        q.add_argument("--weighted", action="store_true", help="attach random rational weights")
        fmt = q.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true")
        fmt.add_argument("--csv", action="store_true")
        q.add_argument("--verify", action="store_true", help="check the assembled answers")
        return q

    def command(name, **kw):
        return add_common(sub.add_parser(name, **kw))

    c = command("color", help="O(Δ²)-coloring")
    grp = c.add_mutually_exclusive_group()
    grp.add_argument("--vertex", type=int)
    grp.add_argument("--all", action="store_true")

    o = command("orient", help="acyclic orientation")
    grp = o.add_mutually_exclusive_group()
    grp.add_argument("--edge", nargs=2, type=int, metavar=("U", "V"))
    grp.add_argument("--stats", action="store_true")

    for name, what in (("mis", "maximal independent set"), ("mm", "maximal matching"), ("color-seq", "(Δ+1)-coloring")):
        s = command(name, help=what)
        grp = s.add_mutually_exclusive_group()
        grp.add_argument("--query", help="a vertex, or an edge written u,v")
        grp.add_argument("--all", action="store_true")

    for name, what in (("mcm", "(1−ε)-approximate maximum matching"), ("mwm", "approximate maximum weight matching")):
        s = command(name, help=what)
        s.add_argument("--eps", required=True)
        grp = s.add_mutually_exclusive_group()
        grp.add_argument("--edge", nargs=2, type=int, metavar=("U", "V"))
        grp.add_argument("--all", action="store_true")

    d = sub.add_parser("dist", help="distributed execution by ball collection")
    d.add_argument("algorithm", choices=sorted(ALGORITHMS))
    add_common(d)
    d.add_argument("--eps")
    d.add_argument("--rounds-report", action="store_true")

    v = command("verify", help="run every check on one graph")
    v.add_argument("--eps", help="also check the matching oracle")
    v.add_argument("--trials", type=int, default=3)

    b = sub.add_parser("bench", help="run experiment specs from a JSON file")
    b.add_argument("specs")
    b.add_argument("--output")
    fmt = b.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    return p


COMMANDS = {
    "color": cmd_color,
    "orient": cmd_orient,
    "mis": cmd_greedy,
    "mm": cmd_greedy,
    "color-seq": cmd_greedy,
    "mcm": cmd_mcm,
    "mwm": cmd_mwm,
    "dist": cmd_dist,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "bench":
            return cmd_bench(args)
        g = resolve_graph(args.graph, args.seed, args.weighted)
        return COMMANDS[args.command](args, g)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
