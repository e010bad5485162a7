"""Command-line front end: solve, kernelize, generate and cross-check instances.

Exit codes: 0 the answer is YES, 1 the answer is NO, 2 usage or input error,
3 timeout.  Reports are single JSON objects on stdout with a versioned
schema.  ``check`` runs every applicable algorithm on every instance of a
directory and fails loudly on any disagreement or invalid witness.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import multiprocessing
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .branching import solve_branching
from .decomposition import make_nice, min_degree_td, parse_td, td_from_fvs
from .fvs_budget import approx_fvs_2, solve_fvs_tcb
from .fvs_dp import solve_fvs_tw
from .graph import (
    ColourBudget,
    ColouredGraph,
    InputError,
    ParseError,
    SolveOutcome,
    is_t_fair,
    parse_instance,
    random_instance,
    serialize_instance,
)
from .kernel import kernelize, solve_kernel_branch
from .oracle import OracleConfig, brute_force_fair, is_fvs, is_vertex_cover
from .relaxation import RelaxationSpec, parse_rational, solve_ab_fair

SCHEMA = 1
VC_ALGOS = ("branch", "kernel+branch", "twdp", "oracle", "auto")
FVS_ALGOS = ("tcb", "twdp", "oracle", "auto")


def _digest(graph: ColouredGraph, budget: ColourBudget) -> str:
    return hashlib.sha256(serialize_instance(graph, budget).encode()).hexdigest()[:12]


def _decomposition_for(graph: ColouredGraph, td_path: str | None, heuristic: bool):
    if td_path is not None:
        td = parse_td(Path(td_path).read_text(), graph)
        return make_nice(td, graph)
    if heuristic:
        return make_nice(min_degree_td(graph), graph)
    return td_from_fvs(graph, approx_fvs_2(graph).f_apx)


def _exact_solver(problem: str, algo: str, ntd_args: tuple, want_witness: bool):
    td_path, heuristic = ntd_args

    def run(graph: ColouredGraph, budget: ColourBudget) -> SolveOutcome:
        if algo == "oracle":
            return brute_force_fair(graph, budget, problem)
        if problem == "vc":
            if algo == "branch":
                return solve_branching(graph, budget, want_witness=want_witness)
            if algo in ("kernel+branch", "auto"):
                return solve_kernel_branch(graph, budget, want_witness=want_witness)
            if algo == "twdp":
                from .vc_dp import solve_vc_tw

                ntd = _decomposition_for(graph, td_path, heuristic)
                return solve_vc_tw(graph, ntd, budget, want_witness=want_witness)
        else:
            if algo in ("tcb", "auto"):
                return solve_fvs_tcb(graph, budget, want_witness=want_witness)
            if algo == "twdp":
                ntd = _decomposition_for(graph, td_path, heuristic)
                return solve_fvs_tw(graph, ntd, budget, want_witness=want_witness)
        raise InputError(f"algorithm {algo!r} not applicable to problem {problem!r}")

    return run


def _solve_task(payload: dict) -> dict:
    graph, budget = parse_instance(Path(payload["file"]).read_text())
    problem = payload["problem"]
    want_witness = payload["witness"]
    solver = _exact_solver(
        problem, payload["algo"], (payload["td"], payload["heuristic"]), want_witness
    )
    start = time.perf_counter()
    if payload["alpha"] is not None or payload["beta"] is not None:
        spec = RelaxationSpec(
            alpha=parse_rational(payload["alpha"] or "1"),
            beta=parse_rational(payload["beta"] or "1"),
            budget=budget,
        )
        outcome = solve_ab_fair(graph, spec, solver, want_witness=want_witness)
    else:
        outcome = solver(graph, budget)
    wall_ms = (time.perf_counter() - start) * 1000.0
    report = {
        "schema": SCHEMA,
        "instance": _digest(graph, budget),
        "problem": problem,
        "algo": payload["algo"],
        "answer": "yes" if outcome.answer else "no",
        "wall_ms": round(wall_ms, 3),
    }
    if want_witness:
        report["witness"] = sorted(outcome.witness) if outcome.witness else None
    if payload["stats"]:
        report["stats"] = {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in outcome.stats.items()
        }
    return report


def _worker(payload: dict, queue) -> None:  # pragma: no cover - subprocess body
    try:
        queue.put(("ok", _solve_task(payload)))
    except Exception as exc:  # noqa: BLE001 - reported to the parent
        queue.put(("error", str(exc)))


def _run_solve(args, problem: str) -> int:
    payload = {
        "file": args.file,
        "problem": problem,
        "algo": args.algo,
        "witness": args.witness,
        "stats": args.stats,
        "td": args.td,
        "heuristic": args.heuristic_td,
        "alpha": args.alpha,
        "beta": args.beta,
    }
    if args.timeout_ms is None:
        report = _solve_task(payload)
    else:
        queue: multiprocessing.Queue = multiprocessing.Queue()
        proc = multiprocessing.Process(target=_worker, args=(payload, queue))
        proc.start()
        proc.join(args.timeout_ms / 1000.0)
        if proc.is_alive():
            proc.terminate()
            proc.join()
            print(json.dumps({"schema": SCHEMA, "error": "timeout"}))
            return 3
        status, value = queue.get()
        if status == "error":
            print(json.dumps({"schema": SCHEMA, "error": value}), file=sys.stderr)
            return 2
        report = value
    print(json.dumps(report))
    return 0 if report["answer"] == "yes" else 1


def _run_kernelize(args) -> int:
    graph, budget = parse_instance(Path(args.file).read_text())
    result = kernelize(graph, budget)
    report = {
        "schema": SCHEMA,
        "instance": _digest(graph, budget),
        "answer_no": result.answer_no,
        "forced": sorted(result.forced),
        "removed_isolated": sorted(result.removed_isolated),
        "bound_v": result.bound_v,
        "bound_e": result.bound_e,
    }
    if not result.answer_no:
        report["kernel_vertices"] = result.graph.n
        report["kernel_edges"] = result.graph.m
        Path(args.output).write_text(serialize_instance(result.graph, result.budget))
    print(json.dumps(report))
    return 1 if result.answer_no else 0


def _run_oracle(args) -> int:
    graph, budget = parse_instance(Path(args.file).read_text())
    config = OracleConfig(max_n=args.max_n, enumerate_all=args.all)
    outcome = brute_force_fair(graph, budget, args.problem, config)
    report = {
        "schema": SCHEMA,
        "instance": _digest(graph, budget),
        "problem": args.problem,
        "algo": "oracle",
        "answer": "yes" if outcome.answer else "no",
        "witness": sorted(outcome.witness) if outcome.witness else None,
    }
    if args.all:
        report["solutions"] = outcome.stats.get("solutions")
    print(json.dumps(report))
    return 0 if outcome.answer else 1


def _sample_budget(graph: ColouredGraph, rng: random.Random, biased: bool) -> ColourBudget:
    from .graph import colour_counts

    if biased:
        size = rng.randint(0, max(1, graph.n // 2))
        subset = rng.sample(range(1, graph.n + 1), size) if size else []
        return ColourBudget(colour_counts(graph, subset))
    totals = colour_counts(graph, graph.vertices())
    return ColourBudget(tuple(rng.randint(0, max(1, total // 2)) for total in totals))


def _run_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    for i in range(args.count):
        graph = random_instance(
            args.n, args.p, args.t, args.max_colours, seed=rng.randrange(2**31)
        )
        budget = _sample_budget(graph, rng, biased=i % 2 == 0)
        text = f"# generated: n={args.n} p={args.p} t={args.t} seed={args.seed} index={i}\n"
        text += serialize_instance(graph, budget)
        (out / f"inst_{args.seed}_{i:04d}.fgr").write_text(text)
    return 0


def _witness_valid(graph, budget, problem, witness) -> bool:
    if witness is None:
        return False
    check = is_vertex_cover if problem == "vc" else is_fvs
    return check(graph, witness) and is_t_fair(graph, witness, budget)


def _check_task(path_str: str) -> dict:
    path = Path(path_str)
    graph, budget = parse_instance(path.read_text())
    report = {"file": path.name, "mismatches": [], "errors": []}
    oracle_ok = graph.n <= 16
    for problem, algos in (("vc", ["branch", "kernel+branch", "twdp"]),
                           ("fvs", ["tcb", "twdp"])):
        answers: dict[str, bool] = {}
        if oracle_ok:
            answers["oracle"] = brute_force_fair(graph, budget, problem).answer
        for algo in algos:
            solver = _exact_solver(problem, algo, (None, False), True)
            try:
                outcome = solver(graph, budget)
            except Exception as exc:  # noqa: BLE001 - collected per instance
                report["errors"].append(f"{problem}/{algo}: {exc}")
                continue
            answers[algo] = outcome.answer
            if outcome.answer and not _witness_valid(
                graph, budget, problem, outcome.witness
            ):
                report["mismatches"].append(f"{problem}/{algo}: invalid witness")
        distinct = set(answers.values())
        if len(distinct) > 1:
            report["mismatches"].append(f"{problem}: disagreement {answers}")
    return report


def _run_check(args) -> int:
    paths = sorted(str(p) for p in Path(args.dir).glob("*.fgr"))
    if not paths:
        print("no .fgr instances found", file=sys.stderr)
        return 2
    threads = int(os.environ.get("FAIR_COVER_THREADS", os.cpu_count() or 1))
    failures = 0
    if threads > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(_check_task, paths))
    else:
        reports = [_check_task(p) for p in paths]
    for report in reports:
        if report["mismatches"] or report["errors"]:
            failures += 1
            print(f"FAIL {report['file']}: "
                  + "; ".join(report["mismatches"] + report["errors"]))
        else:
            print(f"ok   {report['file']}")
    print(f"checked {len(reports)} instances, {failures} failures")
    return 1 if failures else 0


def _add_solve_parser(sub, name: str, algos) -> None:
    p = sub.add_parser(name, help=f"decide {name.replace('solve-', '')} fairness")
    p.add_argument("file")
    p.add_argument("--algo", choices=algos, default="auto")
    p.add_argument("--td", help="PACE .td decomposition file (twdp only)")
    p.add_argument(
        "--heuristic-td",
        action="store_true",
        help="use the min-degree heuristic decomposition (no width guarantee)",
    )
    p.add_argument("--witness", action="store_true", help="print a witness set")
    p.add_argument("--stats", action="store_true", help="include solver counters")
    p.add_argument("--alpha", help="lower relaxation factor (rational)")
    p.add_argument("--beta", help="upper relaxation factor (rational)")
    p.add_argument("--timeout-ms", type=int, help="abort after this many milliseconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fair-cover",
        description="Exact solvers for colour-budgeted vertex cover and feedback vertex set",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_solve_parser(sub, "solve-vc", VC_ALGOS)
    _add_solve_parser(sub, "solve-fvs", FVS_ALGOS)

    k = sub.add_parser("kernelize", help="shrink a vertex-cover instance")
    k.add_argument("file")
    k.add_argument("-o", "--output", required=True)

    o = sub.add_parser("oracle", help="brute-force reference answer")
    o.add_argument("file")
    o.add_argument("--problem", choices=("vc", "fvs"), default="vc")
    o.add_argument("--max-n", type=int, default=20)
    o.add_argument("--all", action="store_true", help="count all fair solutions")

    g = sub.add_parser("gen", help="generate random instances")
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--p", type=float, default=0.3)
    g.add_argument("--t", type=int, default=2)
    g.add_argument("--max-colours", type=int, default=2)
    g.add_argument("--count", type=int, default=10)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--out", required=True)

    c = sub.add_parser("check", help="cross-check all algorithms on a corpus")
    c.add_argument("dir")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve-vc":
            return _run_solve(args, "vc")
        if args.command == "solve-fvs":
            return _run_solve(args, "fvs")
        if args.command == "kernelize":
            return _run_kernelize(args)
        if args.command == "oracle":
            return _run_oracle(args)
        if args.command == "gen":
            return _run_gen(args)
        if args.command == "check":
            return _run_check(args)
    except (InputError, ParseError, OSError) as exc:
        print(json.dumps({"schema": SCHEMA, "error": str(exc)}), file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
