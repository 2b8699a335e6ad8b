"""Command-line front end: parse an edge-list graph, dispatch a solver, and
emit one JSON report on stdout.

Exit codes: 0 feasible, 1 infeasible, 2 usage/input error, 3 invalid
user-supplied deletion set, 4 budget exceeded.

Reports are deterministic: keys are sorted and wall-clock timings appear only
under --timings so that identical inputs yield byte-identical output. --jobs
parallelizes the level probes of `optimum`; results are consumed in level
order, so worker count never changes the report.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from time import perf_counter

from .deletion import DeletionSet, find_deletion_set, verify_deletion_set
from .graph import (
    INF,
    Graph,
    GraphError,
    all_pairs_distances,
    format_edge_list,
    is_connected,
    is_valid_path,
    parse_edge_list,
    path_eccentricity,
)
from .hardness import CandidateBudgetError, generate_hard_instance
from .oracle import OracleBudgetError, esp_decide_oracle
from .skeleton import SkeletonBudgetError
from .solvers import (
    esp_dpd_decide,
    esp_fvs_approx,
    esp_fvs_decide,
    esp_svd_decide,
)
from .cpc import CpcBudgetError

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_BAD_SET = 3
EXIT_BUDGET = 4

_KIND_OF_METHOD = {"fvs": "FVS", "dpd": "DPD", "svd": "SVD"}
_BUDGET_ERRORS = (SkeletonBudgetError, OracleBudgetError, CpcBudgetError,
                  CandidateBudgetError)


class _UsageError(Exception):
    pass


class _BadSetError(Exception):
    pass


def _fresh_counters() -> dict:
    return {"skeletons": 0, "sanity1_pass": 0, "enriched": 0, "dp_entries": 0}


def _load_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_edge_list(text)
    except GraphError as exc:
        raise _UsageError(f"bad edge list in {path}: {exc}") from exc


def _parse_int_list(raw: str, what: str) -> list[int]:
    raw = raw.strip()
    if not raw:
        return []
    try:
        return [int(part) for part in raw.split(",")]
    except ValueError as exc:
        raise _UsageError(f"bad {what} {raw!r}: comma-separated integers expected") from exc


def _resolve_set(g: Graph, method: str, raw: str | None) -> list[int] | None:
    """The deletion set to run with: user-supplied (validated) or found."""
    if method == "oracle":
        if raw is not None:
            raise _UsageError("--set does not apply to the oracle method")
        return None
    kind = _KIND_OF_METHOD[method]
    if raw is not None:
        vs = _parse_int_list(raw, "--set")
        try:
            ok = verify_deletion_set(g, DeletionSet(kind, frozenset(vs)))
        except GraphError as exc:
            raise _BadSetError(str(exc)) from exc
        if not ok:
            raise _BadSetError(f"removing {sorted(set(vs))} does not leave a "
                               f"{kind}-shaped residual")
        return sorted(set(vs))
    ds = find_deletion_set(g, kind, g.n)
    assert ds is not None  # the whole vertex set always qualifies
    return sorted(ds.vertices)


def _emit(report: dict, timings: dict | None) -> None:
    if timings is not None:
        report = dict(report)
        report["timings"] = timings
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")


def _decide_once(g: Graph, method: str, sset: list[int] | None, ell: int,
                 budget: int | None, counters: dict):
    if method == "oracle":
        kw = {} if budget is None else {"budget": budget}
        ans = esp_decide_oracle(g, ell, **kw)
        return ans.feasible, ans.certificate
    if method == "svd":
        ans = esp_svd_decide(g, sset, ell)
        return ans.feasible, ans.certificate
    fn = esp_fvs_decide if method == "fvs" else esp_dpd_decide
    kw = {"counters": counters}
    if budget is not None:
        kw["budget"] = budget
    ans = fn(g, sset, ell, **kw)
    return ans.feasible, ans.certificate


def _cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    if args.ell < 0:
        raise _UsageError("--ell must be >= 0")
    sset = _resolve_set(g, args.method, args.set)
    counters = _fresh_counters()
    t0 = perf_counter()
    feasible, cert = _decide_once(g, args.method, sset, args.ell, args.budget,
                                  counters)
    timings = {"total_s": perf_counter() - t0} if args.timings else None
    _emit({
        "schema": 1,
        "command": "solve",
        "method": args.method,
        "feasible": feasible,
        "ell": args.ell,
        "certificate": cert,
        "parameter_set": sset,
        "counters": counters,
    }, timings)
    return EXIT_FEASIBLE if feasible else EXIT_INFEASIBLE


def _cmd_optimum(args) -> int:
    g = _load_graph(args.graph)
    sset = _resolve_set(g, args.method, args.set)
    dm = all_pairs_distances(g)
    radius = dm.radius()
    if radius >= INF:
        raise _UsageError("graph is disconnected: no path covers everything")
    t0 = perf_counter()

    def probe(ell: int):
        c = _fresh_counters()
        feasible, cert = _decide_once(g, args.method, sset, ell, args.budget, c)
        return feasible, cert, c

    best = None
    counters = _fresh_counters()
    if args.jobs <= 1:
        for ell in range(radius + 1):
            feasible, cert, c = probe(ell)
            for key in counters:
                counters[key] += c[key]
            if feasible:
                best = (ell, cert)
                break
    else:
        with ThreadPoolExecutor(max_workers=args.jobs) as ex:
            futs = [ex.submit(probe, ell) for ell in range(radius + 1)]
            for ell, fut in enumerate(futs):
                feasible, cert, c = fut.result()
                for key in counters:
                    counters[key] += c[key]
                if feasible:
                    best = (ell, cert)
                    for later in futs[ell + 1:]:
                        later.cancel()
                    break
    assert best is not None  # a center vertex is feasible at the radius
    ell, cert = best
    timings = {"total_s": perf_counter() - t0} if args.timings else None
    _emit({
        "schema": 1,
        "command": "optimum",
        "method": args.method,
        "feasible": True,
        "ell": ell,
        "certificate": cert,
        "parameter_set": sset,
        "counters": counters,
    }, timings)
    return EXIT_FEASIBLE


def _cmd_approx(args) -> int:
    g = _load_graph(args.graph)
    if not args.eps > 0:
        raise _UsageError("--eps must be positive")
    sset = _resolve_set(g, "fvs", args.set)
    counters = _fresh_counters()
    t0 = perf_counter()
    kw = {"counters": counters}
    if args.budget is not None:
        kw["budget"] = args.budget
    cert, ell = esp_fvs_approx(g, sset, args.eps, **kw)
    timings = {"total_s": perf_counter() - t0} if args.timings else None
    _emit({
        "schema": 1,
        "command": "approx",
        "method": "fvs",
        "eps": args.eps,
        "feasible": True,
        "ell": ell,
        "certificate": cert,
        "eccentricity": path_eccentricity(g, cert),
        "parameter_set": sset,
        "counters": counters,
    }, timings)
    return EXIT_FEASIBLE


def _cmd_verify_path(args) -> int:
    g = _load_graph(args.graph)
    if args.ell < 0:
        raise _UsageError("--ell must be >= 0")
    path = _parse_int_list(args.path, "--path")
    dm = all_pairs_distances(g)
    valid = is_valid_path(g, path)
    shortest = valid and len(path) - 1 == dm[path[0], path[-1]]
    ecc = None
    if valid:
        try:
            ecc = path_eccentricity(g, path, dm)
        except GraphError:
            ecc = None  # disconnected graph: no finite eccentricity
    feasible = bool(valid and shortest and ecc is not None and ecc <= args.ell)
    _emit({
        "schema": 1,
        "command": "verify-path",
        "feasible": feasible,
        "ell": args.ell,
        "certificate": path,
        "valid_path": valid,
        "shortest": shortest,
        "eccentricity": ecc,
    }, None)
    return EXIT_FEASIBLE if feasible else EXIT_INFEASIBLE


def _cmd_gen_hard(args) -> int:
    g = _load_graph(args.graph)
    if args.k < 1:
        raise _UsageError("--k must be >= 1")
    hi = generate_hard_instance(g, args.k)
    out = args.out if args.out is not None else args.graph + ".hard"
    sidecar = out + ".json"
    Path(out).write_text(format_edge_list(hi.h))
    Path(sidecar).write_text(json.dumps({
        "schema": 1,
        "k_prime": hi.k_prime,
        "x": sorted(hi.x),
        "labels": {str(v): tag for v, tag in hi.labels.items()},
    }, sort_keys=True) + "\n")
    _emit({
        "schema": 1,
        "command": "gen-hard",
        "n": hi.h.n,
        "m": hi.h.m,
        "k_prime": hi.k_prime,
        "x": sorted(hi.x),
        "out": out,
        "sidecar": sidecar,
    }, None)
    return EXIT_FEASIBLE


def _cmd_stats(args) -> int:
    g = _load_graph(args.graph)
    dm = all_pairs_distances(g)
    connected = is_connected(g)
    degs = [g.degree(v) for v in range(g.n)]
    _emit({
        "schema": 1,
        "command": "stats",
        "n": g.n,
        "m": g.m,
        "connected": connected,
        "radius": dm.radius() if connected and g.n else None,
        "diameter": dm.diameter() if connected and g.n else None,
        "degree_min": min(degs) if degs else None,
        "degree_max": max(degs) if degs else None,
    }, None)
    return EXIT_FEASIBLE


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("graph", help="edge-list file ('n m' header, 'u v' lines)")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized auxiliary workflows; the "
                             "solvers themselves are deterministic")
    common.add_argument("--jobs", type=int, default=1,
                        help="worker threads for optimum's level probes")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings in the report")
    common.add_argument("--budget", type=int, default=None,
                        help="override the enumeration budget")

    p = argparse.ArgumentParser(prog="espath",
                                description="eccentricity shortest path solvers")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("solve", parents=[common], help="decide one level")
    sp.add_argument("--method", choices=("oracle", "fvs", "dpd", "svd"),
                    required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--set", default=None,
                    help="deletion set as v1,v2,... (found automatically if omitted)")
    sp.set_defaults(fn=_cmd_solve)

    op = sub.add_parser("optimum", parents=[common],
                        help="smallest feasible level")
    op.add_argument("--method", choices=("oracle", "fvs", "dpd", "svd"),
                    required=True)
    op.add_argument("--set", default=None)
    op.set_defaults(fn=_cmd_optimum)

    ap = sub.add_parser("approx", parents=[common],
                        help="(1+eps)-approximate smallest level")
    ap.add_argument("--eps", type=float, required=True)
    ap.add_argument("--set", default=None)
    ap.set_defaults(fn=_cmd_approx)

    vp = sub.add_parser("verify-path", parents=[common],
                        help="check a candidate certificate")
    vp.add_argument("--path", required=True, help="p0,p1,...")
    vp.add_argument("--ell", type=int, required=True)
    vp.set_defaults(fn=_cmd_verify_path)

    gh = sub.add_parser("gen-hard", parents=[common],
                        help="emit a hard instance built from the input graph")
    gh.add_argument("--k", type=int, required=True)
    gh.add_argument("--out", default=None,
                    help="output edge-list path (default: <graph>.hard)")
    gh.set_defaults(fn=_cmd_gen_hard)

    stp = sub.add_parser("stats", parents=[common], help="basic graph facts")
    stp.set_defaults(fn=_cmd_stats)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.seed is not None:
        random.seed(args.seed)
    try:
        return args.fn(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _BadSetError as exc:
        print(f"error: invalid deletion set: {exc}", file=sys.stderr)
        return EXIT_BAD_SET
    except _BUDGET_ERRORS as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
