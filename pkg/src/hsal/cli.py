"""Benchmark and service command line.

Subcommands:
  run         simulated-oracle benchmark over one or more seeds
  graph-eval  compare graph constructions under the exhaustive criterion
  timing      mean per-query selection time per strategy
  serve       launch the HTTP labeling service

All flags default to the benchmark protocol (k=10, perplexity=30,
50 queries, 25*ln N subqueries, 3 initial queries) so a bare `run`
reproduces it. Exit codes: 0 ok, 1 user error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .dataset import load_csv
from .errors import HsalError
from .session import SessionConfig, auc, curve_export, run_simulated
from .strategies import STRATEGY_KINDS, StrategyConfig

GRAPH_KIND_CHOICES = ("perplexity", "mean", "binary", "knn")


def _add_protocol_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True, help="CSV file with a label column")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--queries", type=int, default=50)
    p.add_argument("--subquery-factor", type=float, default=25.0)
    p.add_argument("--initial-queries", type=int, default=3)
    p.add_argument("--seeds", type=int, default=1, help="run seeds 0..N-1")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsal")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulated-oracle benchmark")
    _add_protocol_flags(run)
    run.add_argument("--strategy", choices=STRATEGY_KINDS, default="hse")
    run.add_argument("--graph", choices=GRAPH_KIND_CHOICES, default="perplexity")
    run.add_argument("--out", default=None, help="output directory")

    ge = sub.add_parser("graph-eval", help="graph comparison, criterion fixed")
    _add_protocol_flags(ge)
    ge.add_argument(
        "--kinds",
        default="mean,binary,knn,perplexity",
        help="comma-separated graph kinds",
    )
    ge.add_argument("--out", default=None)

    tm = sub.add_parser("timing", help="per-query selection time")
    _add_protocol_flags(tm)
    tm.add_argument("--strategies", default="hse,eer_full")
    tm.add_argument("--graph", choices=GRAPH_KIND_CHOICES, default="perplexity")
    tm.add_argument("--out", default=None)

    srv = sub.add_parser("serve", help="launch the labeling service")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--dataset-dir", default=None)
    srv.add_argument("--snapshot-dir", default=None)
    srv.add_argument("--ui-dir", default=None, help="serve a built browser client")
    return parser


def _config(args, strategy: str, graph_kind: str, seed: int) -> SessionConfig:
    return SessionConfig(
        k=args.k,
        perplexity=args.perplexity,
        query_budget=args.queries,
        subquery_factor=args.subquery_factor,
        initial_queries=args.initial_queries,
        strategy=StrategyConfig(strategy, seed=seed),
        graph_kind=graph_kind,
        seed=seed,
    )


def _sweep(dataset, args, strategy: str, graph_kind: str) -> list[dict]:
    """Per-seed curves, aggregated in seed order."""
    seeds = list(range(args.seeds))

    def one(seed: int) -> dict:
        curve, times = run_simulated(dataset, _config(args, strategy, graph_kind, seed))
        return {
            "record": curve_export(_config(args, strategy, graph_kind, seed), curve),
            "times": times,
        }

    with ThreadPoolExecutor(max_workers=min(4, len(seeds))) as pool:
        return list(pool.map(one, seeds))


def _dump(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")


def _cmd_run(args) -> int:
    dataset = load_csv(args.dataset)
    results = _sweep(dataset, args, args.strategy, args.graph)
    aucs = [r["record"]["auc"] for r in results]
    summary = {
        "dataset": dataset.name,
        "strategy": args.strategy,
        "graph_kind": args.graph,
        "config": {
            "k": args.k,
            "perplexity": args.perplexity,
            "queries": args.queries,
            "subquery_factor": args.subquery_factor,
            "initial_queries": args.initial_queries,
        },
        "seeds": args.seeds,
        "auc_mean": float(np.mean(aucs)),
        "auc_std": float(np.std(aucs)),
        "curves": [r["record"] for r in results],
    }
    text = json.dumps(summary, indent=2, sort_keys=True)
    if args.out:
        out = Path(args.out)
        _dump(out / "summary.json", summary)
        for r in results:
            _dump(out / f"curve_{args.strategy}_seed{r['record']['seed']}.json", r["record"])
    print(text)
    return 0


def _cmd_graph_eval(args) -> int:
    dataset = load_csv(args.dataset)
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    rows = []
    for kind in kinds:
        results = _sweep(dataset, args, "eer_full", kind)
        aucs = [r["record"]["auc"] for r in results]
        rows.append(
            {
                "graph_kind": kind,
                "auc_mean": float(np.mean(aucs)),
                "auc_std": float(np.std(aucs)),
            }
        )
    payload = {
        "dataset": dataset.name,
        "criterion": "eer_full",
        "seeds": args.seeds,
        "rows": rows,
    }
    if args.out:
        _dump(Path(args.out), payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_timing(args) -> int:
    dataset = load_csv(args.dataset)
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    rows = []
    for strategy in strategies:
        results = _sweep(dataset, args, strategy, args.graph)
        times = [t for r in results for t in r["times"]]
        rows.append(
            {
                "strategy": strategy,
                "mean_seconds_per_query": float(np.mean(times)),
                "max_seconds_per_query": float(np.max(times)),
                "auc_mean": float(np.mean([r["record"]["auc"] for r in results])),
            }
        )
    payload = {"dataset": dataset.name, "seeds": args.seeds, "rows": rows}
    if args.out:
        _dump(Path(args.out), payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        dataset_dir=args.dataset_dir,
        snapshot_dir=args.snapshot_dir,
        ui_dir=args.ui_dir,
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits 1 when the port is busy
        return int(exc.code or 1)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    handlers = {
        "run": _cmd_run,
        "graph-eval": _cmd_graph_eval,
        "timing": _cmd_timing,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (HsalError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
