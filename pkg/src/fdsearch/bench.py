"""Experiment runner: repeated seeded solves, CSV output, sensitivity
sweeps, and the root-activity dump.

CSV layout: one header, one row per run (``agg=0``), then one aggregate
row (``agg=1``) carrying means, the sample standard deviation of the
(timeout-clamped) runtimes, the success count and runtime quartiles.
Timed-out runs contribute the configured timeout to the time aggregates;
``n_success`` counts runs that did not time out.
"""

from __future__ import annotations

import argparse
import io
import os
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from .benchmarks import (
    BUNDLED_KNAPSACKS,
    build_knapsack_cop,
    build_knapsack_csp,
    build_magic_square,
    load_bundled_instance,
    parse_knapsack_file,
)
from .heuristics import HeuristicConfig
from .model import Model
from .search import RestartPolicy, Status, probe_activities, solve

RUN_COLUMNS = (
    "run_id", "seed", "status", "time_s", "choice_points",
    "failures", "restarts", "objective", "probes", "agg",
)
AGG_COLUMNS = (
    "mu_time_s", "sigma_time_s", "mu_choice_points", "mu_failures",
    "n_success", "q0_time_s", "q1_time_s", "q2_time_s", "q3_time_s",
    "q4_time_s", "med_probes",
)
HEADER = RUN_COLUMNS + AGG_COLUMNS


@dataclass
class RunConfig:
    """One experiment: a benchmark, a heuristic, a restart strategy and the
    engine parameters (defaults: alpha=8, gamma=0.999, delta=0.2, 50 runs,
    300 s timeout)."""

    bench: str = "msq:7"
    heuristic: str = "abs"
    restart: str = "nr"  # "nr" or "geo:RHO"
    alpha: float = 8.0
    gamma: float = 0.999
    delta: float = 0.2
    value_heuristic: bool = True
    runs: int = 50
    timeout: float = 300.0
    seed: int = 0
    threads: Optional[int] = None


@dataclass
class RunRecord:
    config: RunConfig
    rows: list[dict]
    aggregate: dict


def build_benchmark(selector: str) -> Model:
    """Resolve a selector like ``msq:7``, ``knap-csp:1-4`` or
    ``knap-cop:/path/to/instance.txt``."""
    kind, sep, arg = selector.partition(":")
    if not sep:
        raise ValueError(f"benchmark selector {selector!r} needs a ':<arg>' part")
    if kind == "msq":
        return build_magic_square(int(arg))
    if kind in ("knap-csp", "knap-cop"):
        if arg in BUNDLED_KNAPSACKS:
            inst = load_bundled_instance(arg)
        else:
            inst = parse_knapsack_file(arg)
        return build_knapsack_csp(inst) if kind == "knap-csp" else build_knapsack_cop(inst)
    raise ValueError(f"unknown benchmark kind {kind!r} in {selector!r}")


def parse_restart(text: str) -> RestartPolicy:
    if text == "nr":
        return RestartPolicy.none()
    if text.startswith("geo:"):
        return RestartPolicy.geometric(float(text[4:]))
    raise ValueError(f"restart must be 'nr' or 'geo:RHO', got {text!r}")


def heuristic_config(config: RunConfig) -> HeuristicConfig:
    return HeuristicConfig(
        kind=config.heuristic,
        alpha=config.alpha,
        gamma=config.gamma,
        delta=config.delta,
        value_heuristic=config.value_heuristic,
    )


def run_single(config: RunConfig, run_id: int, seed: int) -> dict:
    """One independent solve; safe to call in a worker process."""
    model = build_benchmark(config.bench)
    stats = solve(
        model,
        heuristic_config(config),
        restart=parse_restart(config.restart),
        seed=seed,
        timeout=config.timeout,
    )
    return {
        "run_id": run_id,
        "seed": seed,
        "status": stats.status.value,
        # rounded at the source so rows, aggregates and CSV agree exactly
        "time_s": round(stats.wall_time, 6),
        "choice_points": stats.choice_points,
        "failures": stats.failures,
        "restarts": stats.restarts,
        "objective": stats.best_objective,
        "probes": stats.probes,
    }


def _worker(args: tuple) -> dict:
    config, run_id, seed = args
    return run_single(config, run_id, seed)


def _thread_budget(config: RunConfig) -> int:
    env = os.environ.get("BENCH_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    if config.threads is not None:
        cap = min(cap, config.threads)
    return max(1, min(cap, config.runs))


def aggregate_rows(rows: Sequence[dict], timeout: float) -> dict:
    """Recompute the aggregate row from per-run rows."""
    times = [
        timeout if row["status"] == Status.TIMED_OUT.value else row["time_s"]
        for row in rows
    ]
    n = len(rows)
    if n == 0:
        return {key: 0.0 for key in AGG_COLUMNS} | {"n_success": 0}
    if n >= 2:
        q1, q2, q3 = statistics.quantiles(times, n=4, method="inclusive")
        sigma = statistics.stdev(times)
    else:
        q1 = q2 = q3 = times[0]
        sigma = 0.0
    return {
        "mu_time_s": statistics.fmean(times),
        "sigma_time_s": sigma,
        "mu_choice_points": statistics.fmean(r["choice_points"] for r in rows),
        "mu_failures": statistics.fmean(r["failures"] for r in rows),
        "n_success": sum(1 for r in rows if r["status"] != Status.TIMED_OUT.value),
        "q0_time_s": min(times),
        "q1_time_s": q1,
        "q2_time_s": q2,
        "q3_time_s": q3,
        "q4_time_s": max(times),
        "med_probes": statistics.median(r["probes"] for r in rows),
    }


def run_experiment(config: RunConfig) -> RunRecord:
    """Run ``config.runs`` independent solves with seeds seed..seed+runs-1,
    optionally in parallel; aggregation order is fixed by seed order, so the
    output is thread-count independent."""
    jobs = [
        (config, run_id, config.seed + run_id) for run_id in range(config.runs)
    ]
    workers = _thread_budget(config)
    if workers <= 1 or config.runs <= 1:
        rows = [_worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_worker, jobs))
    return RunRecord(config, rows, aggregate_rows(rows, config.timeout))


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def write_rows(out: io.TextIOBase, record: RunRecord, prefix: dict | None = None) -> None:
    prefix = prefix or {}
    for row in record.rows:
        cells = [_fmt(v) for v in prefix.values()]
        cells += [_fmt(row.get(c)) for c in RUN_COLUMNS[:-1]] + ["0"]
        cells += [""] * len(AGG_COLUMNS)
        out.write(",".join(cells) + "\n")
    agg = record.aggregate
    cells = [_fmt(v) for v in prefix.values()]
    cells += [""] * (len(RUN_COLUMNS) - 1) + ["1"]
    cells += [_fmt(agg[c]) for c in AGG_COLUMNS]
    out.write(",".join(cells) + "\n")


def write_csv(out: io.TextIOBase, record: RunRecord) -> None:
    out.write(",".join(HEADER) + "\n")
    write_rows(out, record)


def sweep(param: str, values: Sequence[float], config: RunConfig) -> list[RunRecord]:
    """Run one block per parameter value (``delta`` or ``gamma``)."""
    if param not in ("delta", "gamma"):
        raise ValueError(f"sweepable parameters are delta and gamma, not {param!r}")
    return [run_experiment(replace(config, **{param: v})) for v in values]


def write_sweep_csv(
    out: io.TextIOBase, param: str, values: Sequence[float], records: Sequence[RunRecord]
) -> None:
    out.write(",".join(("param", "value") + HEADER) + "\n")
    for value, record in zip(values, records):
        write_rows(out, record, prefix={"param": param, "value": value})


def dump_activities(config: RunConfig) -> list[tuple[int, float]]:
    """Run only the probing phase and return (variable, mean activity) rows,
    excluding variables fixed at the root by singleton consistency."""
    model = build_benchmark(config.bench)
    hcfg = HeuristicConfig(
        kind="abs",
        alpha=config.alpha,
        gamma=config.gamma,
        delta=config.delta,
        value_heuristic=False,
    )
    activities, fixed, _stats = probe_activities(
        model, hcfg, seed=config.seed, timeout=config.timeout
    )
    if activities is None:
        return []
    return [
        (x, activities[x]) for x in range(model.num_vars) if not fixed[x]
    ]


# -- command line --


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bench", required=True, help="msq:N | knap-csp:ID | knap-cop:ID")
    parser.add_argument("--heur", default="abs", choices=("abs", "ibs", "wdeg"))
    parser.add_argument("--restart", default="nr", help="nr or geo:RHO")
    parser.add_argument("--alpha", type=float, default=8.0)
    parser.add_argument("--gamma", type=float, default=0.999)
    parser.add_argument("--delta", type=float, default=0.2)
    parser.add_argument("--no-value-heur", action="store_true")
    parser.add_argument("--runs", type=int, default=50)
    parser.add_argument("--timeout", type=float, default=300.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--out", default=None, help="CSV output path (default stdout)")


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        bench=args.bench,
        heuristic=args.heur,
        restart=args.restart,
        alpha=args.alpha,
        gamma=args.gamma,
        delta=args.delta,
        value_heuristic=not args.no_value_heur,
        runs=args.runs,
        timeout=args.timeout,
        seed=args.seed,
        threads=args.threads,
    )


def _open_out(path: Optional[str]):
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline=""), True


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Benchmark harness for the finite-domain solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment")
    _add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="parameter sensitivity sweep")
    _add_common(p_sweep)
    p_sweep.add_argument("--param", required=True, choices=("delta", "gamma"))
    p_sweep.add_argument("--values", required=True, help="comma-separated values")

    p_act = sub.add_parser("activities", help="dump root activity levels")
    _add_common(p_act)

    args = parser.parse_args(argv)
    config = _config_from_args(args)
    try:
        build_benchmark(config.bench)  # fail fast on bad selectors
        parse_restart(config.restart)
        heuristic_config(config)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))  # exits with code 2

    try:
        out, close = _open_out(args.out)
        try:
            if args.command == "run":
                record = run_experiment(config)
                write_csv(out, record)
                _summary(record, config)
            elif args.command == "sweep":
                values = [float(v) for v in args.values.split(",") if v]
                if not values:
                    parser.error("--values must list at least one number")
                records = sweep(args.param, values, config)
                write_sweep_csv(out, args.param, values, records)
                for value, record in zip(values, records):
                    _summary(record, config, label=f"{args.param}={value}")
            else:
                rows = dump_activities(config)
                out.write("var,activity\n")
                for var, act in rows:
                    out.write(f"{var},{act:.9g}\n")
        finally:
            if close:
                out.close()
    except OSError as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1
    return 0


def _summary(record: RunRecord, config: RunConfig, label: str = "") -> None:
    agg = record.aggregate
    tag = f" [{label}]" if label else ""
    print(
        f"# {config.bench} {config.heuristic}|{config.restart}{tag}: "
        f"mu_T={agg['mu_time_s']:.3f}s sigma_T={agg['sigma_time_s']:.3f} "
        f"mu_C={agg['mu_choice_points']:.1f} F={agg['n_success']}/{len(record.rows)}",
        file=sys.stderr,
    )


if __name__ == "__main__":
    sys.exit(main())
