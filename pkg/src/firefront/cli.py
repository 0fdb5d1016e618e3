"""Command line runner: scenario ingestion, solves, exports.

Subcommands: simulate (one fixed-point solve over the configured horizon),
global (chunked solve with restarts), continue (gamma-descent runs), verify
(randomized inequality suite). Outputs are plain CSV files plus JSON records
for continuation results and failures. Exit status: 0 on success, 2 for
configuration problems, 1 for runtime failures (nonconvergence, failed
checks, I/O).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from bisect import bisect_left
from dataclasses import replace

from .config import (
    DEFAULT_CADENCE,
    DEFAULT_OUT,
    DEFAULT_SEED,
    DEFAULT_VERIFY_COUNT,
    DEFAULT_VERIFY_GRID,
    RunConfig,
    parse_config,
)
from .errors import ConfigError, FirefrontError, NonconvergenceError
from .front import extract_front
from .global_solve import ChunkPlan, default_chunk_length, gamma_continuation, solve_global
from .grid import h1_norm, l2_norm
from .model import convection_forcing, ignition_forcing
from .solver import solve_short_time
from .verify import run_suite, write_suite_csv

DIAGNOSTICS_HEADER = [
    "step",
    "t",
    "l2(u)",
    "h1(u)",
    "l2(f1)",
    "l2(f2)",
    "picard_iters",
    "picard_residual",
    "junction_jump",
    "regularity_ratio",
]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="firefront",
        description="Fire-front temperature evolution on a rectangle grid.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument(
            "--cadence", type=int, default=None, help="write every k-th step"
        )

    sim = sub.add_parser("simulate", help="fixed-point solve over one window")
    sim.add_argument("config", help="configuration file")
    add_common(sim)

    glb = sub.add_parser("global", help="chunked solve with exact restarts")
    glb.add_argument("config", help="configuration file")
    glb.add_argument(
        "--horizon", type=float, default=None, help="cover [0, H] instead of the configured horizon"
    )
    add_common(glb)

    cont = sub.add_parser("continue", help="solve along a decreasing gamma sequence")
    cont.add_argument("config", help="configuration file")
    cont.add_argument(
        "--gammas",
        default=None,
        help="comma-separated, strictly decreasing values in (1, 2]",
    )
    add_common(cont)

    ver = sub.add_parser("verify", help="randomized inequality suite")
    ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ver.add_argument("--grid", type=int, default=DEFAULT_VERIFY_GRID)
    ver.add_argument("--count", type=int, default=DEFAULT_VERIFY_COUNT)
    add_common(ver)
    return parser


def _config_from_args(args) -> RunConfig:
    if args.command == "verify":
        return RunConfig(
            command="verify",
            scenario=None,
            outdir=args.out if args.out is not None else DEFAULT_OUT,
            cadence=args.cadence if args.cadence is not None else DEFAULT_CADENCE,
            seed=args.seed,
            verify_grid=args.grid,
            verify_count=args.count,
        )
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration file: {exc}") from None
    base_dir = os.path.dirname(os.path.abspath(args.config))
    config = parse_config(text, command=args.command, base_dir=base_dir)

    updates = {}
    if args.out is not None:
        updates["outdir"] = args.out
    if args.cadence is not None:
        updates["cadence"] = args.cadence
    if getattr(args, "horizon", None) is not None:
        updates["horizon"] = args.horizon
    if getattr(args, "gammas", None) is not None:
        try:
            gammas = tuple(
                float(tok) for tok in args.gammas.split(",") if tok.strip()
            )
        except ValueError:
            raise ConfigError(
                f"--gammas must be comma-separated numbers, got {args.gammas!r}"
            ) from None
        updates["gammas"] = gammas
    return replace(config, **updates) if updates else config


def _fmt(x) -> str:
    return repr(float(x))


def write_snapshot_csv(path, field) -> None:
    """Node values, row-major, header x,y,u."""
    grid = field.grid
    xs = grid.xs()
    ys = grid.ys()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "u"])
        for i in range(grid.nx):
            for j in range(grid.ny):
                writer.writerow([_fmt(xs[i]), _fmt(ys[j]), _fmt(field.values[i, j])])


def write_fronts_csv(path, contours) -> None:
    """All sampled fronts in one file, header t,polyline_id,x,y."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "polyline_id", "x", "y"])
        for contour in contours:
            for pid, line in enumerate(contour.polylines):
                for x, y in line:
                    writer.writerow([_fmt(contour.time), pid, _fmt(x), _fmt(y)])


def write_diagnostics_csv(path, traj, scenario, row_meta) -> None:
    """One row per trajectory snapshot; row_meta[m] supplies the fixed-point
    columns (iterations, residual, regularity ratio, junction jump)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DIAGNOSTICS_HEADER)
        for m, field in enumerate(traj.fields):
            t = traj.t0 + m * traj.dt
            t_data = min(t, scenario.horizon)
            ign = ignition_forcing(field, scenario.theta_at(t_data), scenario.kernel)
            conv = convection_forcing(
                field,
                scenario.omega_at(t_data),
                scenario.beta,
                scenario.gamma,
            )
            iters, resid, ratio, jump = row_meta[m]
            writer.writerow(
                [
                    m,
                    _fmt(t),
                    _fmt(l2_norm(field)),
                    _fmt(h1_norm(field)),
                    _fmt(l2_norm(ign)),
                    _fmt(l2_norm(conv)),
                    iters,
                    _fmt(resid),
                    _fmt(jump),
                    _fmt(ratio),
                ]
            )


def _uniform_row_meta(traj, report):
    resid = report.residuals[-1] if report.residuals else 0.0
    row = (report.iterations, resid, report.regularity_ratio, 0.0)
    return [row] * (traj.n_steps + 1)


def _chunked_row_meta(traj, plan):
    boundaries = [
        int(round((tj - traj.t0) / traj.dt)) for tj in plan.junction_times
    ]
    meta = []
    for m in range(traj.n_steps + 1):
        # a junction snapshot belongs to the window that produced it
        k = bisect_left(boundaries, m)
        rep = plan.reports[k]
        resid = rep.residuals[-1] if rep.residuals else 0.0
        meta.append((rep.iterations, resid, rep.regularity_ratio, 0.0))
    return meta


def _write_failure(outdir, record) -> None:
    with open(os.path.join(outdir, "failure.json"), "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_run_outputs(config, traj, scenario, row_meta) -> None:
    sampled = range(0, traj.n_steps + 1, config.cadence)
    contours = []
    for m in sampled:
        field = traj.fields[m]
        write_snapshot_csv(
            os.path.join(config.outdir, f"snapshot_{m:06d}.csv"), field
        )
        t = traj.t0 + m * traj.dt
        t_data = min(t, scenario.horizon)
        contours.append(extract_front(field, scenario.theta_at(t_data), t))
    write_fronts_csv(os.path.join(config.outdir, "fronts.csv"), contours)
    write_diagnostics_csv(
        os.path.join(config.outdir, "diagnostics.csv"), traj, scenario, row_meta
    )
    print(
        f"wrote {len(list(sampled))} snapshots, fronts.csv, diagnostics.csv "
        f"to {config.outdir}"
    )


def _run_simulate(config) -> int:
    scenario = config.scenario
    traj, report = solve_short_time(scenario)
    if not report.converged:
        _write_failure(
            config.outdir,
            {
                "error": "nonconvergence",
                "message": "fixed-point iteration did not converge",
                "iterations": report.iterations,
                "residuals": list(report.residuals),
            },
        )
        print(
            f"fixed-point iteration did not converge after {report.iterations} "
            f"iterations (last residual {report.residuals[-1]:.3e}); "
            "consider the global subcommand, which shrinks the window",
            file=sys.stderr,
        )
        return 1
    _write_run_outputs(config, traj, scenario, _uniform_row_meta(traj, report))
    return 0


def _run_global(config) -> int:
    scenario = config.scenario
    chunk = (
        config.chunk_length
        if config.chunk_length is not None
        else default_chunk_length(scenario)
    )
    plan = ChunkPlan(chunk)
    try:
        traj, plan_out = solve_global(scenario, config.horizon, plan)
    except NonconvergenceError as exc:
        _write_failure(
            config.outdir,
            {
                "error": "nonconvergence",
                "message": str(exc),
                "iterations": exc.report.iterations if exc.report else None,
                "residuals": list(exc.report.residuals) if exc.report else [],
                "converged_chunks": len(exc.plan.reports) if exc.plan else 0,
            },
        )
        print(str(exc), file=sys.stderr)
        return 1
    _write_run_outputs(config, traj, scenario, _chunked_row_meta(traj, plan_out))
    return 0


def _run_continue(config) -> int:
    scenario = config.scenario
    gammas = config.gammas if config.gammas else (1.5, 1.25, 1.1, 1.05)
    try:
        traj, report = gamma_continuation(scenario, gammas)
    except NonconvergenceError as exc:
        _write_failure(
            config.outdir,
            {
                "error": "nonconvergence",
                "message": str(exc),
                "iterations": exc.report.iterations if exc.report else None,
                "residuals": list(exc.report.residuals) if exc.report else [],
            },
        )
        print(str(exc), file=sys.stderr)
        return 1
    record = {
        "gammas": list(report.gammas),
        "differences": list(report.differences),
        "smallness": report.smallness,
        "epsilon0": report.epsilon0,
        "cauchy": report.cauchy,
    }
    with open(os.path.join(config.outdir, "continuation.json"), "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
    final_scenario = scenario.with_gamma(report.gammas[-1])
    _write_run_outputs(
        config, traj, final_scenario, _chunked_row_meta(traj, report.plans[-1])
    )
    print(
        f"continuation over gammas {list(report.gammas)}: cauchy={report.cauchy}"
    )
    return 0


def _run_verify(config) -> int:
    results = run_suite(
        seed=config.seed,
        grid_sizes=(config.verify_grid,),
        count=config.verify_count,
    )
    path = os.path.join(config.outdir, "checks.csv")
    write_suite_csv(results, path, config.seed)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed; wrote {path}")
    if failed:
        worst = min(failed, key=lambda r: r.margin)
        _write_failure(
            config.outdir,
            {
                "error": "verification_failure",
                "failed": len(failed),
                "total": len(results),
                "worst": {
                    "name": worst.name,
                    "lhs": worst.lhs,
                    "rhs": worst.rhs,
                    "margin": worst.margin,
                    "grid": worst.grid,
                },
            },
        )
        print(f"{len(failed)} checks failed; see {path}", file=sys.stderr)
        return 1
    return 0


_HANDLERS = {
    "simulate": _run_simulate,
    "global": _run_global,
    "continue": _run_continue,
    "verify": _run_verify,
}


def _print_config_error(exc: ConfigError) -> None:
    print("configuration error:", file=sys.stderr)
    for problem in exc.problems:
        print(f"  {problem}", file=sys.stderr)


def run(config: RunConfig) -> int:
    """Execute a parsed configuration; returns the process exit status."""
    try:
        os.makedirs(config.outdir, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory {config.outdir}: {exc}", file=sys.stderr)
        return 1
    try:
        return _HANDLERS[config.command](config)
    except ConfigError as exc:
        _print_config_error(exc)
        return 2
    except FirefrontError as exc:
        _write_failure(
            config.outdir, {"error": type(exc).__name__, "message": str(exc)}
        )
        print(str(exc), file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except ConfigError as exc:
        _print_config_error(exc)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
