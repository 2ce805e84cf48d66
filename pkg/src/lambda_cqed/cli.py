"""Command-line entry point: ``lambda-cqed <mode> [--config FILE] [--out PATH] ...``"""

from __future__ import annotations

import argparse
import sys
import time

from . import config as cfgmod
from .config import ConfigError, RunConfig
from .dynamics import IntegrationError, VacuumError, default_tau_grid, g2_tau
from .eigenstructure import LADDER_COLUMNS, ladder_scan
from .liouvillian import assemble_liouvillian
from .output import atomic_write, json_text, render
from .steadystate import SteadyStateError, solve_steady
from .sweep import RECORD_COLUMNS, InfeasibleError, find_magic, sweep_1d, sweep_2d

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE = 0, 1, 2


class ComputeError(RuntimeError):
    pass


def _record_rows(records):
    return [r.to_dict() for r in records]


def compute(cfg: RunConfig) -> tuple[str, int]:
    """Rendered output text and the number of data points for one run."""
    p = cfg.params
    if cfg.mode == "eigen":
        rows = ladder_scan(p.g, p.delta_L, cfg.omega_L_grid.values(), cfg.sectors)
        rows = [dict(zip(LADDER_COLUMNS, r)) for r in rows]
        return render(rows, LADDER_COLUMNS, cfg.format), len(rows)
    if cfg.mode == "steady":
        records = sweep_1d(p, [p.delta_p])
        if records[0].n_cav is None:
            raise ComputeError("steady-state solve failed")
        return render(_record_rows(records), RECORD_COLUMNS, cfg.format), 1
    if cfg.mode == "sweep1d":
        records = sweep_1d(p, cfg.delta_p_grid.values(), workers=cfg.workers)
        return render(_record_rows(records), RECORD_COLUMNS, cfg.format), len(records)
    if cfg.mode == "sweep2d":
        records = sweep_2d(p, cfg.delta_p_grid.values(), cfg.omega_L_grid.values(), cfg.workers)
        return render(_record_rows(records), RECORD_COLUMNS, cfg.format), len(records)
    if cfg.mode == "magic":
        dps = cfg.delta_p_grid.values()
        oms = cfg.omega_L_grid.values()
        try:
            result = find_magic(p, oms, dps, cfg.photon_floor, workers=cfg.workers)
        except InfeasibleError as exc:
            raise ComputeError(str(exc)) from exc
        d = result.to_dict()
        d["delta_L"] = p.delta_L
        text = json_text(d) if cfg.format == "csv" else render([d], list(d), "jsonl")
        return text, len(dps) * len(oms)
    if cfg.mode == "g2tau":
        L = assemble_liouvillian(p)
        try:
            rho = solve_steady(L)
            corr = g2_tau(rho, L, default_tau_grid(cfg.tau_max, cfg.tau_points))
        except (SteadyStateError, VacuumError, IntegrationError) as exc:
            raise ComputeError(str(exc)) from exc
        rows = [{"tau": t, "g2_tau": v} for t, v in zip(corr.tau, corr.g2)]
        return render(rows, ("tau", "g2_tau"), cfg.format), len(rows)
    raise ConfigError(f"unknown mode {cfg.mode!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambda-cqed",
        description="Driven Lambda-atom cavity QED: dressed states, steady-state photon statistics, sweeps.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    helps = {
        "eigen": "eigenvalues of the n-photon block Hamiltonians vs control Rabi frequency",
        "steady": "steady-state observables at one parameter point",
        "sweep1d": "spectrum over the probe detuning",
        "sweep2d": "map over control Rabi frequency and probe detuning",
        "magic": "grid search for the control intensity minimising g2(0)",
        "g2tau": "delayed intensity correlation g2(tau) at the steady state",
    }
    for mode in cfgmod.MODES:
        sp = sub.add_parser(mode, help=helps[mode])
        sp.add_argument("--config", help="JSON configuration file (default: built-in profile)")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=cfgmod.FORMATS, help="output format")
        sp.add_argument("--workers", type=int, help="worker processes for sweeps")
        sp.add_argument("--nmax", type=int, help="override the Fock cutoff")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = cfgmod.parse_config(args.config, mode=args.mode)
        else:
            cfg = cfgmod.config_from_dict({}, mode=args.mode)
        cfg = cfgmod.with_overrides(
            cfg, output=args.out, format=args.format, workers=args.workers, n_max=args.nmax
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    t0 = time.perf_counter()
    try:
        text, points = compute(cfg)
    except ComputeError as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    elapsed = time.perf_counter() - t0

    summary = f"mode={cfg.mode} points={points} wall={elapsed:.2f}s"
    if cfg.output:
        atomic_write(cfg.output, text)
        print(f"{summary} out={cfg.output}")
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
