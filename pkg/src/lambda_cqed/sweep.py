"""Steady-state parameter sweeps and the grid search for the magic control intensity."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .hamiltonian import SystemParams
from .steadystate import SteadySolver, SteadyStateError


@dataclass(frozen=True)
class SweepRecord:
    delta_p: float
    omega_L: float
    delta_L: float
    n_cav: float | None
    g2_zero: float | None
    log10_g2_zero: float | None
    pop_g: float | None
    pop_e: float | None
    pop_m: float | None
    converged: bool

    def to_dict(self) -> dict:
        return asdict(self)


RECORD_COLUMNS = tuple(f.name for f in fields(SweepRecord))


class InfeasibleError(ValueError):
    """No grid point satisfies the photon-number floor."""


@dataclass(frozen=True)
class MagicResult:
    omega_L_star: float
    delta_p_star: float
    g2_min: float
    n_cav_at_min: float
    photon_floor: float

    def to_dict(self) -> dict:
        return asdict(self)


def _evaluate(solver: SteadySolver, delta_p: float, omega_L: float) -> SweepRecord:
    delta_L = solver.params.delta_L
    try:
        obs = solver.observe(delta_p, omega_L)
    except SteadyStateError:
        return SweepRecord(delta_p, omega_L, delta_L, None, None, None, None, None, None, False)
    g2 = obs.g2_zero
    log_g2 = math.log10(g2) if g2 is not None and g2 > 0 else None
    return SweepRecord(
        delta_p=delta_p,
        omega_L=omega_L,
        delta_L=delta_L,
        n_cav=obs.n_cav,
        g2_zero=g2,
        log10_g2_zero=log_g2,
        pop_g=obs.pop_g,
        pop_e=obs.pop_e,
        pop_m=obs.pop_m,
        converged=obs.truncation_ok,
    )


def _run_chunk(args):
    p_base, points = args
    solver = SteadySolver(p_base)
    return [_evaluate(solver, dp, om) for om, dp in points]


def _grid(values, name):
    out = [float(v) for v in values]
    if not out:
        raise ValueError(f"{name} grid must be nonempty")
    if not all(math.isfinite(v) for v in out):
        raise ValueError(f"{name} grid must be finite")
    return out


def evaluate_points(p_base: SystemParams, points, workers: int = 1):
    """Steady-state records for ``(omega_L, delta_p)`` pairs, in input order.

    Each point is computed identically whatever the worker count, so serial
    and parallel runs give the same records.
    """
    points = [(float(om), float(dp)) for om, dp in points]
    workers = max(1, int(workers))
    if workers == 1 or len(points) < 2:
        return _run_chunk((p_base, points))
    n_chunks = min(len(points), 4 * workers)
    bounds = np.linspace(0, len(points), n_chunks + 1).round().astype(int)
    chunks = [(p_base, points[a:b]) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, chunks))
    return [rec for part in parts for rec in part]


def sweep_1d(p_base: SystemParams, delta_p_grid, workers: int = 1):
    """Spectrum over the probe detuning at the control intensity of ``p_base``."""
    dps = _grid(delta_p_grid, "delta_p")
    return evaluate_points(p_base, [(p_base.omega_L, dp) for dp in dps], workers)


def sweep_2d(p_base: SystemParams, delta_p_grid, omega_L_grid, workers: int = 1):
    """Map over (omega_L, delta_p), omega_L outer and delta_p inner."""
    dps = _grid(delta_p_grid, "delta_p")
    oms = _grid(omega_L_grid, "omega_L")
    return evaluate_points(p_base, [(om, dp) for om in oms for dp in dps], workers)


def find_magic(
    p_base: SystemParams,
    omega_L_grid,
    delta_p_grid,
    photon_floor: float = 0.003,
    workers: int = 1,
    records=None,
) -> MagicResult:
    """Grid point of smallest g2(0) among those with ``n_cav >= photon_floor``.

    Ties go to the smaller omega_L, then the smaller |delta_p|. Pass
    ``records`` from an earlier :func:`sweep_2d` over the same grids to skip
    recomputation.
    """
    if not photon_floor >= 0:
        raise ValueError(f"photon_floor must be >= 0, got {photon_floor}")
    if records is None:
        records = sweep_2d(p_base, delta_p_grid, omega_L_grid, workers)
    feasible = [
        r for r in records
        if r.converged and r.g2_zero is not None and r.n_cav >= photon_floor
    ]
    if not feasible:
        raise InfeasibleError(f"no grid point reaches n_cav >= {photon_floor}")
    best = min(feasible, key=lambda r: (r.g2_zero, r.omega_L, abs(r.delta_p)))
    return MagicResult(
        omega_L_star=best.omega_L,
        delta_p_star=best.delta_p,
        g2_min=best.g2_zero,
        n_cav_at_min=best.n_cav,
        photon_floor=float(photon_floor),
    )


def records_to_arrays(records) -> dict:
    """Column arrays with NaN for missing values."""
    out = {}
    for name in RECORD_COLUMNS:
        vals = [getattr(r, name) for r in records]
        if name == "converged":
            out[name] = np.array(vals, dtype=bool)
        else:
            out[name] = np.array([np.nan if v is None else v for v in vals], dtype=float)
    return out
