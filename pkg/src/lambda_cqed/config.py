"""Run configuration: strict JSON parsing, defaults and grid expansion."""

from __future__ import annotations

import dataclasses
import difflib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .hamiltonian import SystemParams

MODES = ("eigen", "steady", "sweep1d", "sweep2d", "magic", "g2tau")
FORMATS = ("csv", "jsonl")
PARAM_KEYS = tuple(f.name for f in dataclasses.fields(SystemParams))
GRID_KEYS = ("start", "stop", "step")
RUN_KEYS = (
    "mode",
    "delta_p_grid",
    "omega_L_grid",
    "sectors",
    "tau_max",
    "tau_points",
    "photon_floor",
    "output",
    "format",
    "workers",
)
ALLOWED_KEYS = PARAM_KEYS + RUN_KEYS

# reference operating profile: g=10, eta=0.1, gamma_ge=gamma_me=1.5, gamma_gm=5e-4
DEFAULT_PROFILE = SystemParams()

DEFAULT_GRIDS = {
    "sweep1d": {"delta_p_grid": (-20.0, 20.0, 0.05)},
    "sweep2d": {"delta_p_grid": (-20.0, 0.0, 0.05), "omega_L_grid": (0.0, 15.0, 0.1)},
    "magic": {"delta_p_grid": (-20.0, 0.0, 0.05), "omega_L_grid": (0.0, 15.0, 0.1)},
    "eigen": {"omega_L_grid": (0.0, 40.0, 0.5)},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        for name in GRID_KEYS:
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"grid {name} must be a finite number, got {v!r}")
        if self.step <= 0:
            raise ConfigError(f"grid step must be > 0, got {self.step}")
        if self.stop < self.start:
            raise ConfigError(f"grid stop {self.stop} is below start {self.start}")
        if self.size > 10_000_000:
            raise ConfigError(f"grid has {self.size} points; refusing")

    @property
    def size(self) -> int:
        return int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1

    def values(self) -> list[float]:
        """Inclusive grid, rounded to 12 decimals to cancel step accumulation."""
        return [round(self.start + i * self.step, 12) + 0.0 for i in range(self.size)]

    def to_dict(self) -> dict:
        return {"start": self.start, "stop": self.stop, "step": self.step}


@dataclass(frozen=True)
class RunConfig:
    mode: str
    params: SystemParams = DEFAULT_PROFILE
    delta_p_grid: GridSpec | None = None
    omega_L_grid: GridSpec | None = None
    sectors: tuple = (1, 2)
    tau_max: float = 20.0
    tau_points: int = 200
    photon_floor: float = 0.003
    output: str | None = None
    format: str = "csv"
    workers: int = 1

    def to_dict(self) -> dict:
        d = {"mode": self.mode}
        d.update(self.params.to_dict())
        for name in ("delta_p_grid", "omega_L_grid"):
            grid = getattr(self, name)
            if grid is not None:
                d[name] = grid.to_dict()
        d.update(
            sectors=list(self.sectors),
            tau_max=self.tau_max,
            tau_points=self.tau_points,
            photon_floor=self.photon_floor,
            output=self.output,
            format=self.format,
            workers=self.workers,
        )
        return d


def _number(key, v, integer=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"field '{key}': expected a number, got {v!r}")
    if integer and int(v) != v:
        raise ConfigError(f"field '{key}': expected an integer, got {v!r}")
    return int(v) if integer else float(v)


def _grid(key, v) -> GridSpec:
    if not isinstance(v, dict):
        raise ConfigError(f"field '{key}': expected an object with keys {GRID_KEYS}")
    unknown = set(v) - set(GRID_KEYS)
    missing = set(GRID_KEYS) - set(v)
    if unknown or missing:
        raise ConfigError(
            f"field '{key}': unknown keys {sorted(unknown)}, missing keys {sorted(missing)}"
        )
    try:
        return GridSpec(*(_number(f"{key}.{k}", v[k]) for k in GRID_KEYS))
    except ConfigError as exc:
        raise ConfigError(f"field '{key}': {exc}") from None


def config_from_dict(doc: dict, mode: str | None = None) -> RunConfig:
    """Validate a decoded configuration document.

    ``mode`` (from the CLI subcommand) overrides a missing ``mode`` key and
    must agree with a present one.
    """
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = [k for k in doc if k not in ALLOWED_KEYS]
    if unknown:
        hints = []
        for k in unknown:
            close = difflib.get_close_matches(k, ALLOWED_KEYS, n=1)
            hints.append(f"'{k}'" + (f" (did you mean '{close[0]}'?)" if close else ""))
        raise ConfigError("unknown configuration keys: " + ", ".join(hints))

    file_mode = doc.get("mode")
    if mode is None and file_mode is None:
        raise ConfigError(f"missing required field 'mode' (one of {MODES})")
    if mode is not None and file_mode is not None and mode != file_mode:
        raise ConfigError(f"field 'mode': file says {file_mode!r} but command is {mode!r}")
    mode = mode or file_mode
    if mode not in MODES:
        raise ConfigError(f"field 'mode': expected one of {MODES}, got {mode!r}")

    param_kw = {}
    for key in PARAM_KEYS:
        if key not in doc:
            continue
        if key == "rate_convention":
            param_kw[key] = doc[key]
        else:
            param_kw[key] = _number(key, doc[key], integer=(key == "n_max"))
    try:
        params = DEFAULT_PROFILE.replace(**param_kw)
    except ValueError as exc:
        raise ConfigError(f"invalid parameters: {exc}") from None

    kw = {"mode": mode, "params": params}
    defaults = DEFAULT_GRIDS.get(mode, {})
    for name in ("delta_p_grid", "omega_L_grid"):
        if name in doc and doc[name] is not None:
            kw[name] = _grid(name, doc[name])
        elif name in defaults:
            kw[name] = GridSpec(*defaults[name])

    if "sectors" in doc:
        sectors = doc["sectors"]
        if not isinstance(sectors, list) or not sectors:
            raise ConfigError("field 'sectors': expected a nonempty list of integers >= 1")
        sectors = tuple(_number("sectors", s, integer=True) for s in sectors)
        if min(sectors) < 1:
            raise ConfigError("field 'sectors': photon sectors start at 1")
        kw["sectors"] = sectors
    if "tau_max" in doc:
        kw["tau_max"] = _number("tau_max", doc["tau_max"])
        if not kw["tau_max"] > 1e-3:
            raise ConfigError("field 'tau_max': must exceed 1e-3")
    if "tau_points" in doc:
        kw["tau_points"] = _number("tau_points", doc["tau_points"], integer=True)
        if kw["tau_points"] < 2:
            raise ConfigError("field 'tau_points': need at least 2 points")
    if "photon_floor" in doc:
        kw["photon_floor"] = _number("photon_floor", doc["photon_floor"])
        if not kw["photon_floor"] >= 0:
            raise ConfigError("field 'photon_floor': must be >= 0")
    if doc.get("output") is not None:
        if not isinstance(doc["output"], str):
            raise ConfigError("field 'output': expected a path string")
        kw["output"] = doc["output"]
    if "format" in doc:
        if doc["format"] not in FORMATS:
            raise ConfigError(f"field 'format': expected one of {FORMATS}, got {doc['format']!r}")
        kw["format"] = doc["format"]
    if "workers" in doc:
        kw["workers"] = _number("workers", doc["workers"], integer=True)
        if kw["workers"] < 1:
            raise ConfigError("field 'workers': must be >= 1")
    return RunConfig(**kw)


def parse_config_text(text: str, mode: str | None = None, source: str = "<config>") -> RunConfig:
    if not text.strip():
        raise ConfigError(
            f"{source}: empty configuration; required field: 'mode' "
            f"(write {{}} to accept the default profile when the mode comes from the command)"
        )
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return config_from_dict(doc, mode)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def parse_config(path, mode: str | None = None) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text, mode, source=str(path))


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2) + "\n"


def with_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """Apply CLI flag overrides (``None`` means not given)."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    n_max = changes.pop("n_max", None)
    if n_max is not None:
        try:
            changes["params"] = cfg.params.replace(n_max=n_max)
        except ValueError as exc:
            raise ConfigError(f"--nmax: {exc}") from None
    if "format" in changes and changes["format"] not in FORMATS:
        raise ConfigError(f"--format: expected one of {FORMATS}")
    if "workers" in changes and changes["workers"] < 1:
        raise ConfigError("--workers: must be >= 1")
    return dataclasses.replace(cfg, **changes)
