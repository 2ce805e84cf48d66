"""Driven Lambda-atom cavity Hamiltonian in the probe rotating frame.

All rates and frequencies are in units of the cavity decay rate (kappa = 1)
and hbar = 1.
"""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass

import numpy as np

from .hilbert import Operators

RATE_CONVENTIONS = ("energy", "amplitude")


class TruncationWarning(UserWarning):
    """Drive strong enough that the default Fock cutoff may be too small."""


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters, all in units of kappa.

    ``rate_convention`` fixes what the decay rates mean. ``"energy"`` (the
    default) treats every rate as a population decay rate, i.e. a dissipator
    ``rate * (C rho C^+ - {C^+ C, rho} / 2)``. ``"amplitude"`` treats it as an
    amplitude decay rate, ``rate * (2 C rho C^+ - {C^+ C, rho})``, under which
    an empty-atom cavity loses photons as ``exp(-2 kappa t)``.
    """

    g: float = 10.0
    eta: float = 0.1
    omega_L: float = 0.0
    delta_p: float = 0.0
    delta_L: float = 0.0
    gamma_ge: float = 1.5
    gamma_me: float = 1.5
    gamma_gm: float = 5e-4
    n_max: int = 8
    rate_convention: str = "energy"

    def __post_init__(self):
        for name in ("g", "eta", "omega_L", "delta_p", "delta_L", "gamma_ge", "gamma_me", "gamma_gm"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise ValueError(f"{name} must be a real number, got {value!r}")
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.g <= 0:
            raise ValueError(f"g must be > 0, got {self.g}")
        for name in ("eta", "omega_L", "gamma_ge", "gamma_me", "gamma_gm"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if isinstance(self.n_max, bool) or int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.rate_convention not in RATE_CONVENTIONS:
            raise ValueError(
                f"rate_convention must be one of {RATE_CONVENTIONS}, got {self.rate_convention!r}"
            )
        if self.eta > 0.5 and self.n_max < 10:
            warnings.warn(
                f"eta={self.eta} with n_max={self.n_max}: check Fock-truncation convergence",
                TruncationWarning,
                stacklevel=3,
            )

    @property
    def delta_c(self) -> float:
        return self.delta_p

    @property
    def delta_e(self) -> float:
        return self.delta_p

    @property
    def delta_m(self) -> float:
        return self.delta_p - self.delta_L

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def hamiltonian_terms(p: SystemParams, ops: Operators | None = None):
    """Split H into ``static + delta_p * G_probe + omega_L * G_control``.

    Sweeps over the probe detuning and control Rabi frequency only rescale
    the two generators, so they are returned separately.
    """
    ops = ops if ops is not None else Operators(p.n_max)
    s = ops.sigma
    static = (
        -p.delta_L * s("m", "m")
        + p.g * (ops.a @ s("e", "g") + ops.ad @ s("g", "e"))
        + p.eta * (s("e", "g") + s("g", "e"))
    )
    probe = s("e", "e") + s("m", "m") + ops.num
    control = s("e", "m") + s("m", "e")
    return static, probe, control


def assemble_hamiltonian(p: SystemParams, ops: Operators | None = None) -> np.ndarray:
    static, probe, control = hamiltonian_terms(p, ops)
    return static + p.delta_p * probe + p.omega_L * control


def excitation_number(ops: Operators) -> np.ndarray:
    """``a^+ a + sigma_ee + sigma_mm``; conserved by H when eta = 0."""
    return ops.num + ops.sigma("e", "e") + ops.sigma("m", "m")
