"""Three-level Lambda atom in a cavity: dressed states and photon statistics."""

from .hamiltonian import SystemParams, assemble_hamiltonian
from .liouvillian import assemble_liouvillian, dissipator
from .steadystate import SteadyObservables, observables, solve_steady
from .sweep import MagicResult, SweepRecord, find_magic, sweep_1d, sweep_2d

__all__ = [
    "MagicResult",
    "SteadyObservables",
    "SweepRecord",
    "SystemParams",
    "assemble_hamiltonian",
    "assemble_liouvillian",
    "dissipator",
    "find_magic",
    "observables",
    "solve_steady",
    "sweep_1d",
    "sweep_2d",
]

__version__ = "0.1.0"
