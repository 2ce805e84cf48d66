"""Vectorised Lindblad generator.

Column-stacking vectorisation is used everywhere: ``vec(A rho B) =
(B^T kron A) vec(rho)`` and ``vec(d rho / dt) = L vec(rho)``.
Superoperators are returned as CSR sparse matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .hamiltonian import SystemParams, hamiltonian_terms
from .hilbert import Operators


def vec(rho) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorised {dim}x{dim} matrix")
    return v.reshape(dim, dim, order="F")


def _eye(d):
    return sp.identity(d, dtype=complex, format="csr")


def spre(a):
    """Superoperator of ``rho -> a rho``."""
    a = sp.csr_matrix(a, dtype=complex)
    return sp.kron(_eye(a.shape[0]), a, format="csr")


def spost(b):
    """Superoperator of ``rho -> rho b``."""
    b = sp.csr_matrix(b, dtype=complex)
    return sp.kron(b.T, _eye(b.shape[0]), format="csr")


def sprepost(a, b):
    """Superoperator of ``rho -> a rho b``."""
    a = sp.csr_matrix(a, dtype=complex)
    b = sp.csr_matrix(b, dtype=complex)
    return sp.kron(b.T, a, format="csr")


def commutator(h):
    """Superoperator of ``rho -> -i [h, rho]``."""
    return (-1j * (spre(h) - spost(h))).tocsr()


def dissipator(c, rate: float):
    """Superoperator of ``rate * (2 c rho c^+ - c^+ c rho - rho c^+ c)``.

    With this normalisation ``rate`` is an amplitude decay rate: for c = a the
    photon number decays as ``exp(-2 rate t)``.
    """
    if rate < 0:
        raise ValueError(f"decay rate must be >= 0, got {rate}")
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"collapse operator must be square, got shape {c.shape}")
    cd = c.conj().T
    cdc = cd @ c
    return (rate * (2 * sprepost(c, cd) - spre(cdc) - spost(cdc))).tocsr()


def collapse_channels(p: SystemParams, ops: Operators):
    """(operator, rate) pairs: cavity loss and the three atomic decays."""
    return [
        (ops.a, 1.0),
        (ops.sigma("g", "e"), p.gamma_ge),
        (ops.sigma("m", "e"), p.gamma_me),
        (ops.sigma("g", "m"), p.gamma_gm),
    ]


def dissipative_part(p: SystemParams, ops: Operators | None = None):
    ops = ops if ops is not None else Operators(p.n_max)
    scale = 0.5 if p.rate_convention == "energy" else 1.0
    d2 = ops.dim**2
    total = sp.csr_matrix((d2, d2), dtype=complex)
    for c, rate in collapse_channels(p, ops):
        if rate > 0:
            total = total + dissipator(c, scale * rate)
    return total.tocsr()


@dataclass(frozen=True)
class LiouvillianTerms:
    """``L = static + delta_p * probe + omega_L * control``."""

    static: sp.csr_matrix
    probe: sp.csr_matrix
    control: sp.csr_matrix
    dim: int

    def at(self, delta_p: float, omega_L: float) -> sp.csr_matrix:
        return (self.static + delta_p * self.probe + omega_L * self.control).tocsr()


def liouvillian_terms(p: SystemParams, ops: Operators | None = None) -> LiouvillianTerms:
    ops = ops if ops is not None else Operators(p.n_max)
    h_static, g_probe, g_control = hamiltonian_terms(p, ops)
    static = (commutator(h_static) + dissipative_part(p, ops)).tocsr()
    return LiouvillianTerms(static, commutator(g_probe), commutator(g_control), ops.dim)


def assemble_liouvillian(p: SystemParams, ops: Operators | None = None) -> sp.csr_matrix:
    return liouvillian_terms(p, ops).at(p.delta_p, p.omega_L)


def trace_row(dim: int) -> np.ndarray:
    """``vec(I)``: its inner product with vec(rho) is Tr(rho)."""
    return vec(np.eye(dim, dtype=complex))
