"""Steady state of the master equation and the intracavity photon statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .hamiltonian import SystemParams
from .hilbert import Operators, n_max_from_dim
from .liouvillian import LiouvillianTerms, liouvillian_terms, trace_row, unvec

POSITIVITY_TOL = 1e-8
VACUUM_GUARD = 1e-14


class SteadyStateError(RuntimeError):
    pass


class NonUniqueSteadyState(SteadyStateError):
    """The Liouvillian kernel is more than one-dimensional."""


class PhysicalityError(SteadyStateError):
    """The computed state is not a valid density matrix."""


def _finalize(x, dim):
    if not np.all(np.isfinite(x)):
        raise NonUniqueSteadyState("steady-state solve produced non-finite values")
    rho = unvec(x, dim)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if not np.isfinite(tr) or abs(tr) < 1e-300:
        raise NonUniqueSteadyState("steady-state solve produced a traceless state")
    rho = rho / tr
    min_eig = np.linalg.eigvalsh(rho)[0]
    if min_eig < -POSITIVITY_TOL:
        raise PhysicalityError(f"steady state has eigenvalue {min_eig:.3e} < -{POSITIVITY_TOL}")
    return rho


def _lu_solve(m_csc, dim):
    rhs = np.zeros(m_csc.shape[0], dtype=complex)
    rhs[0] = 1.0
    try:
        lu = spla.splu(m_csc, permc_spec="COLAMD")
    except RuntimeError as exc:
        raise NonUniqueSteadyState(f"trace-constrained Liouvillian is singular: {exc}") from exc
    x = lu.solve(rhs)
    if np.max(np.abs(x)) > 1e8:
        raise NonUniqueSteadyState("trace-constrained Liouvillian is numerically singular")
    return _finalize(x, dim)


def solve_steady(L, method: str = "trace_row") -> np.ndarray:
    """Density matrix with ``L vec(rho) = 0`` and unit trace.

    ``"trace_row"`` replaces the first equation with the trace constraint and
    solves the sparse system; ``"nullspace"`` takes the right singular vector
    of the smallest singular value of the dense L and is meant as a cross-check.
    """
    d2 = L.shape[0]
    dim = int(round(np.sqrt(d2)))
    if dim * dim != d2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"Liouvillian shape {L.shape} is not (D^2, D^2)")
    if method == "trace_row":
        m = sp.lil_matrix(L, dtype=complex)
        m[0, :] = trace_row(dim)[None, :]
        return _lu_solve(m.tocsc(), dim)
    if method == "nullspace":
        dense = L.toarray() if sp.issparse(L) else np.asarray(L)
        _, s, vh = np.linalg.svd(dense)
        if s[-2] <= 1e-10 * s[0]:
            raise NonUniqueSteadyState(
                f"two near-zero singular values ({s[-2]:.2e}, {s[-1]:.2e}) in the Liouvillian"
            )
        return _finalize(vh[-1].conj(), dim)
    raise ValueError(f"unknown steady-state method {method!r}")


@dataclass(frozen=True)
class SteadyObservables:
    n_cav: float
    g2_zero: float | None
    pop_g: float
    pop_e: float
    pop_m: float
    truncation_ok: bool


def observables(rho, p: SystemParams | int | None = None) -> SteadyObservables:
    """Mean photon number, g2(0) and atomic populations of ``rho``.

    ``g2_zero`` is ``None`` when the cavity is empty to within 1e-14 photons.
    """
    rho = np.asarray(rho)
    if isinstance(p, SystemParams):
        n_max = p.n_max
    elif p is None:
        n_max = n_max_from_dim(rho.shape[0])
    else:
        n_max = int(p)
    if rho.shape != (3 * (n_max + 1),) * 2:
        raise ValueError(f"state shape {rho.shape} does not match n_max={n_max}")
    return _observe(rho, n_max)


def _observe(rho, n_max):
    nf = n_max + 1
    diag = np.real(np.diagonal(rho)).reshape(3, nf)
    photons = np.arange(nf, dtype=float)
    n_cav = float(diag.sum(axis=0) @ photons)
    pair = float(diag.sum(axis=0) @ (photons * (photons - 1)))
    g2 = pair / n_cav**2 if n_cav >= VACUUM_GUARD else None
    pops = diag.sum(axis=1)
    return SteadyObservables(
        n_cav=n_cav,
        g2_zero=g2,
        pop_g=float(pops[0]),
        pop_e=float(pops[1]),
        pop_m=float(pops[2]),
        truncation_ok=n_cav <= 0.5 * n_max,
    )


class SteadySolver:
    """Repeated trace-row solves over (delta_p, omega_L) for fixed other parameters.

    The three Liouvillian terms are laid out on one shared sparsity pattern
    so each grid point only rescales data arrays before factorising.
    """

    def __init__(self, p: SystemParams):
        self.params = p
        self.ops = Operators(p.n_max)
        self.terms: LiouvillianTerms = liouvillian_terms(p, self.ops)
        dim = self.terms.dim
        d2 = dim * dim
        tr = sp.csr_matrix(trace_row(dim)[None, :])
        tr = sp.vstack([tr, sp.csr_matrix((d2 - 1, d2))]).tocsr()
        pattern = (
            abs(self.terms.static) + abs(self.terms.probe) + abs(self.terms.control) + abs(tr)
        ).tocsc()
        pattern.sort_indices()
        self._indices = pattern.indices.copy()
        self._indptr = pattern.indptr.copy()
        cols = np.repeat(np.arange(d2), np.diff(self._indptr))
        keys = cols.astype(np.int64) * d2 + self._indices
        self._static = self._align(self.terms.static, keys, d2)
        self._probe = self._align(self.terms.probe, keys, d2)
        self._control = self._align(self.terms.control, keys, d2)
        self._trace = self._align(tr, keys, d2)
        self._first_row = self._indices == 0
        self.dim = dim

    @staticmethod
    def _align(mat, keys, d2):
        coo = mat.tocoo()
        out = np.zeros(keys.size, dtype=complex)
        k = coo.col.astype(np.int64) * d2 + coo.row
        pos = np.searchsorted(keys, k)
        np.add.at(out, pos, coo.data)
        return out

    def liouvillian(self, delta_p: float, omega_L: float):
        return self.terms.at(delta_p, omega_L)

    def solve(self, delta_p: float, omega_L: float) -> np.ndarray:
        data = self._static + delta_p * self._probe + omega_L * self._control
        data = np.where(self._first_row, self._trace, data)
        d2 = self.dim * self.dim
        m = sp.csc_matrix((data, self._indices, self._indptr), shape=(d2, d2))
        return _lu_solve(m, self.dim)

    def observe(self, delta_p: float, omega_L: float) -> SteadyObservables:
        return _observe(self.solve(delta_p, omega_L), self.params.n_max)
