"""Time evolution of the master equation and two-time photon correlations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from .hilbert import Operators, n_max_from_dim
from .liouvillian import unvec, vec
from .steadystate import VACUUM_GUARD


class IntegrationError(RuntimeError):
    pass


class VacuumError(ValueError):
    """g2 is undefined for an empty cavity."""


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (len(times), D, D)
    n_cav: np.ndarray
    pop_g: np.ndarray
    pop_e: np.ndarray
    pop_m: np.ndarray


def _check_grid(t_grid):
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("time grid must be a nonempty 1-d sequence")
    if t[0] != 0.0:
        raise ValueError("time grid must start at 0")
    if np.any(np.diff(t) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return t


def _preserves_hermiticity(L, dim) -> bool:
    """Probe L with one random Hermitian matrix."""
    rng = np.random.default_rng(0)
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    y = unvec(L @ vec(x + x.conj().T), dim)
    return np.max(np.abs(y - y.conj().T)) <= 1e-12 * max(1.0, np.max(np.abs(y)))


def _trajectory(times, vecs, dim, hermitian=False):
    states = np.stack([unvec(v, dim) for v in vecs])
    if hermitian:
        # exact trajectory is Hermitian; drop the anti-Hermitian integrator error
        states = 0.5 * (states + np.conj(np.swapaxes(states, 1, 2)))
    nf = n_max_from_dim(dim) + 1
    diag = np.real(np.diagonal(states, axis1=1, axis2=2)).reshape(len(times), 3, nf)
    photons = np.arange(nf, dtype=float)
    return Trajectory(
        times=times,
        states=states,
        n_cav=diag.sum(axis=1) @ photons,
        pop_g=diag[:, 0].sum(axis=1),
        pop_e=diag[:, 1].sum(axis=1),
        pop_m=diag[:, 2].sum(axis=1),
    )


def _integrate(v0, L, t, rtol, atol):
    if t.size == 1:
        return v0[None, :]
    L = sp.csr_matrix(L)
    last = [t[0]]

    def rhs(ti, y):
        last[0] = ti
        return L @ y

    with np.errstate(invalid="ignore", over="ignore"):
        sol = solve_ivp(
            rhs,
            (t[0], t[-1]),
            v0.astype(complex),
            method="DOP853",
            t_eval=t,
            rtol=rtol,
            atol=atol,
        )
    if not sol.success:
        raise IntegrationError(f"integration failed near t={last[0]:.6g}: {sol.message}")
    return sol.y.T


def _hermitian_flow(rho0, L) -> bool:
    return np.allclose(rho0, rho0.conj().T, rtol=0, atol=1e-14) and _preserves_hermiticity(L, rho0.shape[0])


def evolve(rho0, L, t_grid, rtol: float = 1e-8, atol: float = 1e-10) -> Trajectory:
    """Integrate ``d vec(rho)/dt = L vec(rho)`` with an adaptive explicit stepper."""
    t = _check_grid(t_grid)
    rho0 = np.asarray(rho0, dtype=complex)
    vecs = _integrate(vec(rho0), L, t, rtol, atol)
    return _trajectory(t, vecs, rho0.shape[0], hermitian=_hermitian_flow(rho0, L))


def propagate_expm(rho0, L, t_grid) -> Trajectory:
    """Dense ``exp(L t) vec(rho0)``; only sensible for small truncations."""
    t = _check_grid(t_grid)
    rho0 = np.asarray(rho0, dtype=complex)
    dense = L.toarray() if sp.issparse(L) else np.asarray(L)
    v0 = vec(rho0)
    vecs = [la.expm(dense * ti) @ v0 for ti in t]
    return _trajectory(t, vecs, rho0.shape[0])


def default_tau_grid(stop: float = 20.0, num: int = 200) -> np.ndarray:
    """Zero followed by ``num - 1`` log-spaced delays up to ``stop``."""
    return np.concatenate([[0.0], np.geomspace(1e-3, stop, num - 1)])


@dataclass
class Correlation:
    tau: np.ndarray
    g2: np.ndarray
    seed_trace: np.ndarray  # Tr of the propagated a rho a^+; constant in tau


def g2_tau(rho_ss, L, tau_grid=None, method: str = "ode", rtol=1e-10, atol=1e-12) -> Correlation:
    """Intensity correlation g2(tau) by the quantum regression theorem.

    The seed ``a rho_ss a^+`` is propagated with the same generator and
    ``g2(tau) = Tr[a^+ a X(tau)] / <a^+ a>^2``.
    """
    tau = _check_grid(default_tau_grid() if tau_grid is None else tau_grid)
    rho_ss = np.asarray(rho_ss, dtype=complex)
    ops = Operators(n_max_from_dim(rho_ss.shape[0]))
    n_cav = float(np.real(np.trace(ops.num @ rho_ss)))
    if n_cav < VACUUM_GUARD:
        raise VacuumError(f"mean photon number {n_cav:.3e} below {VACUUM_GUARD}")
    # unit-trace seed keeps the integrator tolerances meaningful
    seed = ops.a @ rho_ss @ ops.ad / n_cav
    if method == "ode":
        vecs = _integrate(vec(seed), L, tau, rtol, atol)
    elif method == "expm":
        dense = L.toarray() if sp.issparse(L) else np.asarray(L)
        vecs = np.stack([la.expm(dense * t) @ vec(seed) for t in tau])
    else:
        raise ValueError(f"unknown propagation method {method!r}")
    # Tr[A X] = vec(A^T) . vec(X)
    num_w = vec(ops.num.T)
    eye_w = vec(ops.identity)
    numer = np.real(vecs @ num_w)
    trace = np.real(vecs @ eye_w)
    return Correlation(tau=tau, g2=numer / n_cav, seed_trace=trace * n_cav)
