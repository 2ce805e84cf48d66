"""Dressed-state ladder of the undriven system in fixed excitation sectors.

In the n-excitation sector the relevant states are |g,n>, |e,n-1>, |m,n-1>.
The block Hamiltonian is written in the rotated basis
``(|g,n>, |+,n-1>, |-,n-1>)`` with ``|+-> = (|m> +- |e>) / sqrt(2)``.

Its eigenvalues are the probe detunings at which the n-photon transition from
|g,0> is resonant (``delta_p = lambda / n``). Equivalently they are minus the
sector energies of :func:`lambda_cqed.hamiltonian.assemble_hamiltonian`
evaluated at ``delta_p = 0, eta = 0``, which is why ``delta_L`` enters the
block with a positive sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_SQRT_HALF = np.sqrt(0.5)

# columns: rotated basis (g, +, -); rows: bare basis (g, e, m)
ROTATED_TO_BARE = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, _SQRT_HALF, -_SQRT_HALF],
        [0.0, _SQRT_HALF, _SQRT_HALF],
    ]
)


def to_bare(vec) -> np.ndarray:
    """Map a vector from (|g,n>, |+,n-1>, |-,n-1>) to (|g,n>, |e,n-1>, |m,n-1>)."""
    return ROTATED_TO_BARE @ np.asarray(vec)


def to_rotated(vec) -> np.ndarray:
    return ROTATED_TO_BARE.T @ np.asarray(vec)


def _check_sector(n):
    if int(n) != n or n < 1:
        raise ValueError(f"photon sector n must be an integer >= 1, got {n!r}")


def block_hamiltonian(n: int, g: float, omega_L: float, delta_L: float) -> np.ndarray:
    _check_sector(n)
    c = g * np.sqrt(n / 2.0)
    return np.array(
        [
            [0.0, c, -c],
            [c, omega_L + delta_L / 2.0, delta_L / 2.0],
            [-c, delta_L / 2.0, -omega_L + delta_L / 2.0],
        ]
    )


def _sorted_eigh(h, tol=1e-12):
    vals, vecs = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(vals))))
    # degenerate groups: largest |g,n> amplitude first; values stay ascending
    order = list(range(len(vals)))
    start = 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > tol * scale:
            order[start:k] = sorted(order[start:k], key=lambda j: -abs(vecs[0, j]))
            start = k
    vecs = vecs[:, order]
    # fix the global phase so the |g,n> component is non-negative where present
    for k in range(vecs.shape[1]):
        pivot = vecs[0, k] if abs(vecs[0, k]) > 1e-12 else vecs[np.argmax(np.abs(vecs[:, k])), k]
        vecs[:, k] *= np.sign(pivot)
    return vals, vecs


def numeric_eigen(n, g, omega_L, delta_L):
    """Sorted eigenvalues and eigenvectors (columns, rotated basis) of the block."""
    return _sorted_eigh(block_hamiltonian(n, g, omega_L, delta_L))


@dataclass(frozen=True)
class AnalyticEigen:
    """Closed-form eigensystem for delta_L = 0; vectors in the bare basis."""

    lambda_zero: float
    lambda_minus: float
    lambda_plus: float
    psi_zero: np.ndarray
    psi_minus: np.ndarray
    psi_plus: np.ndarray


def analytic_eigen(n: int, g: float, omega_L: float) -> AnalyticEigen:
    """Dark state and bright doublet of the resonant-control block.

    The dark state is ``|g,n> - (g sqrt(n) / omega_L) |m,n-1>`` (normalised):
    it carries no |e,n-1> amplitude.
    """
    _check_sector(n)
    if omega_L <= 0:
        raise ValueError(
            "analytic_eigen needs omega_L > 0 (the dark state is singular at omega_L = 0); "
            "use block_hamiltonian / numeric_eigen there"
        )
    lam = np.sqrt(omega_L**2 + n * g**2)
    c = g * np.sqrt(n / 2.0)

    dark = np.array([1.0, 0.0, -g * np.sqrt(n) / omega_L])

    def bright(lmb):
        rotated = np.array([1.0, c / (lmb - omega_L), -c / (lmb + omega_L)])
        return to_bare(rotated)

    vecs = [v / np.linalg.norm(v) for v in (dark, bright(-lam), bright(lam))]
    return AnalyticEigen(0.0, -lam, lam, *vecs)


def jc_ladder(n: int, g: float):
    """Two-level Jaynes-Cummings doublet of sector n: (L-, L+, Phi-, Phi+).

    The vectors are given in the bare basis (|g,n>, |e,n-1>, |m,n-1>).
    """
    _check_sector(n)
    split = g * np.sqrt(n)
    phi_minus = np.array([-1.0, 1.0, 0.0]) * _SQRT_HALF
    phi_plus = np.array([1.0, 1.0, 0.0]) * _SQRT_HALF
    return -split, split, phi_minus, phi_plus


@dataclass
class EigenLadder:
    """Per-sector eigenvalues (ascending) and eigenvectors (rotated basis)."""

    g: float
    omega_L: float
    delta_L: float
    sectors: list = field(default_factory=list)
    eigenvalues: list = field(default_factory=list)
    eigenvectors: list = field(default_factory=list)

    @classmethod
    def build(cls, g, omega_L, delta_L, sectors):
        ladder = cls(g, omega_L, delta_L)
        for n in sectors:
            vals, vecs = numeric_eigen(n, g, omega_L, delta_L)
            ladder.sectors.append(int(n))
            ladder.eigenvalues.append(vals)
            ladder.eigenvectors.append(vecs)
        return ladder

    def __iter__(self):
        return iter(zip(self.sectors, self.eigenvalues, self.eigenvectors))


LADDER_COLUMNS = ("omega_L", "n", "lambda_minus", "lambda_zero", "lambda_plus")


def ladder_scan(g, delta_L, omega_L_grid, sectors):
    """Rows ``(omega_L, n, l0, l1, l2)`` with ascending eigenvalues per sector."""
    omega_L_grid = list(omega_L_grid)
    sectors = list(sectors)
    if not omega_L_grid or not sectors:
        raise ValueError("omega_L_grid and sectors must be nonempty")
    rows = []
    for omega in omega_L_grid:
        for n in sectors:
            vals, _ = numeric_eigen(n, g, omega, delta_L)
            rows.append((float(omega), int(n), float(vals[0]), float(vals[1]), float(vals[2])))
    return rows
