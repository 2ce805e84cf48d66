"""Truncated atom (x) cavity Hilbert space and its elementary operators.

Basis ordering is fixed throughout the package: the atom is the slow index
and the Fock number the fast one, ``index = atom * (n_max + 1) + n`` with
atom levels ``g -> 0, e -> 1, m -> 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LEVELS = ("g", "e", "m")
LEVEL_INDEX = {name: i for i, name in enumerate(LEVELS)}


@dataclass(frozen=True)
class FockTruncation:
    """Highest retained Fock state of the cavity mode."""

    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def field_dim(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return 3 * (self.n_max + 1)


def _trunc(trunc) -> FockTruncation:
    if isinstance(trunc, FockTruncation):
        return trunc
    return FockTruncation(int(trunc))


def level_index(level) -> int:
    if isinstance(level, str) and level in LEVEL_INDEX:
        return LEVEL_INDEX[level]
    raise ValueError(f"unknown atomic level {level!r}; expected one of {LEVELS}")


def annihilation(trunc) -> np.ndarray:
    """Field annihilation operator with ``a[n-1, n] = sqrt(n)``."""
    t = _trunc(trunc)
    return np.diag(np.sqrt(np.arange(1, t.field_dim, dtype=float)), 1).astype(complex)


def atomic_sigma(i: str, j: str) -> np.ndarray:
    """Atomic operator ``|i><j|`` on the three-level space."""
    op = np.zeros((3, 3), dtype=complex)
    op[level_index(i), level_index(j)] = 1.0
    return op


def embed(atom_op, field_op) -> np.ndarray:
    """Composite operator ``atom_op (x) field_op`` in the package basis ordering."""
    atom_op = np.asarray(atom_op)
    field_op = np.asarray(field_op)
    if atom_op.shape != (3, 3):
        raise ValueError(f"atom operator must be 3x3, got {atom_op.shape}")
    if field_op.ndim != 2 or field_op.shape[0] != field_op.shape[1] or field_op.shape[0] < 2:
        raise ValueError(f"field operator must be square with dim >= 2, got {field_op.shape}")
    return np.kron(atom_op, field_op)


def basis_index(level: str, n: int, trunc) -> int:
    t = _trunc(trunc)
    if not 0 <= n <= t.n_max:
        raise ValueError(f"Fock number {n} outside [0, {t.n_max}]")
    return level_index(level) * t.field_dim + n


def basis_label(index: int, trunc) -> tuple[str, int]:
    """Inverse of :func:`basis_index`."""
    t = _trunc(trunc)
    if not 0 <= index < t.dim:
        raise ValueError(f"index {index} outside [0, {t.dim})")
    atom, n = divmod(index, t.field_dim)
    return LEVELS[atom], n


def n_max_from_dim(dim: int) -> int:
    if dim % 3 or dim < 6:
        raise ValueError(f"dimension {dim} is not 3*(n_max+1) with n_max >= 1")
    return dim // 3 - 1


class Operators:
    """Composite-space operators for one truncation, built once and reused."""

    def __init__(self, trunc):
        self.trunc = _trunc(trunc)
        field_eye = np.eye(self.trunc.field_dim, dtype=complex)
        self.a = embed(np.eye(3, dtype=complex), annihilation(self.trunc))
        self.ad = self.a.conj().T
        self.num = self.ad @ self.a
        self.identity = np.eye(self.trunc.dim, dtype=complex)
        self._field_eye = field_eye

    @property
    def dim(self) -> int:
        return self.trunc.dim

    @property
    def n_max(self) -> int:
        return self.trunc.n_max

    def sigma(self, i: str, j: str) -> np.ndarray:
        return embed(atomic_sigma(i, j), self._field_eye)

    def ket(self, level: str, n: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[basis_index(level, n, self.trunc)] = 1.0
        return v

    def projector(self, level: str, n: int) -> np.ndarray:
        v = self.ket(level, n)
        return np.outer(v, v.conj())
