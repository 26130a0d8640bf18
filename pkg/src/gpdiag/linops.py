"""Dense complex linear algebra shared by the cascade simulator.

Everything here acts on small matrices (3x3 states, 9x9 superoperators), so
plain LAPACK through numpy is both the simplest and the most robust choice.
Vectorization is row-major throughout: vec(rho)[n*i + j] = rho[i, j].
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-12
RANK_EPS = 1e-9


class ContractViolationError(ValueError):
    """An input broke a documented precondition (e.g. non-Hermitian matrix)."""


class NoSteadyStateError(RuntimeError):
    """The superoperator has no null vector (full rank)."""


class DegenerateSteadyStateError(RuntimeError):
    """The superoperator null space has dimension >= 2."""

    def __init__(self, deficiency: int, message: str | None = None):
        self.deficiency = deficiency
        super().__init__(message or f"null space has dimension {deficiency}")


class EigenSystem(NamedTuple):
    """Eigenvalues in ascending order; eigenvectors[:, k] pairs with eigenvalues[k]."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square_complex(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ContractViolationError("matrix has non-finite entries")
    return a


def hermitian_eig(a, tol: float = HERMITICITY_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    Raises ContractViolationError if max |A - A^dag| exceeds `tol`.
    Output is deterministic for identical input (LAPACK zheevd order:
    ascending eigenvalues, orthonormal columns).
    """
    a = _as_square_complex(a)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise ContractViolationError(f"matrix is not Hermitian: max |A - A^dag| = {dev:.3e}")
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return EigenSystem(w, v)


def vec(m: np.ndarray) -> np.ndarray:
    """Row-major vectorization of a square matrix."""
    return np.asarray(m, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of vec."""
    return np.asarray(v, dtype=complex).reshape(dim, dim)


def null_space_unit_trace(ell, eps_rank: float = RANK_EPS) -> np.ndarray:
    """Unique null vector of a superoperator, returned as a unit-trace Hermitian matrix.

    `ell` acts on the row-major vectorization of a dim x dim matrix.  Singular
    values below eps_rank times the largest one count as zero.  Exactly one
    zero singular value is required; 0 raises NoSteadyStateError and >= 2
    raises DegenerateSteadyStateError carrying the deficiency count.
    """
    ell = _as_square_complex(ell)
    dim = math.isqrt(ell.shape[0])
    if dim * dim != ell.shape[0]:
        raise ContractViolationError(f"superoperator size {ell.shape[0]} is not a perfect square")
    _, s, vh = np.linalg.svd(ell)
    deficiency = int(np.count_nonzero(s <= eps_rank * s[0]))
    if deficiency == 0:
        raise NoSteadyStateError(f"no null vector: smallest singular value {s[-1]:.3e}")
    if deficiency >= 2:
        raise DegenerateSteadyStateError(deficiency)
    m = vh[-1].conj().reshape(dim, dim)
    tr = np.trace(m)
    if abs(tr) < 1e-6:
        raise NoSteadyStateError(f"null vector is traceless (|tr| = {abs(tr):.3e})")
    m = m / tr
    return 0.5 * (m + m.conj().T)
