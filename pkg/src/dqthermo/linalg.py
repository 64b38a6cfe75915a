"""Dense Hermitian linear algebra used throughout the package.

Operators are plain complex ``numpy`` arrays.  The helpers here validate
them (Hermiticity, unitarity), diagonalise them and apply scalar functions
in their eigenbasis.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

HERMITIAN_RTOL = 1e-10
UNITARY_ATOL = 1e-10
LOG_FLOOR = 1e-14


class HermiticityError(ValueError):
    pass


class UnitarityError(ValueError):
    pass


class SupportError(ValueError):
    """Raised when a logarithm (or a thermal Hamiltonian) needs a full-rank operator."""


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # columns aligned with eigenvalues


def as_matrix(A) -> np.ndarray:
    """Return ``A`` as a square, finite complex array (a copy)."""
    M = np.array(A, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def hermiticity_defect(A: np.ndarray) -> float:
    return float(np.max(np.abs(A - A.conj().T)))


def check_hermitian(A) -> np.ndarray:
    """Validate and return a Hermitian copy of ``A`` (exactly symmetrised)."""
    M = as_matrix(A)
    defect = hermiticity_defect(M)
    if defect > HERMITIAN_RTOL * (1.0 + float(np.max(np.abs(M)))):
        raise HermiticityError(f"operator is not Hermitian: max|A - A^dag| = {defect:.3e}")
    return (M + M.conj().T) / 2


def unitarity_defect(V: np.ndarray) -> float:
    return float(np.max(np.abs(V.conj().T @ V - np.eye(V.shape[0]))))


def check_unitary(V) -> np.ndarray:
    M = as_matrix(V)
    defect = unitarity_defect(M)
    if defect > UNITARY_ATOL:
        raise UnitarityError(f"operator is not unitary: max|V^dag V - I| = {defect:.3e}")
    return M


def eig_hermitian(A) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    Ties keep the order returned by the solver (stable sort).
    """
    M = check_hermitian(A)
    w, U = np.linalg.eigh(M)
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], U[:, order])


def _xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def _safe_log(x: np.ndarray) -> np.ndarray:
    if np.min(x) <= LOG_FLOOR:
        raise SupportError(
            f"logarithm of an operator with eigenvalue {np.min(x):.3e} <= {LOG_FLOOR:g}"
        )
    return np.log(x)


_SPECTRAL_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "exp": np.exp,
    "log": _safe_log,
    "xlogx": _xlogx,
}


def apply_spectral_function(A, f: str | Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its eigenvalues.

    ``f`` is one of ``"exp"``, ``"log"``, ``"xlogx"`` (with ``0 ln 0 = 0``) or
    any vectorised real function.
    """
    func = _SPECTRAL_FUNCTIONS[f] if isinstance(f, str) else f
    w, U = eig_hermitian(A)
    fw = func(w)
    out = (U * fw) @ U.conj().T
    return (out + out.conj().T) / 2


def conjugate_by_unitary(A, V) -> np.ndarray:
    """Return ``V A V^dag``."""
    A = as_matrix(A)
    V = check_unitary(V)
    if A.shape != V.shape:
        raise ValueError(f"dimension mismatch: operator {A.shape} vs unitary {V.shape}")
    return V @ A @ V.conj().T


def haar_random_unitaries(dim: int, count: int, seed=None) -> np.ndarray:
    """Stack of ``count`` Haar-distributed ``dim x dim`` unitaries.

    QR of a complex Ginibre matrix with the phases of R's diagonal divided out.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    return Q * (d / np.abs(d))[:, None, :]


def haar_random_unitary(dim: int, seed=None) -> np.ndarray:
    return haar_random_unitaries(dim, 1, seed)[0]


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (X + X.conj().T) / 2


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random state from the induced (Hilbert-Schmidt like) measure."""
    rank = dim if rank is None else rank
    X = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = X @ X.conj().T
    rho = rho / np.trace(rho).real
    return (rho + rho.conj().T) / 2
