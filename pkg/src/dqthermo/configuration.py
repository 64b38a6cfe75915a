"""Configurations (state, Hamiltonian) and their thermodynamic potentials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, TypeVar

import numpy as np

from .linalg import (
    LOG_FLOOR,
    SupportError,
    as_matrix,
    check_hermitian,
    eig_hermitian,
)

TRACE_ATOL = 1e-10
NEGATIVITY_ATOL = 1e-12
THERMAL_ATOL = 1e-8
COMMUTATOR_ATOL = 1e-9


class DensityMatrixError(ValueError):
    pass


class ThermalError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def density_matrix(rho) -> np.ndarray:
    """Validate a density matrix.

    Small negative eigenvalues (down to -1e-12) are clipped to zero.
    """
    M = check_hermitian(rho)
    tr = float(np.trace(M).real)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise DensityMatrixError(f"density matrix trace is {tr!r}, expected 1")
    w, U = np.linalg.eigh(M)
    if w[0] < -NEGATIVITY_ATOL:
        raise DensityMatrixError(f"density matrix has negative eigenvalue {w[0]:.3e}")
    if w[0] < 0:
        M = (U * np.clip(w, 0.0, None)) @ U.conj().T
        M = (M + M.conj().T) / 2
    return M


def populations(rho) -> np.ndarray:
    """Eigenvalues of a state, descending, clipped at zero."""
    return np.clip(np.linalg.eigvalsh(as_matrix(rho))[::-1], 0.0, None)


@dataclass(frozen=True, eq=False)
class Configuration:
    """A point (rho, H) of configuration space."""

    rho: np.ndarray
    hamiltonian: np.ndarray

    def __post_init__(self):
        rho = density_matrix(self.rho)
        H = check_hermitian(self.hamiltonian)
        if rho.shape != H.shape:
            raise ValueError(f"state is {rho.shape} but Hamiltonian is {H.shape}")
        object.__setattr__(self, "rho", _frozen(rho))
        object.__setattr__(self, "hamiltonian", _frozen(H))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def energy(self) -> float:
        return internal_energy(self)

    @property
    def entropy(self) -> float:
        return von_neumann_entropy(self.rho)


@dataclass(frozen=True, eq=False)
class ThermalConfiguration(Configuration):
    """Gibbs configuration rho = exp(-beta H) / Z at finite beta > 0."""

    beta: float
    partition_function: float = field(default=math.nan)

    def __post_init__(self):
        super().__post_init__()
        _check_beta(self.beta)
        gibbs, Z = _gibbs(self.hamiltonian, self.beta)
        if math.isnan(self.partition_function):
            object.__setattr__(self, "partition_function", Z)
        elif abs(self.partition_function - Z) > 1e-10 * Z:
            raise ThermalError(f"partition function {self.partition_function!r} != tr exp(-beta H) = {Z!r}")
        err = float(np.max(np.abs(self.rho - gibbs)))
        if err > THERMAL_ATOL:
            raise ThermalError(f"state is not the Gibbs state at beta={self.beta}: max deviation {err:.3e}")
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class Gauge:
    """Energy offset ``a`` and scale ``b``: H -> b (H + a), beta -> beta / b."""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (self.b > 0 and math.isfinite(self.b) and math.isfinite(self.a)):
            raise ValueError(f"gauge requires finite a and b > 0, got a={self.a}, b={self.b}")


def _check_beta(beta: float) -> None:
    if not isinstance(beta, (int, float, np.floating)) or isinstance(beta, bool):
        raise ThermalError(f"beta must be a real number, got {beta!r}")
    if math.isinf(beta) and beta > 0:
        raise ThermalError("beta = inf (ground-state limit) is not a thermal configuration")
    if not (math.isfinite(beta) and beta > 0):
        raise ThermalError(f"beta must be finite and > 0, got {beta!r}")


def _gibbs(H: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    w, U = eig_hermitian(H)
    e_min = w[-1]
    boltz = np.exp(-beta * (w - e_min))
    norm = boltz.sum()
    rho = (U * (boltz / norm)) @ U.conj().T
    Z = float(norm * math.exp(-beta * e_min))
    return (rho + rho.conj().T) / 2, Z


def gibbs_state(H, beta: float) -> ThermalConfiguration:
    _check_beta(beta)
    H = check_hermitian(H)
    rho, Z = _gibbs(H, beta)
    return ThermalConfiguration(rho, H, beta=float(beta), partition_function=Z)


def internal_energy(c: Configuration) -> float:
    return float(np.real(np.trace(c.rho @ c.hamiltonian)))


def von_neumann_entropy(rho) -> float:
    p = populations(rho)
    p = p[p > 0]
    return float(max(-(p * np.log(p)).sum(), 0.0))


def relative_entropy(rho1, rho2) -> float:
    """S(rho1 || rho2) = tr rho1 (ln rho1 - ln rho2); ``math.inf`` on support violation."""
    rho1 = as_matrix(rho1)
    rho2 = as_matrix(rho2)
    if rho1.shape != rho2.shape:
        raise ValueError(f"dimension mismatch {rho1.shape} vs {rho2.shape}")
    q, V = eig_hermitian(rho2)
    # weights of rho1 along the eigenvectors of rho2
    weights = np.real(np.einsum("ij,jk,ki->i", V.conj().T, rho1, V))
    kernel = q <= LOG_FLOOR
    if np.any(weights[kernel] > LOG_FLOOR):
        return math.inf
    cross = float(np.sum(weights[~kernel] * np.log(q[~kernel])))
    value = -von_neumann_entropy(rho1) - cross
    return max(value, 0.0)


class EntropyBounds(NamedTuple):
    lower: float
    delta: float
    upper: float


def entropy_change_bounds(rho_i, rho_f) -> EntropyBounds:
    """-tr[d rho ln rho_f] <= S(rho_f) - S(rho_i) <= -tr[d rho ln rho_i].

    Evaluated as ``delta -/+`` a relative entropy, so an infinite bound
    comes out as ``-inf`` / ``+inf``.
    """
    delta = von_neumann_entropy(rho_f) - von_neumann_entropy(rho_i)
    lower = delta - relative_entropy(rho_i, rho_f)
    upper = delta + relative_entropy(rho_f, rho_i)
    return EntropyBounds(lower, delta, upper)


def thermalizing_hamiltonian(rho, beta: float = 1.0) -> np.ndarray:
    """Hamiltonian whose Gibbs state at ``beta`` is ``rho``, gauge-fixed to min eigenvalue 0."""
    _check_beta(beta)
    p, U = eig_hermitian(rho)
    if p[-1] <= LOG_FLOOR:
        raise SupportError(f"state is not full rank (smallest eigenvalue {p[-1]:.3e})")
    E = -np.log(p) / beta
    E = E - E.min()
    H = (U * E) @ U.conj().T
    return (H + H.conj().T) / 2


def commutator_norm(A, B) -> float:
    A = as_matrix(A)
    B = as_matrix(B)
    return float(np.max(np.abs(A @ B - B @ A)))


def detect_thermal(c: Configuration, tol: float = THERMAL_ATOL) -> float | None:
    """Return beta if ``c`` is a Gibbs configuration for some finite beta > 0.

    beta is fitted by least squares of the log-populations against the
    energies in the Hamiltonian's eigenbasis, then checked in max-norm.
    A fully degenerate Hamiltonian with the maximally mixed state is thermal
    at every beta; 1.0 is returned in that case.
    """
    if commutator_norm(c.rho, c.hamiltonian) > max(tol, COMMUTATOR_ATOL):
        return None
    E, U = eig_hermitian(c.hamiltonian)
    p = np.real(np.einsum("ij,jk,ki->i", U.conj().T, c.rho, U))
    if np.min(p) <= LOG_FLOOR:
        return None
    spread = E.max() - E.min()
    if spread <= 1e-12 * (1.0 + np.abs(E).max()):
        beta = 1.0
    else:
        x = -(E - E.mean())
        y = np.log(p) - np.log(p).mean()
        beta = float(x @ y / (x @ x))
    if not (math.isfinite(beta) and beta > 0):
        return None
    gibbs, _ = _gibbs(c.hamiltonian, beta)
    if float(np.max(np.abs(c.rho - gibbs))) > tol:
        return None
    return beta


C = TypeVar("C", bound=Configuration)


def apply_gauge(c: C, g: Gauge) -> C:
    """Apply H -> b (H + a); for thermal input also beta -> beta / b.

    The state is untouched, so S is invariant; U maps to b (U + a).
    """
    H = g.b * (c.hamiltonian + g.a * np.eye(c.dim))
    if isinstance(c, ThermalConfiguration):
        beta = c.beta / g.b
        Z = c.partition_function * math.exp(-c.beta * g.a)
        return ThermalConfiguration(c.rho, H, beta=beta, partition_function=Z)
    return Configuration(c.rho, H)


def canonical_gauge(H) -> np.ndarray:
    """Shift ``H`` so its smallest eigenvalue is 0."""
    H = check_hermitian(H)
    return H - np.linalg.eigvalsh(H)[0] * np.eye(H.shape[0])


class PassivityResult(NamedTuple):
    passive: bool
    extractable: float


def passive_energy(rho, H) -> float:
    """Minimum of tr[V rho V^dag H] over unitaries: largest population on lowest level."""
    p = populations(rho)  # descending
    E = np.linalg.eigvalsh(as_matrix(H))  # ascending
    return float(p @ E)


def check_passive(c: Configuration, tol: float = COMMUTATOR_ATOL) -> PassivityResult:
    """Single-copy passivity and the work extractable by a Hamiltonian-returning unitary."""
    extractable = max(internal_energy(c) - passive_energy(c.rho, c.hamiltonian), 0.0)
    scale = 1.0 + float(np.max(np.abs(c.hamiltonian)))
    passive = commutator_norm(c.rho, c.hamiltonian) <= tol and extractable <= tol * scale
    return PassivityResult(passive, extractable)
