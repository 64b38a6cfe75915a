"""Process primitives and their heat/work ledgers.

* ``DUT``: rho -> V rho V^dag together with an arbitrary new Hamiltonian.
  All energy change is work.
* ``DUQ``: a DUT with V = I (instantaneous quench).
* ``DTT``: rho -> exp(-beta H) / Z with H unchanged.  All energy change is
  heat.  Only the endpoints matter, so no dynamics are integrated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .configuration import (
    Configuration,
    _check_beta,
    _frozen,
    gibbs_state,
    internal_energy,
    von_neumann_entropy,
)
from .linalg import check_hermitian, check_unitary

FIRST_LAW_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class DUT:
    unitary: np.ndarray
    hamiltonian: np.ndarray

    def __post_init__(self):
        V = check_unitary(self.unitary)
        H = check_hermitian(self.hamiltonian)
        if V.shape != H.shape:
            raise ValueError(f"unitary is {V.shape} but Hamiltonian is {H.shape}")
        object.__setattr__(self, "unitary", _frozen(V))
        object.__setattr__(self, "hamiltonian", _frozen(H))


@dataclass(frozen=True, eq=False)
class DUQ:
    hamiltonian: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "hamiltonian", _frozen(check_hermitian(self.hamiltonian)))

    @property
    def unitary(self) -> np.ndarray:
        return np.eye(self.hamiltonian.shape[0], dtype=complex)


@dataclass(frozen=True)
class DTT:
    beta: float

    def __post_init__(self):
        _check_beta(self.beta)
        object.__setattr__(self, "beta", float(self.beta))


Step = Union[DUT, DUQ, DTT]


def is_unitary_step(step) -> bool:
    return isinstance(step, (DUT, DUQ))


@dataclass(frozen=True)
class EnergyDelta:
    heat: float
    work: float
    delta_u: float
    delta_s: float

    @property
    def first_law_residual(self) -> float:
        return abs(self.delta_u - self.heat - self.work)


def apply_step(c: Configuration, step: Step) -> tuple[Configuration, EnergyDelta]:
    """Apply one primitive and return the new configuration with its ledger."""
    u0 = internal_energy(c)
    s0 = von_neumann_entropy(c.rho)
    if isinstance(step, DTT):
        nxt = gibbs_state(c.hamiltonian, step.beta)
        u1 = internal_energy(nxt)
        heat = float(np.real(np.trace(c.hamiltonian @ (nxt.rho - c.rho))))
        work = 0.0
    elif isinstance(step, (DUT, DUQ)):
        if step.hamiltonian.shape != c.rho.shape:
            raise ValueError(f"step acts on dimension {step.hamiltonian.shape[0]}, configuration has {c.dim}")
        if isinstance(step, DUQ):
            rho = c.rho
        else:
            V = step.unitary
            rho = V @ c.rho @ V.conj().T
        nxt = Configuration(rho, step.hamiltonian)
        u1 = internal_energy(nxt)
        heat = 0.0
        work = u1 - u0
    else:
        raise TypeError(f"unknown step type {type(step).__name__}")
    ledger = EnergyDelta(heat=heat, work=work, delta_u=u1 - u0, delta_s=von_neumann_entropy(nxt.rho) - s0)
    return nxt, ledger


def invert_dut(step: DUT | DUQ, original_hamiltonian) -> DUT | DUQ:
    """The unitary step undoing ``step`` when it was applied to a configuration with ``original_hamiltonian``."""
    if isinstance(step, DUQ):
        return DUQ(original_hamiltonian)
    if isinstance(step, DUT):
        return DUT(step.unitary.conj().T, original_hamiltonian)
    raise TypeError(f"only DUT/DUQ steps can be inverted, got {type(step).__name__}")


def compose_duts(s1: DUT | DUQ, s2: DUT | DUQ) -> DUT | DUQ:
    """Single unitary step equivalent to ``s1`` followed by ``s2``."""
    if not (is_unitary_step(s1) and is_unitary_step(s2)):
        raise TypeError("only DUT/DUQ steps can be composed")
    if s1.hamiltonian.shape != s2.hamiltonian.shape:
        raise ValueError(f"dimension mismatch {s1.hamiltonian.shape} vs {s2.hamiltonian.shape}")
    if isinstance(s1, DUQ) and isinstance(s2, DUQ):
        return DUQ(s2.hamiltonian)
    return DUT(s2.unitary @ s1.unitary, s2.hamiltonian)

