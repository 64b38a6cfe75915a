"""Discrete trajectories built from DUT/DUQ/DTT steps and their Clausius bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .configuration import Configuration, gibbs_state, thermalizing_hamiltonian, von_neumann_entropy
from .linalg import check_hermitian, check_unitary
from .primitives import DTT, DUQ, DUT, EnergyDelta, Step, apply_step

CLAUSIUS_ATOL = 1e-9


class StepError(ValueError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"step {index}: {cause}")
        self.index = index
        self.cause = cause


@dataclass(frozen=True, eq=False)
class Trajectory:
    configurations: tuple[Configuration, ...]
    steps: tuple[Step, ...]
    ledgers: tuple[EnergyDelta, ...]

    def __post_init__(self):
        if not (len(self.configurations) == len(self.steps) + 1 == len(self.ledgers) + 1):
            raise ValueError(
                f"inconsistent trajectory: {len(self.configurations)} configurations, "
                f"{len(self.steps)} steps, {len(self.ledgers)} ledgers"
            )

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def initial(self) -> Configuration:
        return self.configurations[0]

    @property
    def final(self) -> Configuration:
        return self.configurations[-1]

    @property
    def total_heat(self) -> float:
        return math.fsum(d.heat for d in self.ledgers)

    @property
    def total_work(self) -> float:
        return math.fsum(d.work for d in self.ledgers)

    @property
    def delta_u(self) -> float:
        return self.final.energy - self.initial.energy

    @property
    def delta_s(self) -> float:
        return von_neumann_entropy(self.final.rho) - von_neumann_entropy(self.initial.rho)

    def dtt_indices(self) -> list[int]:
        return [k for k, s in enumerate(self.steps) if isinstance(s, DTT)]


def run_trajectory(initial: Configuration, steps: Sequence[Step]) -> Trajectory:
    configs = [initial]
    ledgers = []
    c = initial
    for k, step in enumerate(steps):
        try:
            c, d = apply_step(c, step)
        except (ValueError, TypeError) as exc:
            raise StepError(k, exc) from exc
        configs.append(c)
        ledgers.append(d)
    return Trajectory(tuple(configs), tuple(steps), tuple(ledgers))


def concatenate(first: Trajectory, second: Trajectory) -> Trajectory:
    """Join two trajectories; ``second`` must start where ``first`` ends."""
    a, b = first.final, second.initial
    if np.max(np.abs(a.rho - b.rho)) > 1e-9 or np.max(np.abs(a.hamiltonian - b.hamiltonian)) > 1e-9:
        raise ValueError("trajectories do not share an endpoint")
    return Trajectory(
        first.configurations + second.configurations[1:],
        first.steps + second.steps,
        first.ledgers + second.ledgers,
    )


def lambda_terms(t: Trajectory) -> list[float]:
    """beta * Q for every DTT step, zero for unitary steps."""
    return [s.beta * d.heat if isinstance(s, DTT) else 0.0 for s, d in zip(t.steps, t.ledgers)]


def lambda_functional(t: Trajectory) -> float:
    """Sum of beta_target * heat over the DTT steps (discrete integral of dQ/T)."""
    return math.fsum(lambda_terms(t))


class ClausiusCheck(NamedTuple):
    delta_s: float
    lambda_: float
    holds: bool

    @property
    def slack(self) -> float:
        return self.delta_s - self.lambda_


def clausius_check(t: Trajectory, atol: float = CLAUSIUS_ATOL) -> ClausiusCheck:
    ds = t.delta_s
    lam = lambda_functional(t)
    return ClausiusCheck(ds, lam, ds >= lam - atol)


@dataclass(frozen=True)
class StepSummary:
    index: int
    kind: str
    beta: float | None
    heat: float
    work: float
    delta_u: float
    delta_s: float
    lambda_: float


@dataclass(frozen=True)
class TrajectoryReport:
    total_heat: float
    total_work: float
    delta_u: float
    delta_s: float
    lambda_: float
    clausius_slack: float
    clausius_holds: bool
    per_step: tuple[StepSummary, ...]


def step_kind(step: Step) -> str:
    return type(step).__name__


def summarize(t: Trajectory) -> TrajectoryReport:
    lam_terms = lambda_terms(t)
    rows = tuple(
        StepSummary(
            index=k,
            kind=step_kind(s),
            beta=s.beta if isinstance(s, DTT) else None,
            heat=d.heat,
            work=d.work,
            delta_u=d.delta_u,
            delta_s=d.delta_s,
            lambda_=lam,
        )
        for k, (s, d, lam) in enumerate(zip(t.steps, t.ledgers, lam_terms))
    )
    check = clausius_check(t)
    return TrajectoryReport(
        total_heat=t.total_heat,
        total_work=t.total_work,
        delta_u=t.delta_u,
        delta_s=check.delta_s,
        lambda_=check.lambda_,
        clausius_slack=check.slack,
        clausius_holds=check.holds,
        per_step=rows,
    )


def connect_configurations(
    c_i: Configuration,
    c_f: Configuration,
    v=None,
    h_mid=None,
    beta_mid: float = 1.0,
) -> Trajectory:
    """Three-step trajectory c_i -DUT-> c_1 -DTT-> c_2(beta_mid) -DUQ-> c_f.

    ``h_mid`` defaults to the Hamiltonian that makes rho_f thermal at
    ``beta_mid`` (requires full-rank rho_f).  An explicit ``h_mid`` must have
    rho_f as its Gibbs state at ``beta_mid``.
    """
    if c_i.dim != c_f.dim:
        raise ValueError(f"dimension mismatch {c_i.dim} vs {c_f.dim}")
    V = np.eye(c_i.dim, dtype=complex) if v is None else check_unitary(v)
    if h_mid is None:
        H1 = thermalizing_hamiltonian(c_f.rho, beta_mid)
    else:
        H1 = check_hermitian(h_mid)
        err = float(np.max(np.abs(gibbs_state(H1, beta_mid).rho - c_f.rho)))
        if err > 1e-8:
            raise ValueError(f"Gibbs state of h_mid at beta={beta_mid} misses rho_f by {err:.3e}")
    return run_trajectory(c_i, [DUT(V, H1), DTT(beta_mid), DUQ(c_f.hamiltonian)])
