"""Four-configuration discrete cycles and their efficiency bounds.

Loop: c1(beta_1) -DUT a-> c3 -DTT(beta_2)-> c2(beta_2) -DUT b-> c4 -DTT(beta_1)-> c1(beta_1),
with H1 at c1/c4 and H2 at c3/c2.  Default DUTs are identities (quenches),
which gives an Otto-type cycle.

Heats are reported per bath: ``q_hot`` is exchanged with the bath of larger
temperature (smaller beta; beta_2's bath on a tie), ``q_cold`` with the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .configuration import _check_beta, gibbs_state, thermalizing_hamiltonian
from .linalg import check_hermitian, check_unitary
from .primitives import DTT, DUQ, DUT
from .trajectory import Trajectory, clausius_check, run_trajectory

CYCLE_ATOL = 1e-9


class CycleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CycleSpec:
    beta_1: float
    beta_2: float
    h_1: np.ndarray
    h_2: np.ndarray
    dut_a: np.ndarray | None = None
    dut_b: np.ndarray | None = None
    refinement_n: int = 0

    def __post_init__(self):
        _check_beta(self.beta_1)
        _check_beta(self.beta_2)
        h1, h2 = check_hermitian(self.h_1), check_hermitian(self.h_2)
        if h1.shape != h2.shape:
            raise ValueError(f"h_1 is {h1.shape} but h_2 is {h2.shape}")
        d = h1.shape[0]
        va = np.eye(d, dtype=complex) if self.dut_a is None else check_unitary(self.dut_a)
        vb = np.eye(d, dtype=complex) if self.dut_b is None else check_unitary(self.dut_b)
        if va.shape != h1.shape or vb.shape != h1.shape:
            raise ValueError("cycle unitaries do not match the Hamiltonian dimension")
        if self.refinement_n < 0:
            raise ValueError("refinement_n must be >= 0")
        for name, val in (("h_1", h1), ("h_2", h2), ("dut_a", va), ("dut_b", vb)):
            object.__setattr__(self, name, val)

    @property
    def dim(self) -> int:
        return self.h_1.shape[0]


class FigureOfMerit(NamedTuple):
    mode: str  # "engine" | "refrigerator"
    value: float
    bound: float


@dataclass(frozen=True, eq=False)
class CycleReport:
    q_hot: float
    q_cold: float
    beta_hot: float
    beta_cold: float
    work_net: float  # work done on the system over one loop
    mode: str
    efficiency: float | None
    cop: float | None
    carnot_bound: float | None
    bound_satisfied: bool
    delta_s: float
    heat_bound: float  # beta_hot q_hot + beta_cold q_cold, must be <= 0
    closure_error: float
    n: int = 1
    trajectory: Trajectory | None = field(default=None, repr=False)


def _bath_roles(beta_1: float, beta_2: float) -> bool:
    """True when the beta_2 bath is the hot one."""
    return beta_2 <= beta_1


def cycle_efficiency(q_hot: float, q_cold: float, beta_hot: float, beta_cold: float) -> FigureOfMerit:
    """Engine efficiency or refrigerator COP with the matching Carnot bound.

    Engine (heat in from the hot bath): eta = (q_hot + q_cold) / q_hot <= 1 - T_cold / T_hot.
    Refrigerator (heat drawn from the cold bath): COP = q_cold / W <= T_cold / (T_hot - T_cold).
    """
    if beta_hot > beta_cold:
        raise ValueError("beta_hot must not exceed beta_cold")
    clausius = beta_hot * q_hot + beta_cold * q_cold
    if clausius > CYCLE_ATOL * (1.0 + abs(beta_hot * q_hot) + abs(beta_cold * q_cold)):
        raise CycleError(
            f"heats (q_hot={q_hot}, q_cold={q_cold}) violate beta_hot q_hot + beta_cold q_cold <= 0 (value {clausius:.3e})"
        )
    if q_hot > 0:
        return FigureOfMerit("engine", (q_hot + q_cold) / q_hot, 1.0 - beta_hot / beta_cold)
    if q_cold > 0:
        work_in = -(q_hot + q_cold)
        t_hot, t_cold = 1.0 / beta_hot, 1.0 / beta_cold
        bound = math.inf if t_hot == t_cold else t_cold / (t_hot - t_cold)
        return FigureOfMerit("refrigerator", q_cold / work_in, bound)
    raise CycleError("no heat is absorbed from either bath; neither an efficiency nor a COP is defined")


def _steps(spec: CycleSpec, n: int):
    rho_1 = gibbs_state(spec.h_1, spec.beta_1).rho
    rho_2 = gibbs_state(spec.h_2, spec.beta_2).rho
    rho_3 = spec.dut_a @ rho_1 @ spec.dut_a.conj().T
    rho_4 = spec.dut_b @ rho_2 @ spec.dut_b.conj().T
    branch_2 = _isotherm(rho_3, spec.h_2, spec.beta_2, n)
    branch_1 = _isotherm(rho_4, spec.h_1, spec.beta_1, n)
    return [DUT(spec.dut_a, spec.h_2), *branch_2, DUT(spec.dut_b, spec.h_1), *branch_1]


def _isotherm(rho_start, h_end, beta: float, n: int):
    """n DUQ+DTT steps at fixed beta along H(s) = (1 - s) H_start + s h_end.

    H_start makes rho_start thermal at beta; the last step is a plain DTT on h_end.
    """
    if n <= 1:
        return [DTT(beta)]
    h_start = thermalizing_hamiltonian(rho_start, beta)
    steps = []
    for l in range(1, n):
        s = l / n
        steps += [DUQ((1.0 - s) * h_start + s * h_end), DTT(beta)]
    steps += [DUQ(h_end), DTT(beta)]
    return steps


def _report(spec: CycleSpec, t: Trajectory, n: int) -> CycleReport:
    # first DUT opens the beta_2 branch, second DUT the beta_1 branch
    heats = {1: [], 2: []}
    branch = 2
    duts = 0
    for step, d in zip(t.steps, t.ledgers):
        if isinstance(step, DUT):
            duts += 1
            branch = 2 if duts == 1 else 1
        elif isinstance(step, DTT):
            heats[branch].append(d.heat)
    q_by_beta = {b: math.fsum(h) for b, h in heats.items()}

    closure = float(np.max(np.abs(t.final.rho - t.initial.rho)))
    if closure > 1e-8:
        raise CycleError(f"cycle does not close: state mismatch {closure:.3e}")
    work_net = t.total_work
    if abs(t.delta_u) > CYCLE_ATOL or abs(work_net + q_by_beta[1] + q_by_beta[2]) > CYCLE_ATOL * (1 + abs(work_net)):
        raise CycleError("first law around the loop is violated")

    if _bath_roles(spec.beta_1, spec.beta_2):
        beta_hot, beta_cold, q_hot, q_cold = spec.beta_2, spec.beta_1, q_by_beta[2], q_by_beta[1]
    else:
        beta_hot, beta_cold, q_hot, q_cold = spec.beta_1, spec.beta_2, q_by_beta[1], q_by_beta[2]
    heat_bound = beta_hot * q_hot + beta_cold * q_cold
    bound_ok = heat_bound <= CYCLE_ATOL

    efficiency = cop = bound = None
    mode = "mixed"
    scale = CYCLE_ATOL * (1.0 + abs(q_hot) + abs(q_cold))
    if q_hot > scale and work_net < -scale:
        fom = cycle_efficiency(q_hot, q_cold, beta_hot, beta_cold)
        mode, efficiency, bound = "engine", fom.value, fom.bound
        bound_ok = bound_ok and efficiency <= bound + CYCLE_ATOL
    elif q_cold > scale and q_hot < -scale:
        fom = cycle_efficiency(q_hot, q_cold, beta_hot, beta_cold)
        mode, cop, bound = "refrigerator", fom.value, fom.bound
        bound_ok = bound_ok and cop <= bound + CYCLE_ATOL * (1 + abs(bound))
    return CycleReport(
        q_hot=q_hot,
        q_cold=q_cold,
        beta_hot=beta_hot,
        beta_cold=beta_cold,
        work_net=work_net,
        mode=mode,
        efficiency=efficiency,
        cop=cop,
        carnot_bound=bound,
        bound_satisfied=bool(bound_ok),
        delta_s=clausius_check(t).delta_s,
        heat_bound=heat_bound,
        closure_error=closure,
        n=n,
        trajectory=t,
    )


def run_cycle(spec: CycleSpec) -> CycleReport:
    if spec.refinement_n > 1:
        return refine_cycle(spec, spec.refinement_n)
    return _run(spec, 1)


def refine_cycle(spec: CycleSpec, n: int) -> CycleReport:
    """Replace both DTT branches by n-step isothermal staircases."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return _run(spec, n)


def _run(spec: CycleSpec, n: int) -> CycleReport:
    start = gibbs_state(spec.h_1, spec.beta_1)
    t = run_trajectory(start, _steps(spec, n))
    return _report(spec, t, n)


def efficiency_sweep(spec: CycleSpec, ns) -> list[CycleReport]:
    return [refine_cycle(spec, n) for n in ns]
