"""Discrete trajectories that reproduce the heat of a sampled continuous path.

For consecutive samples c_i = (rho_1, H_i), c_f = (rho_2, Ht_2) the gamma
trajectory is

    c_i -DUQ-> (rho_1, Ht_2) -DTT-> (rt_2, Ht_2) -DUQ-> (rt_2, H_2) -DTT-> (rho_2, H_2) -DUQ-> c_f

where rt_2 is the Gibbs state of Ht_2 and H_2 makes rho_2 thermal, both at
the reference inverse temperature ``beta``.  Its heat never exceeds the
right-endpoint increment tr[(rho_2 - rho_1) Ht_2]; refining the DTT steps
raises it towards (S_end - S_start) / beta.  When the sampled path satisfies
Clausius at ``beta`` the continuous heat lies in between and is matched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .configuration import Configuration, gibbs_state, thermalizing_hamiltonian, von_neumann_entropy
from .linalg import LOG_FLOOR
from .primitives import DTT, DUQ
from .refinement import _active_segments, staircase_steps, symmetric_relative_entropy, uniform_schedule
from .trajectory import Trajectory, run_trajectory

FULL_RANK_MIX = 1e-10
STATIONARY_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class SampledPath:
    samples: tuple[Configuration, ...]

    def __post_init__(self):
        samples = tuple(self.samples)
        if len(samples) < 2:
            raise ValueError("a sampled path needs at least 2 samples")
        dims = {c.dim for c in samples}
        if len(dims) != 1:
            raise ValueError(f"samples have inconsistent dimensions {sorted(dims)}")
        object.__setattr__(self, "samples", samples)


@dataclass(frozen=True)
class GammaDecomposition:
    q_i: float
    q_2: float
    q_f: float
    q_gamma: float
    delta_q: float
    perturbation: float = 0.0  # weight of I/d mixed into a rank-deficient rho_2


def _full_rank(rho: np.ndarray) -> tuple[np.ndarray, float]:
    if np.linalg.eigvalsh(rho)[0] > LOG_FLOOR:
        return rho, 0.0
    d = rho.shape[0]
    return (1.0 - FULL_RANK_MIX) * rho + FULL_RANK_MIX * np.eye(d) / d, FULL_RANK_MIX


def _tr(a, b) -> float:
    return float(np.real(np.trace(a @ b)))


def continuous_heat(path: SampledPath) -> float:
    """Right-endpoint Riemann sum of tr[d rho H]."""
    s = path.samples
    return math.fsum(_tr(s[k + 1].rho - s[k].rho, s[k + 1].hamiltonian) for k in range(len(s) - 1))


class OmegaCheck(NamedTuple):
    q_2: float
    q_f: float
    holds: bool


def _omega_heats(rho_2, h_tilde, beta):
    rho_t = gibbs_state(h_tilde, beta).rho
    h_2 = thermalizing_hamiltonian(rho_2, beta)
    q_2 = _tr(rho_2 - rho_t, h_2)
    q_f = _tr(rho_t - rho_2, h_tilde)
    return rho_t, h_2, q_2, q_f


def omega_check(c_f: Configuration, beta: float = 1.0) -> OmegaCheck:
    """Heats of the closed loop rt_2 -> (rt_2, H_2) -> rho_2 -> c_f -> rt_2; their sum cannot be positive."""
    rho_2, _ = _full_rank(np.asarray(c_f.rho))
    _, _, q_2, q_f = _omega_heats(rho_2, c_f.hamiltonian, beta)
    return OmegaCheck(q_2, q_f, q_2 + q_f <= 1e-9)


def gamma_step(c_i: Configuration, c_f: Configuration, beta: float = 1.0) -> tuple[Trajectory, GammaDecomposition]:
    if c_i.dim != c_f.dim:
        raise ValueError(f"dimension mismatch {c_i.dim} vs {c_f.dim}")
    rho_1 = np.asarray(c_i.rho)
    rho_2, eps = _full_rank(np.asarray(c_f.rho))
    h_tilde = c_f.hamiltonian
    rho_t, h_2, q_2, q_f = _omega_heats(rho_2, h_tilde, beta)
    q_i = _tr(rho_t - rho_1, h_tilde)
    start = c_i
    steps = [DUQ(h_tilde), DTT(beta), DUQ(h_2), DTT(beta), DUQ(h_tilde)]
    t = run_trajectory(start, steps)
    dec = GammaDecomposition(
        q_i=q_i,
        q_2=q_2,
        q_f=q_f,
        q_gamma=q_i + q_2,
        delta_q=_tr(np.asarray(c_f.rho) - rho_1, h_tilde),
        perturbation=eps,
    )
    return t, dec


def gamma_trajectory(path: SampledPath, beta: float = 1.0) -> tuple[Trajectory, list[GammaDecomposition]]:
    """Concatenate gamma trajectories for every increment of the path.

    Increments whose state does not move exchange no heat; they become a
    single quench with an all-zero decomposition.
    """
    steps, decs = [], []
    for a, b in zip(path.samples[:-1], path.samples[1:]):
        if np.max(np.abs(b.rho - a.rho)) <= STATIONARY_ATOL:
            steps.append(DUQ(b.hamiltonian))
            decs.append(GammaDecomposition(0.0, 0.0, 0.0, 0.0, 0.0))
            continue
        t, dec = gamma_step(a, b, beta)
        steps += t.steps
        decs.append(dec)
    return run_trajectory(path.samples[0], steps), decs


def _scaled_refinement(gamma: Trajectory, n: int, s: float, beta: float) -> Trajectory:
    """Every state-changing DTT refined into n sub-steps with weights s * l / n."""
    segments = _active_segments(gamma)
    if n == 1 or s == 0.0:
        return gamma
    steps = list(gamma.steps)
    for k in sorted(segments, reverse=True):
        a, b = gamma.configurations[k].rho, gamma.configurations[k + 1].rho
        H = gamma.configurations[k].hamiltonian
        weights = [s * w for w in uniform_schedule(n)]
        steps[k : k + 1] = staircase_steps(a, b, H, gamma.steps[k].beta, weights, beta)
    return run_trajectory(gamma.initial, steps)


class MatchResult(NamedTuple):
    trajectory: Trajectory
    continuous_heat: float
    gamma_heat: float
    discrete_heat: float
    achieved_gap: float
    converged: bool
    n: int
    scale: float  # fraction s of the uniform schedule used in the last refinement
    heat_limit: float  # (S_end - S_start) / beta, the supremum reachable by refinement
    decompositions: list[GammaDecomposition]


def match_continuous(path: SampledPath, tol: float, beta: float = 1.0, n_max: int = 4096) -> MatchResult:
    """Discrete trajectory between the path's endpoints whose heat matches the continuous heat within ``tol``.

    Refinement levels n = 2, 4, ... are tried until the heat overshoots; the
    schedule is then shrunk continuously (weights s * l / n) and s is solved
    for.  If the target exceeds (S_end - S_start) / beta the path violates
    Clausius at ``beta`` and no refinement can reach it: the trajectory is
    refined until its heat is within ``tol`` of that supremum (at most
    ``n_max``) and returned with ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    q_cont = continuous_heat(path)
    gamma, decs = gamma_trajectory(path, beta)
    q_gamma = gamma.total_heat
    limit = (von_neumann_entropy(path.samples[-1].rho) - von_neumann_entropy(path.samples[0].rho)) / beta

    def result(t, n, s, converged):
        q = t.total_heat
        return MatchResult(t, q_cont, q_gamma, q, abs(q - q_cont), converged, n, s, limit, decs)

    if abs(q_gamma - q_cont) <= tol:
        return result(gamma, 1, 0.0, True)
    if q_cont > limit + tol:
        # out of reach: refine only until the heat is within tol of its supremum
        sym = math.fsum(
            symmetric_relative_entropy(gamma.configurations[k].rho, gamma.configurations[k + 1].rho)
            for k in _active_segments(gamma)
        )
        n = min(n_max, max(1, math.ceil(sym / (beta * tol))))
        return result(_scaled_refinement(gamma, n, 1.0, beta), n, 1.0, False)

    n = 1
    best = (gamma, 1, 0.0)
    while n < n_max:
        n = min(2 * n, n_max)
        refined = _scaled_refinement(gamma, n, 1.0, beta)
        q = refined.total_heat
        if abs(q - q_cont) <= tol:
            return result(refined, n, 1.0, True)
        if abs(q - q_cont) < abs(best[0].total_heat - q_cont):
            best = (refined, n, 1.0)
        if q > q_cont:
            heat_at = lambda s: _scaled_refinement(gamma, n, s, beta).total_heat - q_cont
            s = brentq(heat_at, 0.0, 1.0, xtol=1e-14, rtol=1e-14)
            t = _scaled_refinement(gamma, n, s, beta)
            return result(t, n, s, abs(t.total_heat - q_cont) <= tol)
    t, n, s = best
    return result(t, n, s, False)
