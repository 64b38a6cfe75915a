"""Intermediate thermal configurations that push Lambda up to the entropy change.

A DTT step rho_pre -> rho_post is replaced by DUQ+DTT sub-steps through the
mixtures (1 - w) rho_pre + w rho_post.  Each intermediate configuration is
thermal at ``beta_mid`` (1 by default) for the Hamiltonian
``thermalizing_hamiltonian(mixture, beta_mid)``; the last sub-step returns to
the segment's own Hamiltonian and bath, so endpoints are unchanged.

For the uniform schedule w = l/n the remaining gap obeys
``0 <= dS - Lambda <= [S(a||b) + S(b||a)] / n`` per segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .configuration import relative_entropy, thermalizing_hamiltonian
from .linalg import SupportError
from .primitives import DTT, DUQ
from .trajectory import Trajectory, clausius_check, lambda_functional, run_trajectory

DISTINCT_ATOL = 1e-10


class DegenerateSegmentError(ValueError):
    pass


@dataclass(frozen=True)
class RefinementPlan:
    segment_index: int
    n: int
    schedule: tuple[float, ...]  # interior mixing weights toward the segment end

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


class ConvergenceRow(NamedTuple):
    n: int
    lambda_: float
    gap: float
    bound: float


def _segment_states(t: Trajectory, k: int) -> tuple[np.ndarray, np.ndarray]:
    if not 0 <= k < len(t.steps):
        raise IndexError(f"segment index {k} out of range for {len(t.steps)} steps")
    if not isinstance(t.steps[k], DTT):
        raise ValueError(f"segment {k} is a {type(t.steps[k]).__name__}, not a DTT")
    return t.configurations[k].rho, t.configurations[k + 1].rho


def _replace_step(t: Trajectory, k: int, new_steps: Sequence) -> Trajectory:
    """Rerun ``t`` with step ``k`` replaced by ``new_steps``."""
    head = Trajectory(t.configurations[: k + 1], t.steps[:k], t.ledgers[:k])
    tail = run_trajectory(t.configurations[k], list(new_steps) + list(t.steps[k + 1 :]))
    return Trajectory(
        head.configurations + tail.configurations[1:],
        head.steps + tail.steps,
        head.ledgers + tail.ledgers,
    )


def uniform_schedule(n: int) -> tuple[float, ...]:
    return tuple(l / n for l in range(1, n))


def staircase_steps(rho_start, rho_end, hamiltonian, beta_end: float, weights: Sequence[float], beta_mid: float = 1.0):
    """DUQ+DTT steps through the mixtures at ``weights``, then back to (hamiltonian, beta_end)."""
    steps = []
    for w in weights:
        if not 0.0 <= w < 1.0:
            raise ValueError(f"mixing weight {w} outside [0, 1)")
        mix = (1.0 - w) * rho_start + w * rho_end
        steps += [DUQ(thermalizing_hamiltonian(mix, beta_mid)), DTT(beta_mid)]
    steps += [DUQ(hamiltonian), DTT(beta_end)]
    return steps


def refine_segment(
    t: Trajectory,
    k: int,
    n: int,
    beta_mid: float = 1.0,
    schedule: Sequence[float] | None = None,
) -> Trajectory:
    """Replace DTT step ``k`` by ``n`` DUQ+DTT sub-steps.

    ``schedule`` overrides the ``n - 1`` interior mixing weights (default l/n).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rho_pre, rho_post = _segment_states(t, k)
    weights = uniform_schedule(n) if schedule is None else tuple(schedule)
    if len(weights) != n - 1:
        raise ValueError(f"schedule needs {n - 1} weights, got {len(weights)}")
    if n == 1:
        return t
    _require_full_rank(rho_pre, rho_post)
    H = t.configurations[k].hamiltonian
    steps = staircase_steps(rho_pre, rho_post, H, t.steps[k].beta, weights, beta_mid)
    return _replace_step(t, k, steps)


def _require_full_rank(*states) -> None:
    for rho in states:
        if np.linalg.eigvalsh(rho)[0] <= 1e-14:
            raise SupportError("segment endpoint is not full rank")


def insert_midpoint(t: Trajectory, k: int, p: float, beta_mid: float = 1.0) -> Trajectory:
    """Insert one thermal configuration with state p rho_pre + (1 - p) rho_post into DTT step ``k``."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"mixing probability must lie in (0, 1), got {p}")
    rho_pre, rho_post = _segment_states(t, k)
    if np.max(np.abs(rho_pre - rho_post)) <= DISTINCT_ATOL:
        raise DegenerateSegmentError(f"segment {k} does not change the state; insertion gains nothing")
    _require_full_rank(rho_pre, rho_post)
    H = t.configurations[k].hamiltonian
    steps = staircase_steps(rho_pre, rho_post, H, t.steps[k].beta, [1.0 - p], beta_mid)
    return _replace_step(t, k, steps)


def symmetric_relative_entropy(a, b) -> float:
    return relative_entropy(a, b) + relative_entropy(b, a)


def lambda_gap_bound(rho_k, rho_k1, n: int) -> float:
    """[S(rho_k1 || rho_k) + S(rho_k || rho_k1)] / n (``inf`` if either is rank deficient)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return symmetric_relative_entropy(rho_k, rho_k1) / n


def _active_segments(t: Trajectory) -> list[int]:
    out = []
    for k in t.dtt_indices():
        a, b = t.configurations[k].rho, t.configurations[k + 1].rho
        if np.max(np.abs(a - b)) > DISTINCT_ATOL:
            out.append(k)
    return out


def refine_all(t: Trajectory, n_per_segment: dict[int, int], beta_mid: float = 1.0) -> Trajectory:
    """Refine several DTT segments with the uniform schedule, rerunning the trajectory once."""
    todo = {k: n for k, n in n_per_segment.items() if n > 1}
    for k, n in n_per_segment.items():
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        _segment_states(t, k)
    if not todo:
        return t
    first = min(todo)
    steps = []
    for k in range(first, len(t.steps)):
        if k in todo:
            rho_pre, rho_post = _segment_states(t, k)
            _require_full_rank(rho_pre, rho_post)
            H = t.configurations[k].hamiltonian
            steps += staircase_steps(rho_pre, rho_post, H, t.steps[k].beta, uniform_schedule(todo[k]), beta_mid)
        else:
            steps.append(t.steps[k])
    tail = run_trajectory(t.configurations[first], steps)
    return Trajectory(
        t.configurations[:first] + tail.configurations,
        t.steps[:first] + tail.steps,
        t.ledgers[:first] + tail.ledgers,
    )


class SaturationResult(NamedTuple):
    trajectory: Trajectory
    table: list[ConvergenceRow]
    plans: list[RefinementPlan]
    converged: bool


def saturate(t: Trajectory, tol: float, n_max: int = 100_000, beta_mid: float = 1.0) -> SaturationResult:
    """Refine every state-changing DTT step until dS - Lambda <= tol is guaranteed.

    The tolerance is split evenly over the m refined segments:
    n_k = ceil(m * symKL_k / tol), capped at ``n_max``.  The table lists the
    gap with every segment refined to the same n = 1, 2, 4, ... up to max n_k.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    segments = _active_segments(t)
    if not segments:
        check = clausius_check(t)
        return SaturationResult(t, [ConvergenceRow(1, check.lambda_, check.slack, 0.0)], [], True)
    sym = {}
    for k in segments:
        a, b = t.configurations[k].rho, t.configurations[k + 1].rho
        _require_full_rank(a, b)
        sym[k] = symmetric_relative_entropy(a, b)
    m = len(segments)
    wanted = {k: max(1, math.ceil(m * sym[k] / tol)) for k in segments}
    chosen = {k: min(n, n_max) for k, n in wanted.items()}
    converged = all(wanted[k] <= n_max for k in segments)

    n_top = max(chosen.values())
    ns = [1]
    while ns[-1] < n_top:
        ns.append(min(2 * ns[-1], n_top))
    table = convergence_table(t, ns, beta_mid)

    final = refine_all(t, chosen, beta_mid)
    converged = converged and clausius_check(final).slack <= tol
    plans = [RefinementPlan(k, chosen[k], uniform_schedule(chosen[k])) for k in segments]
    return SaturationResult(final, table, plans, converged)


def convergence_table(t: Trajectory, ns: Sequence[int], beta_mid: float = 1.0) -> list[ConvergenceRow]:
    """Gap after refining every state-changing DTT step to each n in ``ns``."""
    segments = _active_segments(t)
    sym_total = 0.0
    for k in segments:
        a, b = t.configurations[k].rho, t.configurations[k + 1].rho
        sym_total += symmetric_relative_entropy(a, b)
    rows = []
    for n in ns:
        refined = refine_all(t, {k: n for k in segments}, beta_mid)
        check = clausius_check(refined)
        rows.append(ConvergenceRow(n, lambda_functional(refined), check.slack, sym_total / n))
    return rows
