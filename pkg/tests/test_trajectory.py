import math

import numpy as np
import pytest

from dqthermo.configuration import Configuration, gibbs_state, von_neumann_entropy
from dqthermo.linalg import haar_random_unitary, random_density_matrix, random_hermitian
from dqthermo.primitives import DTT, DUQ, DUT
from dqthermo.trajectory import (
    StepError,
    Trajectory,
    clausius_check,
    concatenate,
    connect_configurations,
    lambda_functional,
    run_trajectory,
    summarize,
)

from strategies import random_trajectory


def test_empty_trajectory(gibbs1):
    t = run_trajectory(gibbs1, [])
    assert len(t) == 0 and len(t.configurations) == 1
    assert (t.total_heat, t.total_work, t.delta_u, t.delta_s, lambda_functional(t)) == (0, 0, 0, 0, 0)


def test_qubit_quench_then_thermalise(gibbs1, qubit_h):
    t = run_trajectory(gibbs1, [DUQ(qubit_h), DTT(2.0)])
    assert t.total_heat == pytest.approx(-0.149738, abs=1e-6)
    assert t.total_work == 0.0
    assert lambda_functional(t) == pytest.approx(-0.299477, abs=1e-6)
    ds, lam, holds = clausius_check(t)
    assert ds == pytest.approx(-0.216869, abs=1e-6) and holds


def test_closed_unitary_loop(gibbs1, qubit_h):
    V = haar_random_unitary(2, seed=1)
    t = run_trajectory(gibbs1, [DUT(V, qubit_h), DUT(V.conj().T, qubit_h)])
    assert abs(t.delta_u) <= 1e-12 and t.total_heat == 0.0
    assert clausius_check(t) == (pytest.approx(0.0, abs=1e-12), 0.0, True)


def test_step_error_carries_index(gibbs1, qubit_h):
    with pytest.raises(StepError) as info:
        run_trajectory(gibbs1, [DUQ(qubit_h), DUQ(np.eye(3))])
    assert info.value.index == 1


def test_inconsistent_lengths_rejected(gibbs1):
    with pytest.raises(ValueError):
        Trajectory((gibbs1,), (DTT(1.0),), ())


def test_lambda_additive(rng, gibbs1, qubit_h):
    t1 = run_trajectory(gibbs1, [DTT(2.0), DUQ(random_hermitian(2, rng))])
    t2 = run_trajectory(t1.final, [DTT(0.3), DTT(5.0)])
    both = concatenate(t1, t2)
    assert lambda_functional(both) == pytest.approx(lambda_functional(t1) + lambda_functional(t2), abs=1e-12)
    with pytest.raises(ValueError):
        concatenate(t2, t1)


def test_random_sweep_invariants(rng):
    for _ in range(300):
        t = random_trajectory(rng)
        check = clausius_check(t)
        assert check.holds and check.slack >= -1e-9
        assert abs(t.delta_u - (t.total_heat + t.total_work)) <= 1e-9
        parts = math.fsum(d.delta_s for d in t.ledgers)
        assert abs(parts - t.delta_s) <= 1e-9


def test_summary_report(gibbs1, qubit_h):
    rep = summarize(run_trajectory(gibbs1, [DUQ(qubit_h), DTT(2.0)]))
    assert [r.kind for r in rep.per_step] == ["DUQ", "DTT"]
    assert rep.per_step[1].beta == 2.0 and rep.per_step[0].beta is None
    assert rep.clausius_slack == pytest.approx(0.082608, abs=1e-6)
    assert rep.clausius_holds


def test_connect_identical(rng):
    c = Configuration(random_density_matrix(3, rng), random_hermitian(3, rng))
    t = connect_configurations(c, c)
    assert abs(t.total_heat) <= 1e-10 and abs(t.delta_s) <= 1e-12


def test_connect_qubit_example():
    c_i = Configuration(np.eye(2) / 2, np.diag([0.0, 1.0]))
    c_f = Configuration(gibbs_state(np.diag([0.0, 1.0]), 2.0).rho, np.diag([0.0, 3.0]))
    t = connect_configurations(c_i, c_f, beta_mid=2.0)
    assert np.max(np.abs(t.final.rho - c_f.rho)) <= 1e-8
    assert np.array_equal(t.final.hamiltonian, c_f.hamiltonian)
    q_t = t.ledgers[1].heat
    assert t.delta_s >= 2.0 * q_t - 1e-9
    assert clausius_check(t).slack >= 0


def test_connect_explicit_h_mid(gibbs2, qubit_h):
    c_i = Configuration(np.eye(2) / 2, qubit_h)
    t = connect_configurations(c_i, gibbs2, h_mid=2 * qubit_h, beta_mid=1.0)
    assert np.max(np.abs(t.final.rho - gibbs2.rho)) <= 1e-8
    with pytest.raises(ValueError):
        connect_configurations(c_i, gibbs2, h_mid=qubit_h, beta_mid=1.0)


def test_connect_random_pairs(rng):
    for _ in range(200):
        d = int(rng.integers(2, 6))
        c_i = Configuration(random_density_matrix(d, rng), random_hermitian(d, rng))
        c_f = Configuration(random_density_matrix(d, rng), random_hermitian(d, rng))
        beta = float(rng.uniform(0.2, 5))
        t = connect_configurations(c_i, c_f, v=haar_random_unitary(d, seed=int(rng.integers(1e9))), beta_mid=beta)
        assert np.max(np.abs(t.final.rho - c_f.rho)) <= 1e-8
        ds = von_neumann_entropy(c_f.rho) - von_neumann_entropy(c_i.rho)
        assert ds >= beta * t.ledgers[1].heat - 1e-9
