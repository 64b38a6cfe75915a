import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqthermo.configuration import (
    Configuration,
    DensityMatrixError,
    Gauge,
    ThermalConfiguration,
    ThermalError,
    apply_gauge,
    canonical_gauge,
    check_passive,
    detect_thermal,
    entropy_change_bounds,
    gibbs_state,
    internal_energy,
    passive_energy,
    relative_entropy,
    thermalizing_hamiltonian,
    von_neumann_entropy,
)
from dqthermo.linalg import SupportError, conjugate_by_unitary, haar_random_unitary, random_density_matrix, random_hermitian


def test_gibbs_qubit_values(qubit_h):
    c = gibbs_state(qubit_h, 1.0)
    assert np.allclose(np.diag(c.rho).real, [0.731059, 0.268941], atol=1e-6)
    assert c.partition_function == pytest.approx(1.367879, abs=1e-6)
    c2 = gibbs_state(qubit_h, 2.0)
    assert np.allclose(np.diag(c2.rho).real, [0.880797, 0.119203], atol=1e-6)
    assert c2.partition_function == pytest.approx(1.135335, abs=1e-6)


def test_gibbs_entropy_identity(rng):
    for _ in range(20):
        H = random_hermitian(4, rng)
        beta = rng.uniform(0.1, 5)
        c = gibbs_state(H, beta)
        assert c.entropy == pytest.approx(math.log(c.partition_function) + beta * c.energy, abs=1e-9)


def test_gibbs_of_degenerate_hamiltonian_is_maximally_mixed():
    assert np.allclose(gibbs_state(3.5 * np.eye(3), 0.7).rho, np.eye(3) / 3)


@pytest.mark.parametrize("beta", [0.0, -1.0, math.inf, math.nan])
def test_invalid_beta(qubit_h, beta):
    with pytest.raises(ThermalError):
        gibbs_state(qubit_h, beta)


def test_infinite_beta_has_specific_message(qubit_h):
    with pytest.raises(ThermalError, match="ground-state"):
        gibbs_state(qubit_h, math.inf)


def test_gibbs_large_beta_is_stable():
    c = gibbs_state(np.diag([0.0, 500.0, 1000.0]), 50.0)
    assert np.all(np.isfinite(c.rho)) and c.rho[0, 0] == pytest.approx(1.0)


def test_density_matrix_invariants(qubit_h):
    with pytest.raises(DensityMatrixError, match="trace is 1.2"):
        Configuration(np.diag([0.6, 0.6]), qubit_h)
    with pytest.raises(DensityMatrixError, match="negative"):
        Configuration(np.diag([1.1, -0.1]), qubit_h)
    c = Configuration(np.diag([1 + 5e-13, -5e-13]), qubit_h)
    assert np.linalg.eigvalsh(c.rho)[0] >= 0
    with pytest.raises(ValueError):
        Configuration(np.eye(3) / 3, qubit_h)


def test_configuration_is_immutable(gibbs1):
    with pytest.raises(ValueError):
        gibbs1.rho[0, 0] = 0.5


def test_thermal_configuration_validation(qubit_h):
    with pytest.raises(ThermalError):
        ThermalConfiguration(np.eye(2) / 2, qubit_h, beta=1.0)
    good = gibbs_state(qubit_h, 1.0)
    with pytest.raises(ThermalError):
        ThermalConfiguration(good.rho, qubit_h, beta=1.0, partition_function=2.0)


def test_internal_energy_examples(qubit_h, gibbs1, rng):
    rho = random_density_matrix(3, rng)
    assert internal_energy(Configuration(rho, np.eye(3))) == pytest.approx(1.0)
    assert internal_energy(gibbs1) == pytest.approx(0.268941, abs=1e-6)
    assert internal_energy(Configuration(np.diag([1.0, 0.0]), qubit_h)) == 0.0


def test_entropy_examples(gibbs1):
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(math.log(2))
    assert von_neumann_entropy(gibbs1.rho) == pytest.approx(0.582203, abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_entropy_range_and_unitary_invariance(dim, seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1)))
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= math.log(dim) + 1e-12
    V = haar_random_unitary(dim, seed=seed)
    assert von_neumann_entropy(conjugate_by_unitary(rho, V)) == pytest.approx(s, abs=1e-10)


def test_relative_entropy_examples(gibbs1, gibbs2):
    assert relative_entropy(gibbs1.rho, gibbs1.rho) == pytest.approx(0.0, abs=1e-12)
    assert relative_entropy(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == math.inf
    # independent closed form: sum_k p_k ln(p_k / q_k) for commuting states
    p, q = np.diag(gibbs1.rho).real, np.diag(gibbs2.rho).real
    oracle = float(np.sum(p * np.log(p / q)))
    assert relative_entropy(gibbs1.rho, gibbs2.rho) == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(0.082608, abs=1e-6)


def test_relative_entropy_support_direction():
    # S(pure || full rank) is finite, the reverse is not
    assert math.isfinite(relative_entropy(np.diag([1.0, 0.0]), np.eye(2) / 2))
    assert relative_entropy(np.eye(2) / 2, np.diag([1.0, 0.0])) == math.inf


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_relative_entropy_positive(dim, seed):
    rng = np.random.default_rng(seed)
    a, b = random_density_matrix(dim, rng), random_density_matrix(dim, rng)
    assert relative_entropy(a, b) > 1e-9
    assert abs(relative_entropy(a, a)) <= 1e-9


@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
def test_joint_convexity(rng, p):
    for _ in range(30):
        d = int(rng.integers(2, 5))
        s1, s2, t1, t2 = (random_density_matrix(d, rng) for _ in range(4))
        lhs = relative_entropy(p * s1 + (1 - p) * s2, p * t1 + (1 - p) * t2)
        rhs = p * relative_entropy(s1, t1) + (1 - p) * relative_entropy(s2, t2)
        assert lhs <= rhs + 1e-10


def test_entropy_change_bounds_examples(gibbs1, gibbs2):
    assert entropy_change_bounds(gibbs1.rho, gibbs1.rho) == pytest.approx((0, 0, 0), abs=1e-12)
    lo, ds, hi = entropy_change_bounds(gibbs1.rho, gibbs2.rho)
    assert (lo, ds, hi) == pytest.approx((-0.299477, -0.216869, -0.149738), abs=1e-6)


def test_entropy_change_bounds_property(rng):
    for _ in range(1000):
        d = int(rng.integers(2, 7))
        a, b = random_density_matrix(d, rng), random_density_matrix(d, rng)
        lo, ds, hi = entropy_change_bounds(a, b)
        assert lo <= ds + 1e-10 and ds <= hi + 1e-10


def test_entropy_change_bounds_rank_deficient():
    lo, ds, hi = entropy_change_bounds(np.diag([1.0, 0.0]), np.eye(2) / 2)
    assert math.isfinite(lo) and hi == math.inf


def test_thermalizing_hamiltonian_examples():
    assert np.allclose(thermalizing_hamiltonian(np.eye(3) / 3, 2.0), 0, atol=1e-12)
    H = thermalizing_hamiltonian(np.diag([0.731059, 0.268941]), 1.0)
    assert np.allclose(H, np.diag([0.0, 1.0]), atol=1e-5)
    with pytest.raises(SupportError):
        thermalizing_hamiltonian(np.diag([1.0, 0.0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.floats(0.1, 10), st.integers(0, 2**32 - 1))
def test_thermalizing_roundtrip(dim, beta, seed):
    rho = random_density_matrix(dim, np.random.default_rng(seed))
    H = thermalizing_hamiltonian(rho, beta)
    assert np.max(np.abs(gibbs_state(H, beta).rho - rho)) <= 1e-8
    assert np.linalg.eigvalsh(H)[0] == pytest.approx(0.0, abs=1e-10)


def test_detect_thermal(rng, qubit_h):
    H = random_hermitian(4, rng)
    assert detect_thermal(gibbs_state(H, 1.7)) == pytest.approx(1.7, abs=1e-6)
    V = haar_random_unitary(2, seed=5)
    rho = conjugate_by_unitary(np.diag([0.8, 0.2]), V)
    assert detect_thermal(Configuration(rho, qubit_h)) is None
    assert detect_thermal(Configuration(np.diag([0.2, 0.8]), qubit_h)) is None
    assert detect_thermal(Configuration(np.diag([1.0, 0.0]), qubit_h)) is None


def test_gauge(qubit_h, gibbs1):
    assert apply_gauge(gibbs1, Gauge()).beta == 1.0
    g = apply_gauge(gibbs1, Gauge(0.0, 2.0))
    assert isinstance(g, ThermalConfiguration)
    assert np.allclose(g.hamiltonian, np.diag([0.0, 2.0])) and g.beta == 0.5
    assert np.allclose(g.rho, gibbs1.rho)
    shifted = apply_gauge(gibbs1, Gauge(3.0, 0.5))
    assert shifted.entropy == pytest.approx(gibbs1.entropy)
    assert shifted.energy == pytest.approx(0.5 * (gibbs1.energy + 3.0))
    with pytest.raises(ValueError):
        Gauge(0.0, 0.0)


def test_canonical_gauge(rng):
    H = random_hermitian(3, rng) + 7 * np.eye(3)
    assert np.linalg.eigvalsh(canonical_gauge(H))[0] == pytest.approx(0.0, abs=1e-12)


def test_passivity_examples(rng, qubit_h, gibbs1):
    assert check_passive(Configuration(np.eye(3) / 3, random_hermitian(3, rng))) == (True, pytest.approx(0.0, abs=1e-12))
    for _ in range(10):
        c = gibbs_state(random_hermitian(4, rng), rng.uniform(0.1, 5))
        passive, w = check_passive(c)
        assert passive and w == pytest.approx(0.0, abs=1e-10)
    passive, w = check_passive(Configuration(np.diag([0.268941, 0.731059]), qubit_h))
    assert not passive and w == pytest.approx(0.462118, abs=1e-6)


def test_passive_energy_is_a_lower_bound(rng):
    rho, H = random_density_matrix(3, rng), random_hermitian(3, rng)
    floor = passive_energy(rho, H)
    for V in __import__("dqthermo").haar_random_unitaries(3, 500, seed=2):
        assert np.real(np.trace(V @ rho @ V.conj().T @ H)) >= floor - 1e-10


def test_jaynes_maximum_entropy(rng):
    for _ in range(100):
        d = int(rng.integers(2, 5))
        H = np.diag(np.sort(rng.uniform(0, 3, d)))
        c = gibbs_state(H, rng.uniform(0.2, 3))
        # traceless, energy-neutral Hermitian perturbation
        X = random_hermitian(d, rng)
        X -= np.trace(X) / d * np.eye(d)
        Hc = H - np.trace(H) / d * np.eye(d)
        X -= np.trace(X @ Hc) / np.trace(Hc @ Hc) * Hc
        eps = 0.5 * np.linalg.eigvalsh(c.rho)[0] / max(1e-12, np.abs(np.linalg.eigvalsh(X)).max())
        pert = c.rho + eps * X
        assert np.trace(pert @ H).real == pytest.approx(c.energy, abs=1e-12)
        assert von_neumann_entropy(pert) <= c.entropy + 1e-9
