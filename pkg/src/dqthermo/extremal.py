"""Minimum and maximum heat of a single DUT+DTT process between Gibbs configurations.

The heat tr[(rho_f - V rho_i V^dag) H_f] depends on V only through
tr[H_f V rho_i V^dag], which is extremised by lining up the eigenvectors of
rho_i with those of H_f: largest population on the lowest energy gives the
maximum heat, largest population on the highest energy gives the minimum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .configuration import ThermalConfiguration, gibbs_state
from .linalg import check_hermitian, eig_hermitian


@dataclass(frozen=True, eq=False)
class ExtremalHeatResult:
    q_min: float
    q_max: float
    v_min: np.ndarray
    v_max: np.ndarray
    # pairing[k] = index of the H_f eigenvector (energies descending) that
    # receives the k-th eigenvector of rho_i (populations descending)
    pairing_min: tuple[int, ...]
    pairing_max: tuple[int, ...]


def dut_dtt_heat(rho_i, rho_f, h_f, v) -> float:
    """Heat of the DTT after the DUT ``v``: tr[(rho_f - V rho_i V^dag) H_f]."""
    v = np.asarray(v)
    return float(np.real(np.trace((rho_f - v @ rho_i @ v.conj().T) @ h_f)))


def _pairing_unitary(rho_vecs: np.ndarray, h_vecs: np.ndarray, pairing) -> np.ndarray:
    return sum(np.outer(h_vecs[:, j], rho_vecs[:, k].conj()) for k, j in enumerate(pairing))


def extremal_heat(c_i: ThermalConfiguration, h_f, beta_f: float) -> ExtremalHeatResult:
    h_f = check_hermitian(h_f)
    if h_f.shape != c_i.rho.shape:
        raise ValueError(f"dimension mismatch: initial {c_i.rho.shape} vs final Hamiltonian {h_f.shape}")
    rho_f = gibbs_state(h_f, beta_f).rho
    p, rho_vecs = eig_hermitian(c_i.rho)  # populations descending
    e, h_vecs = eig_hermitian(h_f)  # energies descending
    u_f = float(np.real(np.trace(rho_f @ h_f)))
    d = len(p)
    pairing_max = tuple(range(d - 1, -1, -1))  # biggest population -> lowest energy
    pairing_min = tuple(range(d))  # biggest population -> highest energy
    q_max = u_f - float(np.dot(p, e[list(pairing_max)]))
    q_min = u_f - float(np.dot(p, e[list(pairing_min)]))
    return ExtremalHeatResult(
        q_min=q_min,
        q_max=q_max,
        v_min=_pairing_unitary(rho_vecs, h_vecs, pairing_min),
        v_max=_pairing_unitary(rho_vecs, h_vecs, pairing_max),
        pairing_min=pairing_min,
        pairing_max=pairing_max,
    )


class OracleResult(NamedTuple):
    q_min: float
    q_max: float


def permutation_oracle(c_i: ThermalConfiguration, h_f, beta_f: float, dim_cap: int = 8) -> OracleResult:
    """Brute force over all d! eigenvector permutation unitaries, evaluating the heat matrix-wise."""
    h_f = check_hermitian(h_f)
    d = c_i.dim
    if d > dim_cap:
        raise ValueError(f"dimension {d} exceeds the brute-force cap {dim_cap} ({math.factorial(d)} permutations)")
    rho_f = gibbs_state(h_f, beta_f).rho
    _, rho_vecs = np.linalg.eigh(c_i.rho)
    _, h_vecs = np.linalg.eigh(h_f)
    heats = [
        dut_dtt_heat(c_i.rho, rho_f, h_f, h_vecs[:, list(perm)] @ rho_vecs.conj().T)
        for perm in itertools.permutations(range(d))
    ]
    return OracleResult(min(heats), max(heats))


def sampled_heats(c_i: ThermalConfiguration, h_f, beta_f: float, unitaries: np.ndarray) -> np.ndarray:
    """Heat for each unitary in a stack of shape (count, d, d)."""
    rho_f = gibbs_state(h_f, beta_f).rho
    u_f = float(np.real(np.trace(rho_f @ h_f)))
    rotated = unitaries @ c_i.rho @ np.conj(np.swapaxes(unitaries, 1, 2))
    return u_f - np.real(np.einsum("nij,ji->n", rotated, h_f))
