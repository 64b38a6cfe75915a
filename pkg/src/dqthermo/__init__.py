"""Discrete quantum thermodynamics: configurations, DUT/DTT trajectories, Clausius bookkeeping."""

__version__ = "0.1.0"

from .carnot import CycleError, CycleReport, CycleSpec, cycle_efficiency, efficiency_sweep, refine_cycle, run_cycle
from .configuration import (
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
from .continuous import SampledPath, continuous_heat, gamma_step, gamma_trajectory, match_continuous, omega_check
from .extremal import extremal_heat, permutation_oracle, sampled_heats
from .linalg import HermiticityError, SupportError, UnitarityError, haar_random_unitary, haar_random_unitaries
from .primitives import DTT, DUQ, DUT, EnergyDelta, apply_step, compose_duts, invert_dut
from .refinement import (
    convergence_table,
    insert_midpoint,
    lambda_gap_bound,
    refine_all,
    refine_segment,
    saturate,
)
from .trajectory import Trajectory, clausius_check, concatenate, connect_configurations, lambda_functional, run_trajectory, summarize

__all__ = [name for name in dir() if not name.startswith("_")]
