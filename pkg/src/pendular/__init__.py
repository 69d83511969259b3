"""Polar molecules in pendular states as tunable spin-1/2 chains.

Single-molecule Stark eigenstates encode a pseudo-spin; dipole-dipole
coupling between molecules realizes Heisenberg XYZ/XXZ/XY models whose
constants, fits, and ground-state phase diagrams this package computes.
"""

__version__ = "0.1.0"

from .chain import (
    ChainConstants,
    ChainResult,
    ChainSpec,
    Phase,
    PhaseThresholds,
    build_chain_hamiltonian,
    chain_constants,
    classify_phase,
    ground_state,
    phase_diagram,
)
from .fits import PolyFit, SigmoidFit, fit_gap, fit_moment
from .moments import MomentSet, coefficient_map, moments, stark_map
from .pair import (
    MAGIC_ANGLE,
    CouplingGeometry,
    HeisenbergConstants,
    heisenberg_constants,
    pair_hamiltonian,
    vdd_from_first_principles,
    xyz_matrix,
)
from .rotor import BasisSpec, PendularSolution, build_stark_hamiltonian, operator_matrix, solve_pendular
from .units import LabGeometry, MoleculePreset, load_presets, omega_over_b, reduced_field, to_reduced

__all__ = [
    "BasisSpec",
    "ChainConstants",
    "ChainResult",
    "ChainSpec",
    "CouplingGeometry",
    "HeisenbergConstants",
    "LabGeometry",
    "MAGIC_ANGLE",
    "MomentSet",
    "MoleculePreset",
    "PendularSolution",
    "Phase",
    "PhaseThresholds",
    "PolyFit",
    "SigmoidFit",
    "build_chain_hamiltonian",
    "build_stark_hamiltonian",
    "chain_constants",
    "classify_phase",
    "coefficient_map",
    "fit_gap",
    "fit_moment",
    "ground_state",
    "heisenberg_constants",
    "load_presets",
    "moments",
    "omega_over_b",
    "operator_matrix",
    "pair_hamiltonian",
    "phase_diagram",
    "reduced_field",
    "solve_pendular",
    "stark_map",
    "to_reduced",
    "vdd_from_first_principles",
    "xyz_matrix",
]
