"""Two coupled molecules: pair Hamiltonian and spin-model constants.

Basis order throughout is the product pseudo-spin set
{|dd>, |du>, |ud>, |uu>} (d = down, u = up, first slot = molecule 1).

Pauli convention: the 2x2 Pauli matrices act on the ordered single-molecule
basis (|down>, |up>), i.e. sigma_z|down> = +|down>.  This is the one
orientation under which the coupling-constant formulas below reproduce the
pair Hamiltonian identically; flipping it would negate gamma.

The dipole-dipole operator between two parallel dipoles, separated along a
direction at angle alpha from the field, decomposes over single-molecule
angular operators as

    V/Omega = (1 - 3 cos^2 a) cos cos
            + (1 - 3 sin^2 a) (sin cos phi)(sin cos phi)
            + (sin sin phi)(sin sin phi)
            - 3 sin a cos a [ (sin cos phi) cos + cos (sin cos phi) ],

which :func:`vdd_from_first_principles` evaluates term by term.  Note the
last line: at tilted geometries (alpha not 0 or pi/2) it contributes
single-molecule transition terms of size 3 sin(a)cos(a) * cx * c0/c1 * Omega
that fall outside the two-qubit XYZ form; the XYZ mapping is exact only for
arrays parallel or perpendicular to the field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .moments import DOWN_M, UP_M, MomentSet, moments, pseudo_spin_states
from .rotor import DEFAULT_J_MAX, BasisSpec, operator_matrix
from .tables import Table

#: Array tilt at which the zz coupling vanishes exactly (3 cos^2 = 1).
MAGIC_ANGLE = math.acos(1.0 / math.sqrt(3.0))

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_ID = np.eye(2)


@dataclass(frozen=True)
class CouplingGeometry:
    """Dipole-dipole scale Omega (units of B) and array tilt alpha (rad)."""

    omega: float
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.omega < 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        if not 0.0 <= self.alpha <= math.pi / 2:
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha}")

    @property
    def p_alpha(self) -> float:
        return 1.0 - 3.0 * math.cos(self.alpha) ** 2

    @property
    def q_alpha(self) -> float:
        return -3.0 * math.sin(self.alpha) ** 2


@dataclass(frozen=True)
class HeisenbergConstants:
    """Two-qubit model constants, all in units of B."""

    jx: float
    jy: float
    jz: float
    gamma: float
    shift: float


def pair_hamiltonian(mset: MomentSet, geom: CouplingGeometry) -> NDArray[np.float64]:
    """Total 4x4 pair Hamiltonian: single-molecule energies plus coupling."""
    e0, e1 = mset.e0, mset.e1
    p, q, w = geom.p_alpha, geom.q_alpha, geom.omega
    c0, c1, cx = mset.c0, mset.c1, mset.cx
    h = np.diag(
        [
            2 * e0 + w * p * c0 * c0,
            e0 + e1 + w * p * c0 * c1,
            e1 + e0 + w * p * c1 * c0,
            2 * e1 + w * p * c1 * c1,
        ]
    )
    outer = w * q * cx * cx
    inner = -w * p * cx * cx
    h[0, 3] = h[3, 0] = outer
    h[1, 2] = h[2, 1] = inner
    return h


def pseudo_spin_operators(
    x: float, j_max: int = DEFAULT_J_MAX
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.complex128]]:
    """2x2 matrices of cos, sin*cos(phi), sin*sin(phi) in the (down, up) basis.

    Off-block elements vanish by exact m selection rules (cos keeps m;
    the sin operators change it by one), not by approximation.
    """
    down, up, _, _ = pseudo_spin_states(x, j_max)
    spec_d = BasisSpec(m=DOWN_M, j_max=j_max)
    spec_u = BasisSpec(m=UP_M, j_max=j_max)
    c0 = down @ operator_matrix("cos_theta", spec_d, spec_d) @ down
    c1 = up @ operator_matrix("cos_theta", spec_u, spec_u) @ up
    cx = down @ operator_matrix("sin_theta_cos_phi", spec_d, spec_u) @ up
    # <down|ss|up> = i * K_du; Hermiticity gives <up|ss|down> = -i * K_du.
    k_du = down @ operator_matrix("sin_theta_sin_phi", spec_d, spec_u) @ up
    m_cos = np.array([[c0, 0.0], [0.0, c1]])
    m_sc = np.array([[0.0, cx], [cx, 0.0]])
    m_ss = np.array([[0.0, 1.0j * k_du], [-1.0j * k_du, 0.0]])
    return m_cos, m_sc, m_ss


def vdd_from_first_principles(
    x: float, geom: CouplingGeometry, j_max: int = DEFAULT_J_MAX
) -> NDArray[np.float64]:
    """Dipole-dipole coupling assembled directly from angular operators.

    Evaluates every term of the interaction in the product pseudo-spin basis
    without assuming any target matrix shape; serves as the independent
    check on :func:`pair_hamiltonian`.
    """
    m_cos, m_sc, m_ss = pseudo_spin_operators(x, j_max)
    sa, ca = math.sin(geom.alpha), math.cos(geom.alpha)
    # Projection of a unit dipole on the intermolecular axis.
    m_axis = sa * m_sc + ca * m_cos
    v = (
        np.kron(m_cos, m_cos)
        + np.kron(m_sc, m_sc)
        + np.kron(m_ss, m_ss)
        - 3.0 * np.kron(m_axis, m_axis)
    )
    residue = np.abs(v.imag).max()
    scale = max(1.0, np.abs(v.real).max())
    if residue > 1e-14 * scale:
        raise ArithmeticError(f"imaginary residue {residue} in dipole-dipole matrix")
    return geom.omega * v.real


def heisenberg_constants(mset: MomentSet, geom: CouplingGeometry) -> HeisenbergConstants:
    """Model constants reproducing the pair Hamiltonian (with identity shift)."""
    w, alpha = geom.omega, geom.alpha
    cos2 = 3.0 * math.cos(alpha) ** 2
    c0, c1, cx = mset.c0, mset.c1, mset.cx
    jx = w * (cos2 - 2.0) * cx * cx
    jy = w * cx * cx
    jz = w * (1.0 - cos2) * (c0 - c1) ** 2 / 4.0
    gamma = (2.0 * (mset.e1 - mset.e0) + w * (cos2 - 1.0) * (c0 * c0 - c1 * c1)) / 4.0
    shift = mset.e0 + mset.e1 + w * geom.p_alpha * (c0 + c1) ** 2 / 4.0
    return HeisenbergConstants(jx=jx, jy=jy, jz=jz, gamma=gamma, shift=shift)


def xyz_matrix(constants: HeisenbergConstants) -> NDArray[np.float64]:
    """4x4 matrix of the two-qubit model in the product (down, up) basis."""
    h = (
        constants.jx * np.kron(_SX, _SX)
        + constants.jy * np.kron(_SY, _SY).real
        + constants.jz * np.kron(_SZ, _SZ)
        - constants.gamma * (np.kron(_SZ, _ID) + np.kron(_ID, _SZ))
        + constants.shift * np.eye(4)
    )
    return h


def coupling_surface(x_grid, alpha_grid, j_max: int = DEFAULT_J_MAX) -> Table:
    """Coupling constants per unit Omega over an (x, alpha) grid.

    Rows (x, alpha, jx_over_omega, jy_over_omega, jz_over_omega,
    gamma2_over_omega), where gamma2 is the part of gamma proportional to
    Omega.
    """
    rows = []
    for x in np.asarray(x_grid, dtype=float):
        mset = moments(float(x), j_max)
        for alpha in np.asarray(alpha_grid, dtype=float):
            hc = heisenberg_constants(mset, CouplingGeometry(omega=1.0, alpha=float(alpha)))
            gamma2 = (3.0 * math.cos(alpha) ** 2 - 1.0) * (mset.c0**2 - mset.c1**2) / 4.0
            rows.append((float(x), float(alpha), hc.jx, hc.jy, hc.jz, gamma2))
    return Table(
        schema="coupling_surface.v1",
        columns=(
            "x",
            "alpha",
            "jx_over_omega",
            "jy_over_omega",
            "jz_over_omega",
            "gamma2_over_omega",
        ),
        rows=rows,
    )
