"""Field-dependent ingredients of the two-level pendular encoding.

The pseudo-spin pair is |down> = lowest pendular state of the m = 1 block
and |up> = second pendular state of the m = 0 block (the two levels that
emerge from the field-free J = 1 multiplet).  For each reduced field x this
module extracts their energies e0, e1, the orientation cosines
c0 = <down|cos(theta)|down>, c1 = <up|cos(theta)|up>, and the transition
moment cx = <down|sin(theta)cos(phi)|up>, plus tabulated scans of energies
and basis coefficients.

Sign handling: eigenvector phases are arbitrary, and the raw rule used by
:mod:`pendular.rotor` (largest coefficient positive) would flip the up state
wherever its leading component changes identity (near x ~ 4.5).  Quantities
built from two different states, cx in particular, must instead be smooth in
x, so this module re-orients each state to make its J = 1 basis component
positive.  That component stays well away from zero for x <= 12, which makes
the choice stable; it leaves c0, c1 and every energy untouched and makes
cx(x) a positive, continuous curve for x > 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .rotor import DEFAULT_J_MAX, BasisSpec, operator_matrix, solve_pendular
from .tables import Table

#: m blocks hosting the two pseudo-spin states.
DOWN_M = 1
UP_M = 0


@dataclass(frozen=True)
class MomentSet:
    """Energies and dipole matrix elements of the pseudo-spin pair at one x.

    Energies are in units of B; c0, c1, cx are dimensionless and bounded by
    1 in magnitude.
    """

    x: float
    e0: float
    e1: float
    c0: float
    c1: float
    cx: float

    @property
    def delta_e(self) -> float:
        return self.e1 - self.e0


def _oriented_state(solution, j_tilde: int) -> NDArray[np.float64]:
    """State vector re-signed so its J = 1 component is positive."""
    vec = solution.state(j_tilde)
    anchor = vec[solution.spec.index(1)]
    if anchor < 0:
        vec = -vec
    return vec


def pseudo_spin_states(
    x: float, j_max: int = DEFAULT_J_MAX
) -> tuple[NDArray[np.float64], NDArray[np.float64], float, float]:
    """Oriented coefficient vectors and energies (down, up, e0, e1)."""
    down_sol = solve_pendular(x, BasisSpec(m=DOWN_M, j_max=j_max))
    up_sol = solve_pendular(x, BasisSpec(m=UP_M, j_max=j_max))
    down = _oriented_state(down_sol, j_tilde=1)
    up = _oriented_state(up_sol, j_tilde=1)
    return down, up, down_sol.energy(1), up_sol.energy(1)


def moments(x: float, j_max: int = DEFAULT_J_MAX) -> MomentSet:
    """Pseudo-spin energies and dipole moments at reduced field x."""
    if x < 0:
        raise ValueError(f"reduced field must be non-negative, got {x}")
    down, up, e0, e1 = pseudo_spin_states(x, j_max)
    spec_down = BasisSpec(m=DOWN_M, j_max=j_max)
    spec_up = BasisSpec(m=UP_M, j_max=j_max)
    c0 = float(down @ operator_matrix("cos_theta", spec_down, spec_down) @ down)
    c1 = float(up @ operator_matrix("cos_theta", spec_up, spec_up) @ up)
    cx = float(down @ operator_matrix("sin_theta_cos_phi", spec_down, spec_up) @ up)
    return MomentSet(x=float(x), e0=e0, e1=e1, c0=c0, c1=c1, cx=cx)


def moment_curves(
    x_grid: NDArray[np.float64] | list[float], j_max: int = DEFAULT_J_MAX
) -> dict[str, NDArray[np.float64]]:
    """Vectorized scan of all five moment fields over an x grid."""
    xs = _validated_grid(x_grid)
    sets = [moments(float(x), j_max) for x in xs]
    return {
        "x": xs,
        "e0": np.array([m.e0 for m in sets]),
        "e1": np.array([m.e1 for m in sets]),
        "delta_e": np.array([m.delta_e for m in sets]),
        "c0": np.array([m.c0 for m in sets]),
        "c1": np.array([m.c1 for m in sets]),
        "cx": np.array([m.cx for m in sets]),
    }


def _validated_grid(x_grid) -> NDArray[np.float64]:
    xs = np.asarray(x_grid, dtype=np.float64)
    if xs.size == 0:
        raise ValueError("x grid must not be empty")
    if np.any(xs < 0):
        raise ValueError("x grid must be non-negative")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("x grid must be strictly ascending")
    return xs


def stark_map(
    x_grid,
    m_values: tuple[int, ...] = (0, 1),
    n_states: int = 4,
    j_max: int = DEFAULT_J_MAX,
) -> Table:
    """Pendular level energies: rows (x, m, j_tilde, energy_over_b).

    Lowest ``n_states`` adiabatic levels per m block, ordered by
    (x, m, j_tilde).
    """
    xs = _validated_grid(x_grid)
    if n_states < 1:
        raise ValueError("n_states must be positive")
    rows = []
    for x in xs:
        for m in m_values:
            sol = solve_pendular(float(x), BasisSpec(m=m, j_max=j_max))
            for k in range(min(n_states, sol.spec.dim)):
                rows.append((float(x), m, sol.j_tilde(k), float(sol.energies[k])))
    return Table(
        schema="stark_map.v1",
        columns=("x", "m", "j_tilde", "energy_over_b"),
        rows=rows,
    )


def coefficient_map(x_grid, state: str = "down", j_max: int = DEFAULT_J_MAX) -> Table:
    """Spherical-harmonic content of one pseudo-spin state over an x grid.

    Rows (x, j, coefficient); signs follow the continuous orientation
    described in the module docstring, so each coefficient is a smooth
    function of x.
    """
    if state not in ("down", "up"):
        raise ValueError(f"state must be 'down' or 'up', got {state!r}")
    xs = _validated_grid(x_grid)
    m = DOWN_M if state == "down" else UP_M
    rows = []
    for x in xs:
        down, up, _, _ = pseudo_spin_states(float(x), j_max)
        vec = down if state == "down" else up
        for j, coeff in zip(range(abs(m), j_max + 1), vec):
            rows.append((float(x), j, float(coeff)))
    return Table(schema="coefficient_map.v1", columns=("x", "j", "coefficient"), rows=rows)


def interpolated_root(xs: NDArray[np.float64], ys: NDArray[np.float64]) -> float:
    """First sign change of sampled data, refined on a cubic spline."""
    sign = np.sign(ys)
    exact = np.where(sign == 0)[0]
    flips = np.where(sign[1:] * sign[:-1] < 0)[0]
    if exact.size and (flips.size == 0 or exact[0] <= flips[0]):
        return float(xs[exact[0]])
    if flips.size == 0:
        raise ValueError("no sign change in sampled data")
    i = int(flips[0])
    spline = CubicSpline(xs, ys)
    return float(brentq(spline, xs[i], xs[i + 1]))


def c1_zero_crossing(
    j_max: int = DEFAULT_J_MAX,
    x_min: float = 0.01,
    x_max: float = 12.0,
    step: float = 0.01,
) -> float:
    """Location of the interior zero of c1(x) on [x_min, x_max]."""
    xs = np.arange(x_min, x_max + step / 2, step)
    ys = np.array([moments(float(x), j_max).c1 for x in xs])
    return interpolated_root(xs, ys)


def up_leading_swap(
    j_max: int = DEFAULT_J_MAX,
    x_min: float = 0.01,
    x_max: float = 12.0,
    step: float = 0.01,
) -> float:
    """Field at which |Y_0^0| overtakes |Y_1^0| in the up state."""
    xs = np.arange(x_min, x_max + step / 2, step)
    diffs = []
    for x in xs:
        _, up, _, _ = pseudo_spin_states(float(x), j_max)
        diffs.append(abs(up[0]) - abs(up[1]))
    return interpolated_root(xs, np.array(diffs))
