"""Spin-1/2 XXZ chain: exact diagonalization and phase classification.

Hamiltonian (Pauli operators, couplings in units of B):

    H = sum_bonds [ j (sx sx + sy sy) + jz sz sz ] - gamma * sum_i sz_i

Basis states are n-bit integers with bit i = 1 meaning sigma_z = +1 ("up")
on site i.  Total magnetization is conserved, so H is block-diagonal over
popcount sectors; within a sector the gamma term is the constant shift
-gamma*(2k - n), which lets scans diagonalize the gamma-independent part
once.  The xy part acts as a flip-flop of amplitude 2 j on anti-aligned
neighbor pairs.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .moments import MomentSet, moments
from .rotor import DEFAULT_J_MAX
from .tables import Table

MAX_SITES = 16
#: Largest sector dimension diagonalized densely; C(16, 8) exceeds this.
DENSE_SECTOR_LIMIT = 3500


class Phase(str, Enum):
    FERROMAGNETIC = "ferromagnetic"
    LUTTINGER_LIQUID = "luttinger_liquid"
    ANTIFERROMAGNETIC = "antiferromagnetic"


class SectorConvergenceError(RuntimeError):
    """Iterative eigensolver failed inside one magnetization sector."""


class ChainConstants(NamedTuple):
    j: float
    jz: float
    gamma: float


@dataclass(frozen=True)
class ChainSpec:
    """Chain definition: size, boundary, couplings (units of B).

    ``long_range=True`` couples every site pair with the dipolar 1/d^3
    weight (d in lattice spacings, chord distance on a ring); the default is
    nearest-neighbor only.
    """

    n: int
    j: float
    jz: float
    gamma: float
    boundary: str = "open"
    long_range: bool = False

    def __post_init__(self) -> None:
        if not 2 <= self.n <= MAX_SITES:
            raise ValueError(f"site count must be in [2, {MAX_SITES}], got {self.n}")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")

    @property
    def bonds(self) -> list[tuple[int, int]]:
        pairs = [(i, i + 1) for i in range(self.n - 1)]
        if self.boundary == "periodic" and self.n > 2:
            pairs.append((self.n - 1, 0))
        return pairs

    @property
    def weighted_bonds(self) -> list[tuple[int, int, float]]:
        if not self.long_range:
            return [(i, j, 1.0) for i, j in self.bonds]
        pairs = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                d = j - i
                if self.boundary == "periodic":
                    d = min(d, self.n - d)
                pairs.append((i, j, 1.0 / d**3))
        return pairs


@dataclass(frozen=True)
class ChainResult:
    """Ground-state observables from exact diagonalization."""

    ground_energy: float
    magnetization_per_site: float
    nn_zz_correlation: float
    staggered_zz_correlation: float
    gap: float
    ground_overlap_polarized: float
    ground_sector: int
    degenerate_partner_magnetization: float | None = None


@dataclass(frozen=True)
class PhaseThresholds:
    """Explicit classification thresholds (finite-size ED, not exact boundaries)."""

    magnetization: float = 0.99
    staggered: float = 0.5
    min_gap: float = 1e-6


def chain_constants(mset: MomentSet, omega: float) -> ChainConstants:
    """XXZ couplings realized by a field-parallel molecular array."""
    j = omega * mset.cx**2
    jz = -omega * (mset.c0 - mset.c1) ** 2 / 2.0
    gamma = ((mset.e1 - mset.e0) + omega * (mset.c0**2 - mset.c1**2)) / 2.0
    return ChainConstants(j=j, jz=jz, gamma=gamma)


def one_magnon_saturation_gamma(j: float, jz: float) -> float:
    """Field at which a single spin flip above the polarized state costs zero."""
    return 2.0 * (j + jz)


def _sector_states(n: int, k: int) -> NDArray[np.int64]:
    states = [sum(1 << i for i in bits) for bits in combinations(range(n), k)]
    return np.array(sorted(states), dtype=np.int64)


def _sz_columns(states: NDArray[np.int64], n: int) -> NDArray[np.int64]:
    # sigma_z eigenvalues per site: shape (len(states), n)
    bits = (states[:, None] >> np.arange(n)[None, :]) & 1
    return 2 * bits - 1


def _diagonal(spec: ChainSpec, states: NDArray[np.int64]) -> NDArray[np.float64]:
    sz = _sz_columns(states, spec.n)
    diag = np.zeros(len(states))
    for i, jj, w in spec.weighted_bonds:
        diag += w * spec.jz * sz[:, i] * sz[:, jj]
    diag -= spec.gamma * sz.sum(axis=1)
    return diag


def _flip_flop_entries(
    spec: ChainSpec, states: NDArray[np.int64]
) -> tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.float64]]:
    rows, cols, vals = [], [], []
    for i, jj, w in spec.weighted_bonds:
        mask_i = (states >> i) & 1
        mask_j = (states >> jj) & 1
        anti = mask_i != mask_j
        src = states[anti]
        dst = src ^ ((1 << i) | (1 << jj))
        src_idx = np.searchsorted(states, src)
        dst_idx = np.searchsorted(states, dst)
        rows.append(src_idx)
        cols.append(dst_idx)
        vals.append(np.full(len(src), 2.0 * w * spec.j))
    if not rows:
        empty = np.array([], dtype=np.int64)
        return empty, empty, np.array([])
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def _sector_matrix(spec: ChainSpec, states: NDArray[np.int64]) -> csr_matrix:
    dim = len(states)
    rows, cols, vals = _flip_flop_entries(spec, states)
    diag_idx = np.arange(dim)
    rows = np.concatenate([rows, diag_idx])
    cols = np.concatenate([cols, diag_idx])
    vals = np.concatenate([vals, _diagonal(spec, states)])
    return coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()


def build_chain_hamiltonian(spec: ChainSpec) -> csr_matrix:
    """Full 2^n x 2^n sparse Hamiltonian in the bitstring basis."""
    states = np.arange(1 << spec.n, dtype=np.int64)
    return _sector_matrix(spec, states)


class _SectorSolution(NamedTuple):
    k: int
    states: NDArray[np.int64]
    lowest: float
    second: float | None
    vector: NDArray[np.float64]


def _solve_sector(spec: ChainSpec, k: int, method: str) -> _SectorSolution:
    states = _sector_states(spec.n, k)
    dim = len(states)
    h = _sector_matrix(spec, states)
    if dim == 1:
        e = float(h[0, 0])
        return _SectorSolution(k, states, e, None, np.ones(1))
    use_dense = method == "dense" or (method == "auto" and dim <= DENSE_SECTOR_LIMIT)
    if use_dense:
        energies, vecs = np.linalg.eigh(h.toarray())
        return _SectorSolution(k, states, float(energies[0]), float(energies[1]), vecs[:, 0])
    n_eig = min(2, dim - 1)
    try:
        # Deterministic start vector keeps repeated scans byte-identical.
        v0 = np.full(dim, 1.0 / math.sqrt(dim))
        energies, vecs = eigsh(h, k=n_eig, which="SA", v0=v0)
    except ArpackNoConvergence as exc:
        raise SectorConvergenceError(
            f"sector k={k} (dim {dim}) of n={spec.n} chain did not converge"
        ) from exc
    order = np.argsort(energies)
    second = float(energies[order[1]]) if n_eig > 1 else None
    return _SectorSolution(k, states, float(energies[order[0]]), second, vecs[:, order[0]])


def _observables(spec: ChainSpec, sol: _SectorSolution) -> dict[str, float]:
    sz = _sz_columns(sol.states, spec.n)
    weights = sol.vector**2
    bonds = spec.bonds
    nn = 0.0
    for i, jj in bonds:
        nn += float(weights @ (sz[:, i] * sz[:, jj]))
    nn /= len(bonds)
    signs = (-1.0) ** np.arange(spec.n)
    staggered_m = (sz * signs).sum(axis=1) / spec.n
    staggered = float(weights @ staggered_m**2)
    polarized = (1 << spec.n) - 1
    pos = np.searchsorted(sol.states, polarized)
    overlap = 0.0
    if pos < len(sol.states) and sol.states[pos] == polarized:
        overlap = float(sol.vector[pos] ** 2)
    return {
        "nn_zz": nn,
        "staggered": staggered,
        "overlap": overlap,
        "magnetization": (2 * sol.k - spec.n) / spec.n,
    }


def ground_state(spec: ChainSpec, method: str = "auto") -> ChainResult:
    """Global ground state across magnetization sectors, with observables.

    ``method``: "auto" (dense below :data:`DENSE_SECTOR_LIMIT`), "dense", or
    "iterative".  Degenerate sector ground states are resolved toward
    positive magnetization; the partner's magnetization is reported.
    """
    sols = [_solve_sector(spec, k, method) for k in range(spec.n + 1)]
    energy_scale = max(1.0, max(abs(s.lowest) for s in sols))
    e_min = min(s.lowest for s in sols)
    tie_tol = 1e-12 * energy_scale
    tied = [s for s in sols if s.lowest - e_min <= tie_tol]
    winner = max(tied, key=lambda s: s.k)
    partner_mag = None
    if len(tied) > 1:
        partner = min(tied, key=lambda s: s.k)
        partner_mag = (2 * partner.k - spec.n) / spec.n

    spectrum = sorted(
        [s.lowest for s in sols] + [s.second for s in sols if s.second is not None]
    )
    gap = spectrum[1] - spectrum[0] if len(spectrum) > 1 else 0.0

    obs = _observables(spec, winner)
    return ChainResult(
        ground_energy=winner.lowest,
        magnetization_per_site=obs["magnetization"],
        nn_zz_correlation=obs["nn_zz"],
        staggered_zz_correlation=obs["staggered"],
        gap=max(gap, 0.0),
        ground_overlap_polarized=obs["overlap"],
        ground_sector=winner.k,
        degenerate_partner_magnetization=partner_mag,
    )


def polarization_onset_gamma(
    n: int, j: float, jz: float, boundary: str = "open", method: str = "auto"
) -> float:
    """Smallest gamma at which the fully polarized state is the global ground.

    Within each sector gamma only shifts energies by -gamma*(2k - n), so the
    crossing field follows exactly from the gamma-free sector spectra.
    """
    spec = ChainSpec(n=n, j=j, jz=jz, gamma=0.0, boundary=boundary)
    grounds = [_solve_sector(spec, k, method).lowest for k in range(n + 1)]
    e_top = grounds[n]
    return max((e_top - grounds[k]) / (2.0 * (n - k)) for k in range(n))


def classify_phase(
    result: ChainResult,
    constants: ChainConstants,
    thresholds: PhaseThresholds | None = None,
) -> Phase:
    """Deterministic label from ED observables and explicit thresholds."""
    t = thresholds or PhaseThresholds()
    if abs(result.magnetization_per_site) >= t.magnetization:
        return Phase.FERROMAGNETIC
    if result.staggered_zz_correlation >= t.staggered and result.gap >= t.min_gap:
        return Phase.ANTIFERROMAGNETIC
    return Phase.LUTTINGER_LIQUID


def _phase_point(args: tuple) -> tuple:
    (x, omega, n, boundary, thresholds, j_max) = args
    mset = moments(x, j_max)
    consts = chain_constants(mset, omega)
    spec = ChainSpec(n=n, j=consts.j, jz=consts.jz, gamma=consts.gamma, boundary=boundary)
    result = ground_state(spec)
    phase = classify_phase(result, consts, thresholds)
    jz_over_j = consts.jz / consts.j if consts.j != 0 else math.nan
    gamma_over_j = consts.gamma / consts.j if consts.j != 0 else math.nan
    return (x, omega, jz_over_j, gamma_over_j, phase)


def phase_diagram(
    x_grid,
    omega_grid,
    n: int = 10,
    boundary: str = "open",
    thresholds: PhaseThresholds | None = None,
    j_max: int = DEFAULT_J_MAX,
    workers: int = 1,
) -> Table:
    """Phase labels over an (x, Omega/B) grid; rows ordered by (x, omega)."""
    xs = np.asarray(x_grid, dtype=float)
    omegas = np.asarray(omega_grid, dtype=float)
    if xs.size == 0 or omegas.size == 0:
        raise ValueError("phase diagram grids must not be empty")
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(omegas) <= 0):
        raise ValueError("phase diagram grids must be strictly ascending")
    points = [
        (float(x), float(w), n, boundary, thresholds, j_max) for x in xs for w in omegas
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_phase_point, points, chunksize=max(1, len(points) // (4 * workers))))
    else:
        rows = [_phase_point(p) for p in points]
    return Table(
        schema="phase_diagram.v1",
        columns=("x", "omega_over_b", "jz_over_j", "gamma_over_j", "phase"),
        rows=rows,
    )
