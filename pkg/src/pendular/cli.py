"""Command-line drivers emitting machine-readable scan data.

Every subcommand is a thin wrapper over one library operation; output goes
to --out (with a JSON run manifest written next to it) or stdout.  Exit
codes: 0 success, 1 numeric failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .chain import (
    ChainSpec,
    PhaseThresholds,
    SectorConvergenceError,
    chain_constants,
    classify_phase,
    ground_state,
    phase_diagram,
)
from .fits import FIT_QUANTITIES, FitError, comparison_table
from .moments import moment_curves, moments, stark_map
from .pair import MAGIC_ANGLE, CouplingGeometry, coupling_surface, heisenberg_constants
from .rotor import DEFAULT_J_MAX, EigensolverError
from .tables import Table, render
from .units import PresetError, load_presets, omega_over_b, reduced_field

NUMERIC_ERRORS = (
    EigensolverError,
    SectorConvergenceError,
    FitError,
    PresetError,
    ArithmeticError,
    ValueError,
)


def parse_grid(text: str) -> np.ndarray:
    """Grid syntax: 'start:stop:step', 'log:start:stop:count', or 'a,b,c'."""
    text = text.strip()
    if text.startswith("log:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"log grid needs log:start:stop:count, got {text!r}")
        start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
        if start <= 0 or stop <= 0 or count < 1:
            raise ValueError(f"log grid needs positive bounds and count, got {text!r}")
        return np.geomspace(start, stop, count)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"linear grid needs start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"linear grid needs step > 0 and stop >= start, got {text!r}")
        return np.round(np.arange(start, stop + step / 2, step), 12)
    values = np.array([float(p) for p in text.split(",") if p.strip() != ""])
    if values.size == 0:
        raise ValueError("empty grid")
    return values


def parse_alpha(text: str) -> float:
    """Tilt angle in degrees, or the keyword 'magic' for 3cos^2 = 1 exactly."""
    if text.strip().lower() == "magic":
        return MAGIC_ANGLE
    return math.radians(float(text))


def parse_alpha_grid(text: str) -> np.ndarray:
    if ":" in text:
        return np.radians(parse_grid(text))
    return np.array([parse_alpha(a) for a in text.split(",") if a.strip()])


def _registry(args):
    path = args.presets or os.environ.get("PENDULAR_PRESETS")
    return load_presets(path)


def _write_output(args, table: Table, metadata: dict | None = None) -> None:
    meta = {"code_version": __version__}
    if metadata:
        meta.update(metadata)
    payload = render(table, args.format, metadata=meta)
    if args.out is None:
        sys.stdout.write(payload)
        return
    out = Path(args.out)
    out.write_bytes(payload.encode("utf-8"))
    manifest = {
        "schema_version": "run_manifest.v1",
        "command": args.command,
        "parameters": {
            k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")
        },
        "code_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": [
            {
                "path": str(out),
                "bytes": len(payload.encode("utf-8")),
                "sha256": hashlib.sha256(payload.encode("utf-8")).hexdigest(),
            }
        ],
    }
    Path(f"{out}.manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def cmd_stark_map(args, parser) -> int:
    if args.x_step <= 0:
        parser.error("--x-step must be positive")
    if args.x_max < 0:
        parser.error("--x-max must be non-negative")
    xs = np.round(np.arange(0.0, args.x_max + args.x_step / 2, args.x_step), 12)
    m_values = tuple(int(m) for m in args.m.split(","))
    table = stark_map(xs, m_values=m_values, n_states=args.n_states, j_max=args.j_max)
    _write_output(args, table)
    return 0


def cmd_moments(args, parser) -> int:
    try:
        xs = parse_grid(args.x_grid)
    except ValueError as exc:
        parser.error(str(exc))
    curves = moment_curves(xs, args.j_max)
    rows = [
        tuple(float(curves[key][i]) for key in ("x", "e0", "e1", "delta_e", "c0", "c1", "cx"))
        for i in range(len(xs))
    ]
    table = Table(
        schema="moments.v1",
        columns=("x", "e0", "e1", "delta_e", "c0", "c1", "cx"),
        rows=rows,
    )
    _write_output(args, table)
    return 0


def _resolve_point(args, parser):
    """(x, omega, units-metadata) from either reduced or laboratory flags."""
    if args.molecule is not None:
        if args.epsilon is None or args.r is None:
            parser.error("--molecule requires --epsilon and --r")
        preset = _registry(args).get(args.molecule)
        x = reduced_field(preset, args.epsilon)
        omega = omega_over_b(preset, args.r)
        units = {
            "molecule": preset.name,
            "mu_debye": preset.mu_debye,
            "b_cm1": preset.b_cm1,
            "epsilon_kv_cm": args.epsilon,
            "r_nm": args.r,
        }
        return x, omega, units
    if args.x is None or args.omega is None:
        parser.error("give either --x and --omega, or --molecule with --epsilon and --r")
    return args.x, args.omega, None


def cmd_couplings(args, parser) -> int:
    x, omega, units = _resolve_point(args, parser)
    alpha = parse_alpha(args.alpha)
    mset = moments(x, args.j_max)
    hc = heisenberg_constants(mset, CouplingGeometry(omega=omega, alpha=alpha))
    jz_over_jy = hc.jz / hc.jy if hc.jy != 0 else math.nan
    gamma_over_jy = hc.gamma / hc.jy if hc.jy != 0 else math.nan
    table = Table(
        schema="couplings.v1",
        columns=(
            "x",
            "omega_over_b",
            "alpha_rad",
            "jx",
            "jy",
            "jz",
            "gamma",
            "shift",
            "jz_over_jy",
            "gamma_over_jy",
        ),
        rows=[(x, omega, alpha, hc.jx, hc.jy, hc.jz, hc.gamma, hc.shift, jz_over_jy, gamma_over_jy)],
    )
    _write_output(args, table, metadata={"units": units} if units else None)
    return 0


def cmd_coupling_grid(args, parser) -> int:
    try:
        xs = parse_grid(args.x_grid)
        alphas = parse_alpha_grid(args.alpha_grid)
    except ValueError as exc:
        parser.error(str(exc))
    table = coupling_surface(xs, alphas, j_max=args.j_max)
    _write_output(args, table)
    return 0


def cmd_fit(args, parser) -> int:
    if args.x_step <= 0:
        parser.error("--x-step must be positive")
    table, fit = comparison_table(args.quantity, x_max=args.x_max, step=args.x_step, j_max=args.j_max)
    if args.quantity == "gap":
        fit_meta = {"coefficients": list(fit.coefficients), "r_squared": fit.r_squared}
    else:
        fit_meta = {
            "params": list(fit.params),
            "r_squared": fit.r_squared,
            "converged": fit.converged,
        }
    if args.format == "csv":
        sys.stderr.write(json.dumps({"fit": fit_meta}, indent=None) + "\n")
    _write_output(args, table, metadata={"fit": fit_meta})
    return 0


def cmd_chain_ed(args, parser) -> int:
    x, omega, units = _resolve_point(args, parser)
    mset = moments(x, args.j_max)
    consts = chain_constants(mset, omega)
    spec = ChainSpec(n=args.n, j=consts.j, jz=consts.jz, gamma=consts.gamma, boundary=args.boundary)
    result = ground_state(spec)
    phase = classify_phase(result, consts)
    table = Table(
        schema="chain_ed.v1",
        columns=(
            "n",
            "boundary",
            "x",
            "omega_over_b",
            "j",
            "jz",
            "gamma",
            "ground_energy",
            "magnetization_per_site",
            "nn_zz_correlation",
            "staggered_zz_correlation",
            "gap",
            "ground_overlap_polarized",
            "phase",
        ),
        rows=[
            (
                args.n,
                args.boundary,
                x,
                omega,
                consts.j,
                consts.jz,
                consts.gamma,
                result.ground_energy,
                result.magnetization_per_site,
                result.nn_zz_correlation,
                result.staggered_zz_correlation,
                result.gap,
                result.ground_overlap_polarized,
                phase,
            )
        ],
    )
    _write_output(args, table, metadata={"units": units} if units else None)
    return 0


def cmd_phase_diagram(args, parser) -> int:
    try:
        xs = parse_grid(args.x_grid)
        omegas = parse_grid(args.omega_grid)
    except ValueError as exc:
        parser.error(str(exc))
    thresholds = PhaseThresholds(magnetization=args.fm_threshold)
    table = phase_diagram(
        xs,
        omegas,
        n=args.n,
        boundary=args.boundary,
        thresholds=thresholds,
        j_max=args.j_max,
        workers=args.workers,
    )
    meta = {
        "n": args.n,
        "boundary": args.boundary,
        "thresholds": {
            "magnetization": thresholds.magnetization,
            "staggered": thresholds.staggered,
            "min_gap": thresholds.min_gap,
        },
    }
    _write_output(args, table, metadata=meta)
    return 0


def cmd_convert(args, parser) -> int:
    if args.epsilon is None and args.r is None:
        parser.error("give --epsilon and/or --r to convert")
    preset = _registry(args).get(args.molecule)
    x = reduced_field(preset, args.epsilon) if args.epsilon is not None else None
    omega = omega_over_b(preset, args.r) if args.r is not None else None
    table = Table(
        schema="convert.v1",
        columns=("molecule", "mu_debye", "b_cm1", "epsilon_kv_cm", "x", "r_nm", "omega_over_b"),
        rows=[(preset.name, preset.mu_debye, preset.b_cm1, args.epsilon, x, args.r, omega)],
    )
    _write_output(args, table)
    return 0


def _add_common(sub, presets: bool = False) -> None:
    sub.add_argument("--out", help="output file path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--j-max", type=int, default=DEFAULT_J_MAX, help="basis truncation")
    if presets:
        sub.add_argument("--presets", help="molecule preset file (or PENDULAR_PRESETS env var)")


def _add_point_flags(sub) -> None:
    sub.add_argument("--x", type=float, help="reduced field")
    sub.add_argument("--omega", type=float, help="dipole-dipole coupling over B")
    sub.add_argument("--molecule", help="derive --x/--omega from a preset instead")
    sub.add_argument("--epsilon", type=float, help="field strength in kV/cm (with --molecule)")
    sub.add_argument("--r", type=float, help="separation in nm (with --molecule)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pendular",
        description="Pendular-state molecules as spin-1/2 chains: scans and fits.",
    )
    parser.add_argument("--version", action="version", version=f"pendular {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("stark-map", help="pendular level energies over a field grid")
    p.add_argument("--x-max", type=float, default=12.0)
    p.add_argument("--x-step", type=float, default=0.1)
    p.add_argument("--m", default="0,1", help="comma-separated m blocks")
    p.add_argument("--n-states", type=int, default=4)
    _add_common(p)
    p.set_defaults(func=cmd_stark_map)

    p = subs.add_parser("moments", help="pseudo-spin energies and dipole moments on a grid")
    p.add_argument("--x-grid", default="0:12:0.1", help="'start:stop:step', 'log:..', or 'a,b,c'")
    _add_common(p)
    p.set_defaults(func=cmd_moments)

    p = subs.add_parser("couplings", help="two-molecule model constants at one point")
    _add_point_flags(p)
    p.add_argument("--alpha", default="0", help="array tilt in degrees, or 'magic'")
    _add_common(p, presets=True)
    p.set_defaults(func=cmd_couplings)

    p = subs.add_parser("coupling-grid", help="coupling constants per unit Omega on an (x, alpha) grid")
    p.add_argument("--x-grid", default="0:12:0.5")
    p.add_argument("--alpha-grid", default="0:90:7.5", help="degrees; grid syntax or comma list")
    _add_common(p)
    p.set_defaults(func=cmd_coupling_grid)

    p = subs.add_parser("fit", help="refit one curve and compare with reference parameters")
    p.add_argument("--quantity", choices=FIT_QUANTITIES, required=True)
    p.add_argument("--x-max", type=float, default=12.0)
    p.add_argument("--x-step", type=float, default=0.01)
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = subs.add_parser("chain-ed", help="exact diagonalization of the molecular chain at one point")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--boundary", choices=("open", "periodic"), default="open")
    _add_point_flags(p)
    _add_common(p, presets=True)
    p.set_defaults(func=cmd_chain_ed)

    p = subs.add_parser("phase-diagram", help="phase labels over an (x, Omega/B) grid")
    p.add_argument("--x-grid", default="1:12:1")
    p.add_argument("--omega-grid", default="log:1e-6:1e-4:5")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--boundary", choices=("open", "periodic"), default="open")
    p.add_argument("--fm-threshold", type=float, default=0.99, help="|magnetization| for the polarized label")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    _add_common(p)
    p.set_defaults(func=cmd_phase_diagram)

    p = subs.add_parser("convert", help="laboratory units to reduced variables")
    p.add_argument("--molecule", required=True)
    p.add_argument("--epsilon", type=float, help="field strength in kV/cm")
    p.add_argument("--r", type=float, help="separation in nm")
    _add_common(p, presets=True)
    p.set_defaults(func=cmd_convert)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except NUMERIC_ERRORS as exc:
        sys.stderr.write(f"pendular: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
