"""Laboratory units to reduced variables, plus the molecule preset registry.

The two conversion constants are derived here, once, from unit definitions
(1 D = 1e-21/c C m; field in kV/cm = 1e5 V/m; rotational constants quoted
as wavenumbers, i.e. energies of h*c*100*B joules per cm^-1; the
dipole-dipole energy is mu^2/(4 pi eps0 r^3) with r in nm):

    x      = STARK_RATIO  * mu[D] * eps[kV/cm] / B[cm^-1]
    Omega  = DIPOLE_COUPLING_CM1 * mu[D]^2 / r[nm]^3      (in cm^-1)

Numerically STARK_RATIO ~ 1.6792e-2 and DIPOLE_COUPLING_CM1 ~ 5.0341; both
are pinned by regression tests against an independent re-derivation.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from scipy import constants as _const

_DEBYE_C_M = 1e-21 / _const.c
_J_PER_CM1 = _const.h * _const.c * 100.0

#: Reduced field per (debye * kV/cm) per cm^-1 of rotational constant.
STARK_RATIO = _DEBYE_C_M * 1e5 / _J_PER_CM1

#: Dipole-dipole scale in cm^-1 for mu = 1 D at r = 1 nm.
DIPOLE_COUPLING_CM1 = _DEBYE_C_M**2 / (4 * math.pi * _const.epsilon_0 * 1e-27) / _J_PER_CM1


class PresetError(ValueError):
    """Malformed, duplicated, or missing molecule preset data."""


@dataclass(frozen=True)
class MoleculePreset:
    """Permanent dipole moment (debye) and rotational constant (cm^-1)."""

    name: str
    mu_debye: float
    b_cm1: float

    def __post_init__(self) -> None:
        if self.mu_debye <= 0:
            raise PresetError(f"{self.name}: dipole moment must be positive, got {self.mu_debye}")
        if self.b_cm1 <= 0:
            raise PresetError(f"{self.name}: rotational constant must be positive, got {self.b_cm1}")


def reduced_field(preset: MoleculePreset, epsilon_kv_cm: float) -> float:
    """x = mu * eps / B for a lab field strength in kV/cm."""
    return STARK_RATIO * preset.mu_debye * epsilon_kv_cm / preset.b_cm1


def epsilon_for_x(preset: MoleculePreset, x: float) -> float:
    """Inverse of :func:`reduced_field`: field in kV/cm producing reduced field x."""
    return x * preset.b_cm1 / (STARK_RATIO * preset.mu_debye)


def omega_cm1(preset: MoleculePreset, r_nm: float) -> float:
    """Dipole-dipole scale mu^2/r^3 in cm^-1 at separation r (nm)."""
    if r_nm <= 0:
        raise ValueError(f"separation must be positive, got {r_nm}")
    return DIPOLE_COUPLING_CM1 * preset.mu_debye**2 / r_nm**3


def omega_over_b(preset: MoleculePreset, r_nm: float) -> float:
    """Reduced dipole-dipole coupling Omega/B at separation r (nm)."""
    return omega_cm1(preset, r_nm) / preset.b_cm1


@dataclass(frozen=True)
class LabGeometry:
    """Laboratory arrangement: field strength (kV/cm), spacing (nm), tilt (rad)."""

    epsilon: float
    r: float
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError(f"field strength must be non-negative, got {self.epsilon}")
        if self.r <= 0:
            raise ValueError(f"separation must be positive, got {self.r}")


def to_reduced(preset: MoleculePreset, lab: LabGeometry) -> tuple[float, float, float]:
    """(x, Omega/B, alpha) for a molecule in a laboratory arrangement."""
    return reduced_field(preset, lab.epsilon), omega_over_b(preset, lab.r), lab.alpha


class PresetRegistry:
    """Immutable name -> preset lookup with deterministic listing."""

    def __init__(self, presets: dict[str, MoleculePreset]):
        self._presets = dict(presets)

    def get(self, name: str) -> MoleculePreset:
        try:
            return self._presets[name]
        except KeyError:
            available = ", ".join(self.names())
            raise PresetError(f"unknown molecule {name!r}; available: {available}") from None

    def names(self) -> list[str]:
        return sorted(self._presets)

    def __len__(self) -> int:
        return len(self._presets)

    def __iter__(self):
        return (self._presets[k] for k in self.names())


def _default_presets_text() -> tuple[str, str]:
    ref = resources.files("pendular") / "data" / "presets.ini"
    return ref.read_text(encoding="utf-8"), str(ref)


def load_presets(path: str | Path | None = None) -> PresetRegistry:
    """Load molecule presets from an INI file (one section per molecule).

    Each section needs ``mu_debye`` and ``b_cm1``.  Duplicate names and
    malformed entries raise :class:`PresetError` with file/line context.
    """
    if path is None:
        text, source = _default_presets_text()
    else:
        source = str(path)
        text = Path(path).read_text(encoding="utf-8")
    parser = configparser.ConfigParser(strict=True)
    try:
        parser.read_string(text, source=source)
    except configparser.DuplicateSectionError as exc:
        raise PresetError(f"{source}: duplicate molecule {exc.section!r} (line {exc.lineno})") from exc
    except configparser.Error as exc:
        raise PresetError(f"{source}: {exc}") from exc
    presets: dict[str, MoleculePreset] = {}
    for name in parser.sections():
        section = parser[name]
        values = {}
        for key in ("mu_debye", "b_cm1"):
            if key not in section:
                raise PresetError(f"{source}: molecule {name!r} is missing field {key!r}")
            try:
                values[key] = float(section[key])
            except ValueError as exc:
                raise PresetError(
                    f"{source}: molecule {name!r} field {key!r} is not a number: {section[key]!r}"
                ) from exc
        presets[name] = MoleculePreset(name=name, **values)
    return PresetRegistry(presets)
