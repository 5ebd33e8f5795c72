"""Upper bounds on g^2/4pi from a non-observed resonance shift."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .axion import Geometry, Material, integral_i
from .constants import CODATA, MEV4_IN_EV4, PhysConstants

__all__ = [
    "Regime",
    "ConstraintCurve",
    "ConstraintError",
    "material_factor",
    "bound_at_mass",
    "mass_grid",
    "constraint_curve",
    "constraint_curves",
    "overlay_export",
    "MASS_RANGE_EV",
]

MASS_RANGE_EV = (1e-12, 100.0)
MASS_UNITS = {"eV": 1.0, "meV": 1e-3, "µeV": 1e-6, "μeV": 1e-6, "ueV": 1e-6}


class Regime(enum.Enum):
    PROTON = "proton"  # g_ap^2 >> g_an^2
    NEUTRON = "neutron"  # g_an^2 >> g_ap^2
    EQUAL = "equal"  # g_an^2 = g_ap^2

    @classmethod
    def parse(cls, value: str | Regime) -> Regime:
        if isinstance(value, Regime):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown regime {value!r}; choose proton, neutron or equal") from None


class ConstraintError(RuntimeError):
    def __init__(self, m_a: float, cause: Exception):
        super().__init__(f"bound evaluation failed at m_a={m_a!r} eV: {cause}")
        self.m_a = m_a


def material_factor(regime: Regime, mat: Material) -> float:
    """rho times the nucleon-content factor the regime keeps, in MeV^4."""
    if regime is Regime.PROTON:
        content = mat.Z_over_mu
    elif regime is Regime.NEUTRON:
        content = mat.N_over_mu
    else:
        content = mat.Z_over_mu + mat.N_over_mu
    return mat.rho_natural * content


def bound_at_mass(
    regime: Regime,
    m_a: float,
    threshold_natural: float,
    materials: dict[str, Material],
    geometry: Geometry,
    const: PhysConstants = CODATA,
    *,
    integral: float | None = None,
) -> float:
    """Smallest excluded g^2/4pi at axion mass ``m_a`` (eV).

    g^2/4pi = m m_H sqrt(threshold / |pi (F_Al - F_Au) F_s I|), with F the
    regime's density-weighted nucleon content; the differential gradient at
    this coupling equals ``threshold_natural`` (eV^3).
    """
    regime = Regime.parse(regime)
    lo, hi = MASS_RANGE_EV
    if not lo <= m_a <= hi:
        raise ValueError(f"m_a={m_a!r} eV outside the supported range [{lo:g}, {hi:g}] eV")
    if not threshold_natural > 0:
        raise ValueError(f"threshold must be positive, got {threshold_natural!r}")
    f_al = material_factor(regime, materials["Al"])
    f_au = material_factor(regime, materials["Au"])
    f_s = material_factor(regime, materials["SiO2"])
    I = integral_i(geometry, m_a) if integral is None else integral
    denom = abs(math.pi * (f_al - f_au) * f_s * I) * MEV4_IN_EV4**2
    if denom == 0:
        return math.inf
    return const.m * const.m_H * math.sqrt(threshold_natural / denom)


def mass_grid(mass_lo: float, mass_hi: float, points_per_decade: int) -> np.ndarray:
    if not points_per_decade >= 1:
        raise ValueError(f"points_per_decade must be a positive integer, got {points_per_decade!r}")
    lo, hi = MASS_RANGE_EV
    if not (lo <= mass_lo < mass_hi <= hi):
        raise ValueError(f"need {lo:g} <= mass_lo < mass_hi <= {hi:g} eV, got [{mass_lo!r}, {mass_hi!r}]")
    a, b = math.log10(mass_lo), math.log10(mass_hi)
    n = int(math.ceil((b - a) * points_per_decade - 1e-9)) + 1
    return 10.0 ** np.linspace(a, b, n)


@dataclass
class ConstraintCurve:
    masses: np.ndarray
    bounds: np.ndarray
    regime: Regime
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.masses) != len(self.bounds):
            raise ValueError("masses and bounds differ in length")

    def check(self) -> None:
        if np.any(np.diff(self.masses) <= 0):
            raise ValueError("mass grid is not strictly increasing")
        if not np.all(self.bounds > 0):
            raise ValueError("non-positive bound in curve")
        bad = np.flatnonzero(np.diff(self.bounds) < 0)
        if bad.size:
            i = int(bad[0])
            raise ValueError(
                f"{self.regime.value} bound decreases between m_a={self.masses[i]:.6g} "
                f"and {self.masses[i + 1]:.6g} eV"
            )

    def rows(self):
        for m, g in zip(self.masses, self.bounds):
            yield f"{m:.17g}", f"{g:.17g}", self.regime.value


def constraint_curves(
    regimes,
    mass_lo: float,
    mass_hi: float,
    points_per_decade: int,
    *,
    threshold_natural: float,
    materials: dict[str, Material],
    geometry: Geometry,
    const: PhysConstants = CODATA,
) -> list[ConstraintCurve]:
    """Exclusion curves for several regimes sharing one pass of integrals."""
    regimes = [Regime.parse(r) for r in regimes]
    masses = mass_grid(mass_lo, mass_hi, points_per_decade)
    bounds = np.empty((len(regimes), len(masses)))
    for j, m in enumerate(masses):
        try:
            I = integral_i(geometry, m)
            for i, r in enumerate(regimes):
                bounds[i, j] = bound_at_mass(r, m, threshold_natural, materials, geometry, const, integral=I)
        except Exception as exc:  # abort the whole curve, naming the mass
            raise ConstraintError(float(m), exc) from exc
    curves = []
    for i, r in enumerate(regimes):
        curve = ConstraintCurve(
            masses.copy(),
            bounds[i],
            r,
            {
                "threshold_natural_ev3": threshold_natural,
                "points_per_decade": points_per_decade,
                "mass_range_ev": [mass_lo, mass_hi],
            },
        )
        curve.check()
        curves.append(curve)
    return curves


def constraint_curve(regime, mass_lo: float, mass_hi: float, points_per_decade: int, **kw) -> ConstraintCurve:
    return constraint_curves([regime], mass_lo, mass_hi, points_per_decade, **kw)[0]


def _read_reference(path: Path) -> list[tuple[str, float, float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        cols = set(reader.fieldnames or ())
        missing = {"mass", "g2_over_4pi", "mass_unit"} - cols
        if missing:
            raise ValueError(f"{path}: missing column(s) {sorted(missing)}; "
                             "expected mass,g2_over_4pi,mass_unit[,label]")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            unit = rec["mass_unit"].strip()
            if unit not in MASS_UNITS:
                raise ValueError(f"{path}:{lineno}: unknown mass unit {unit!r}")
            label = (rec.get("label") or "").strip() or path.stem
            rows.append((label, float(rec["mass"]) * MASS_UNITS[unit], float(rec["g2_over_4pi"])))
    return rows


def overlay_export(curve: ConstraintCurve | list[ConstraintCurve], reference_files=()) -> list[tuple[str, float, float]]:
    """Long-format (series, m_a_ev, g2_over_4pi) rows: our curve(s), then each reference.

    Reference rows are passed through as given, only rescaled to eV.
    """
    curves = [curve] if isinstance(curve, ConstraintCurve) else list(curve)
    table = [(f"this_work_{c.regime.value}", float(m), float(g))
             for c in curves for m, g in zip(c.masses, c.bounds)]
    for path in reference_files:
        table.extend(_read_reference(Path(path)))
    return table
