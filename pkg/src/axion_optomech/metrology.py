"""Force gradient -> mechanical frequency shift, and the detection threshold.

The differential measurement over Au and Al sections is taken to cancel the
Casimir force exactly; no residual-Casimir model is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import CODATA, PhysConstants, force_gradient_si_to_natural

__all__ = [
    "NoiseParams",
    "ShiftReport",
    "LINEWIDTH_HZ",
    "SPHERE_MASS_KG",
    "NOMINAL_SPHERE_MASS_KG",
    "fractional_shift",
    "resonance_shift",
    "thermal_noise_floor",
    "gradient_threshold",
    "shift_report",
    "noise_floor_report",
]

LINEWIDTH_HZ = 3e-8
# (4/3) pi (10 nm)^3 (2500 kg/m^3); reproduces 2 m_s omega0 dw_min = 2 pi x 1e-23 kg/s^2
SPHERE_MASS_KG = 4.0 / 3.0 * math.pi * (10e-9) ** 3 * 2500.0
NOMINAL_SPHERE_MASS_KG = 1.05e-20


def _positive(**kw: float) -> None:
    for name, v in kw.items():
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class NoiseParams:
    """Thermomechanical noise inputs; ``x2_mean`` is the drive amplitude <x_c^2> in m^2."""

    M_eff: float = NOMINAL_SPHERE_MASS_KG
    omega0: float = 1e5
    Q: float = 3e12
    Delta_f: float = LINEWIDTH_HZ
    T: float = 1e-3
    x2_mean: float = 100e-18
    E_C: float = field(init=False)

    def __post_init__(self) -> None:
        _positive(M_eff=self.M_eff, omega0=self.omega0, Q=self.Q, Delta_f=self.Delta_f,
                  x2_mean=self.x2_mean)
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ValueError(f"T must be non-negative, got {self.T!r}")
        object.__setattr__(self, "E_C", self.M_eff * self.omega0**2 * self.x2_mean)


def fractional_shift(force_gradient_si: float, m_s: float, omega0: float) -> float:
    """(omega' - omega0)/omega0 = -dF/dd / (2 m_s omega0^2)."""
    _positive(m_s=m_s, omega0=omega0)
    return -force_gradient_si / (2 * m_s * omega0**2)


def resonance_shift(dgrad_si: float, m_s: float, omega0: float) -> float:
    """Peak displacement |omega'_Al - omega'_Au| for a differential gradient in N/m."""
    _positive(m_s=m_s, omega0=omega0)
    return abs(dgrad_si) / (2 * m_s * omega0)


def thermal_noise_floor(n: NoiseParams, const: PhysConstants = CODATA) -> float:
    """[(k_B T / E_C)(omega0 Delta_f / Q)]^(1/2) in Hz."""
    return math.sqrt(const.k_B * n.T / n.E_C * n.omega0 * n.Delta_f / n.Q)


def gradient_threshold(delta_omega_min: float, m_s: float, omega0: float,
                       const: PhysConstants = CODATA) -> tuple[float, float]:
    """Smallest resolvable differential gradient as (N/m, eV^3)."""
    _positive(m_s=m_s, omega0=omega0)
    if not (math.isfinite(delta_omega_min) and delta_omega_min >= 0):
        raise ValueError(f"delta_omega_min must be non-negative, got {delta_omega_min!r}")
    si = 2 * m_s * omega0 * delta_omega_min
    return si, force_gradient_si_to_natural(si, const)


@dataclass(frozen=True)
class ShiftReport:
    delta_omega: float
    delta_omega_min: float
    threshold_si: float
    threshold_natural: float

    @property
    def detectable(self) -> bool:
        return self.delta_omega >= self.delta_omega_min

    def as_dict(self) -> dict:
        return {
            "delta_omega_hz": self.delta_omega,
            "delta_omega_min_hz": self.delta_omega_min,
            "threshold_si_n_per_m": self.threshold_si,
            "threshold_natural_ev3": self.threshold_natural,
            "detectable": self.detectable,
        }


def shift_report(dgrad_si: float, m_s: float = SPHERE_MASS_KG, omega0: float = 1e5,
                 delta_omega_min: float = LINEWIDTH_HZ, const: PhysConstants = CODATA) -> ShiftReport:
    si, nat = gradient_threshold(delta_omega_min, m_s, omega0, const)
    return ShiftReport(resonance_shift(dgrad_si, m_s, omega0), delta_omega_min, si, nat)


def noise_floor_report(mode: str, noise: NoiseParams, m_s: float = SPHERE_MASS_KG,
                       linewidth: float = LINEWIDTH_HZ, const: PhysConstants = CODATA) -> dict:
    """Threshold report for ``mode`` "linewidth" (dw_min = linewidth) or "thermal"."""
    if mode == "linewidth":
        dw = linewidth
    elif mode == "thermal":
        dw = thermal_noise_floor(noise, const)
    else:
        raise ValueError(f"mode must be 'linewidth' or 'thermal', got {mode!r}")
    si, nat = gradient_threshold(dw, m_s, noise.omega0, const)
    return {
        "delta_omega_min_hz": dw,
        "threshold_si_n_per_m": si,
        "threshold_natural_ev3": nat,
        "mode": mode,
    }
