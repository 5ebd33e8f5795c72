"""Physical constants and SI <-> natural-unit (hbar = c = 1) conversions.

Two constant tables are provided:

``CODATA``
    CODATA 2018 exact/recommended values.  Every derived factor is computed
    from hbar, c and the electron-volt.
``PAPER``
    Rounded reference values (k_B = 1.38e-23, m = 938.9150 MeV,
    m_H = 938.771 MeV and the force-gradient factor 1 kg/s^2 = 2.4313e5 eV^3),
    so reference numbers come out digit for digit.  Selected by the mode
    name "paper" or "paper_literal".

Natural-unit densities are expressed in MeV^4, force gradients in eV^3 and
lengths in eV^-1.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

__all__ = [
    "PhysConstants",
    "CODATA",
    "PAPER",
    "get_constants",
    "Dimension",
    "Quantity",
    "length_si_to_natural",
    "length_natural_to_si",
    "force_gradient_si_to_natural",
    "force_gradient_natural_to_si",
    "density_si_to_natural",
    "density_natural_to_si",
    "frequency_to_energy",
    "energy_to_frequency",
    "constants_report",
]

MEV4_IN_EV4 = 1e24


@dataclass(frozen=True)
class PhysConstants:
    """Immutable constant table.

    Masses are rest energies in eV.  ``force_gradient_override`` replaces the
    computed kg/s^2 -> eV^3 factor when set (used by the rounded table).
    """

    name: str
    hbar: float  # J s
    c: float  # m / s
    k_B: float  # J / K
    eV_in_J: float  # J
    m_n: float  # eV
    m_p: float  # eV
    m_H: float  # eV
    force_gradient_override: float | None = None
    hbar_c: float = field(init=False)  # eV m

    def __post_init__(self) -> None:
        object.__setattr__(self, "hbar_c", self.hbar * self.c / self.eV_in_J)

    @property
    def m(self) -> float:
        """Mean nucleon mass in eV."""
        return (self.m_n + self.m_p) / 2

    @property
    def kg_in_eV(self) -> float:
        return self.c**2 / self.eV_in_J

    @property
    def force_gradient_factor(self) -> float:
        """eV^3 per (kg/s^2), i.e. per N/m."""
        if self.force_gradient_override is not None:
            return self.force_gradient_override
        # 1 J/m^2 = (1/e) eV * (hbar c)^2 eV^2
        return self.hbar_c**2 / self.eV_in_J


CODATA = PhysConstants(
    name="codata",
    hbar=1.054571817e-34,
    c=299792458.0,
    k_B=1.380649e-23,
    eV_in_J=1.602176634e-19,
    m_n=939.56542052e6,
    m_p=938.27208816e6,
    m_H=938.783071e6,  # 1.00782503207 u
)

# Nucleon masses chosen so their mean is exactly 938.9150 MeV.
PAPER = PhysConstants(
    name="paper",
    hbar=1.054571817e-34,
    c=299792458.0,
    k_B=1.38e-23,
    eV_in_J=1.602176634e-19,
    m_n=939.558e6,
    m_p=938.272e6,
    m_H=938.771e6,
    force_gradient_override=2.4313e5,
)

_TABLES = {"codata": CODATA, "paper": PAPER, "paper_literal": PAPER}


def get_constants(mode: str) -> PhysConstants:
    try:
        return _TABLES[mode]
    except KeyError:
        raise ValueError(f"unknown constants mode {mode!r}; expected 'paper', 'paper_literal' or 'codata'") from None


def _check_nonneg(x: float, what: str) -> None:
    if not math.isfinite(x):
        raise ValueError(f"{what} must be finite, got {x!r}")
    if x < 0:
        raise ValueError(f"{what} must be non-negative, got {x!r}")


def length_si_to_natural(x: float, const: PhysConstants = CODATA) -> float:
    """Metres -> eV^-1."""
    _check_nonneg(x, "length")
    return x / const.hbar_c


def length_natural_to_si(x: float, const: PhysConstants = CODATA) -> float:
    _check_nonneg(x, "length")
    return x * const.hbar_c


def force_gradient_si_to_natural(x: float, const: PhysConstants = CODATA) -> float:
    """N/m (kg/s^2) -> eV^3."""
    if not math.isfinite(x):
        raise ValueError(f"force gradient must be finite, got {x!r}")
    return x * const.force_gradient_factor


def force_gradient_natural_to_si(x: float, const: PhysConstants = CODATA) -> float:
    if not math.isfinite(x):
        raise ValueError(f"force gradient must be finite, got {x!r}")
    return x / const.force_gradient_factor


def density_si_to_natural(rho: float, const: PhysConstants = CODATA) -> float:
    """kg/m^3 -> MeV^4."""
    _check_nonneg(rho, "density")
    return rho * const.kg_in_eV * const.hbar_c**3 / MEV4_IN_EV4


def density_natural_to_si(rho: float, const: PhysConstants = CODATA) -> float:
    _check_nonneg(rho, "density")
    return rho * MEV4_IN_EV4 / (const.kg_in_eV * const.hbar_c**3)


def frequency_to_energy(f: float, const: PhysConstants = CODATA) -> float:
    """Hz -> eV as E = hbar * f (no 2*pi is inserted)."""
    return f * const.hbar / const.eV_in_J


def energy_to_frequency(e: float, const: PhysConstants = CODATA) -> float:
    return e * const.eV_in_J / const.hbar


class Dimension(enum.Enum):
    LENGTH = "m"
    INVERSE_ENERGY = "eV^-1"
    DENSITY_SI = "kg/m^3"
    DENSITY_NATURAL = "MeV^4"
    FORCE_GRADIENT_SI = "N/m"
    FORCE_GRADIENT_NATURAL = "eV^3"
    FREQUENCY = "Hz"
    ENERGY = "eV"


# si dimension -> (natural dimension, forward, inverse)
_PAIRS = {
    Dimension.LENGTH: (Dimension.INVERSE_ENERGY, length_si_to_natural, length_natural_to_si),
    Dimension.DENSITY_SI: (Dimension.DENSITY_NATURAL, density_si_to_natural, density_natural_to_si),
    Dimension.FORCE_GRADIENT_SI: (
        Dimension.FORCE_GRADIENT_NATURAL,
        force_gradient_si_to_natural,
        force_gradient_natural_to_si,
    ),
    Dimension.FREQUENCY: (Dimension.ENERGY, frequency_to_energy, energy_to_frequency),
}
_NATURAL = {nat: (si, inv) for si, (nat, _, inv) in _PAIRS.items()}


@dataclass(frozen=True)
class Quantity:
    value: float
    dimension: Dimension

    @property
    def is_natural(self) -> bool:
        return self.dimension in _NATURAL

    def to_natural(self, const: PhysConstants = CODATA) -> Quantity:
        if self.is_natural:
            return self
        nat, fwd, _ = _PAIRS[self.dimension]
        return Quantity(fwd(self.value, const), nat)

    def to_si(self, const: PhysConstants = CODATA) -> Quantity:
        if not self.is_natural:
            return self
        si, inv = _NATURAL[self.dimension]
        return Quantity(inv(self.value, const), si)


def constants_report(const: PhysConstants) -> dict:
    """JSON-ready dump of a constant table in both unit systems."""
    return {
        "mode": const.name,
        "si": {
            "hbar_J_s": const.hbar,
            "c_m_per_s": const.c,
            "k_B_J_per_K": const.k_B,
            "eV_in_J": const.eV_in_J,
        },
        "natural": {
            "hbar_c_eV_m": const.hbar_c,
            "m_n_eV": const.m_n,
            "m_p_eV": const.m_p,
            "m_nucleon_mean_eV": const.m,
            "m_H_eV": const.m_H,
            "kg_in_eV": const.kg_in_eV,
        },
        "conversions": {
            "eV3_per_kg_s2": const.force_gradient_factor,
            "eV_inv_per_m": 1.0 / const.hbar_c,
            "MeV4_per_kg_m3": density_si_to_natural(1.0, const),
        },
    }


if __name__ == "__main__":
    print(json.dumps(constants_report(CODATA), indent=2))
