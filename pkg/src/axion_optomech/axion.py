"""Two-axion exchange between a nanosphere and a plate of alternating sections.

Everything here is in natural units (hbar = c = 1): lengths in eV^-1, masses
in eV, densities in MeV^4, force gradients in eV^3.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .bessel import bessel_k1
from .constants import CODATA, MEV4_IN_EV4, PhysConstants, density_si_to_natural, length_si_to_natural
from .quadrature import QuadResult, gauss_kronrod, gauss_legendre_composite

__all__ = [
    "Material",
    "Geometry",
    "Couplings",
    "PAPER_MATERIALS",
    "SI_DENSITIES",
    "default_materials",
    "bessel_k1",
    "two_axion_potential",
    "phi",
    "integral_i",
    "integral_i_cosh",
    "coupling_coefficient",
    "force_gradient",
    "differential_force_gradient",
    "MASS_FLOOR_EV",
]

MASS_FLOOR_EV = 1e-12
PHI_SERIES_SWITCH = 1e-4
VALIDITY_FACTOR = 100.0
TAIL_LOG = 46.0  # e^-46 ~ 1e-20 of the integrand scale at u = 1


@dataclass(frozen=True)
class Material:
    label: str
    rho_natural: float  # MeV^4
    Z_over_mu: float
    N_over_mu: float

    def __post_init__(self) -> None:
        for name in ("rho_natural", "Z_over_mu", "N_over_mu"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"material {self.label!r}: {name} must be positive, got {v!r}")

    @classmethod
    def from_si(cls, label: str, rho_si: float, Z_over_mu: float, N_over_mu: float,
                const: PhysConstants = CODATA) -> Material:
        return cls(label, density_si_to_natural(rho_si, const), Z_over_mu, N_over_mu)


# Z/mu and N/mu with mu = m_atom / m_H; rounded natural densities (MeV^4).
PAPER_MATERIALS = {
    "Al": Material("Al", 1.2e-5, 0.48558, 0.52304),
    "Au": Material("Au", 8.3e-5, 0.40422, 0.60378),
    "SiO2": Material("SiO2", 1.1e-5, 0.503205, 0.505179),
}

SI_DENSITIES = {"Al": 2700.0, "Au": 19300.0, "SiO2": 2500.0}  # kg/m^3


def default_materials(mode: str = "paper", const: PhysConstants = CODATA) -> dict[str, Material]:
    """Material table: rounded natural densities, or SI densities converted."""
    if mode in ("paper", "paper_literal"):
        return dict(PAPER_MATERIALS)
    return {
        k: replace(m, rho_natural=density_si_to_natural(SI_DENSITIES[k], const))
        for k, m in PAPER_MATERIALS.items()
    }


@dataclass(frozen=True)
class Geometry:
    """Sphere radius R, section width D, Au coating t, gap a (all eV^-1)."""

    R: float
    D: float
    t: float
    a: float

    def __post_init__(self) -> None:
        for name in ("R", "D", "t", "a"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"geometry {name} must be finite and non-negative, got {v!r}")
        if not self.d > 0:
            raise ValueError("effective distance d = a + t must be positive")

    @property
    def d(self) -> float:
        return self.a + self.t

    @classmethod
    def from_si(cls, R: float = 10e-9, D: float = 100e-6, t: float = 200e-9, a: float = 300e-9,
                const: PhysConstants = CODATA) -> Geometry:
        conv = lambda x: length_si_to_natural(x, const)  # noqa: E731
        return cls(conv(R), conv(D), conv(t), conv(a))


@dataclass(frozen=True)
class Couplings:
    m_a: float  # eV
    gp2_over_4pi: float = 0.0
    gn2_over_4pi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("m_a", "gp2_over_4pi", "gn2_over_4pi"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {v!r}")

    @classmethod
    def equal(cls, m_a: float, g2_over_4pi: float) -> Couplings:
        return cls(m_a, g2_over_4pi, g2_over_4pi)

    def g2_over_4pi(self, nucleon: str) -> float:
        return {"p": self.gp2_over_4pi, "n": self.gn2_over_4pi}[nucleon]


def two_axion_potential(r: float, c: Couplings, which: str = "nn", const: PhysConstants = CODATA) -> float:
    """V(r) between two nucleons ``which`` in {"pp", "nn", "pn", "np"}, in eV.

    Only valid for r >> 1/m; r <= 100/m is refused.
    """
    if len(which) != 2 or set(which) - {"p", "n"}:
        raise ValueError(f"nucleon pair must be two of 'p'/'n', got {which!r}")
    if not c.m_a > 0:
        raise ValueError("axion mass must be positive")
    cutoff = VALIDITY_FACTOR / const.m
    if not r > cutoff:
        raise ValueError(
            f"two-axion potential only holds for r >> 1/m (nucleon mass); "
            f"r={r!r} eV^-1 is below the cutoff {cutoff:.3e} eV^-1"
        )
    gk2 = 4 * math.pi * c.g2_over_4pi(which[0])
    gl2 = 4 * math.pi * c.g2_over_4pi(which[1])
    return -gk2 * gl2 / (32 * math.pi**3 * const.m**2) * c.m_a / r**2 * bessel_k1(2 * c.m_a * r)


def phi(r, z):
    """r - 1/(2z) + exp(-2rz) (r + 1/(2z)), with a series for 2rz < 1e-4.

    Written as r [1 + (e^-x (1+x) - 1)/x] with x = 2rz; the bracket expands to
    sum_k (-1)^k k x^k / (k+1)!.
    """
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ValueError("phi requires z > 0")
    x = 2 * r * z
    small = x < PHI_SERIES_SWITCH
    xs = np.where(small, x, 0.0)
    series = 1 - xs / 2 + xs**2 / 3 - xs**3 / 8 + xs**4 / 30 - xs**5 / 144
    zz = np.where(small, 1.0, z)
    direct = r - 0.5 / zz + np.exp(-2 * r * zz) * (r + 0.5 / zz)
    out = np.where(small, r * series, direct)
    return out if out.ndim else float(out)


def _clamp_mass(m_a: float) -> tuple[float, bool]:
    if not (math.isfinite(m_a) and m_a > 0):
        raise ValueError(f"axion mass must be positive, got {m_a!r}")
    if m_a < MASS_FLOOR_EV:
        warnings.warn(
            f"m_a={m_a:g} eV is below the {MASS_FLOOR_EV:g} eV floor; using the plateau value",
            RuntimeWarning,
            stacklevel=3,
        )
        return MASS_FLOOR_EV, True
    return m_a, False


def _u_max(geo: Geometry, m_a: float) -> float:
    return 1.0 + TAIL_LOG / (2 * m_a * geo.d)


def _integrand_u(u: np.ndarray, geo: Geometry, m_a: float) -> np.ndarray:
    root = np.sqrt((u - 1) * (u + 1)) / u**2
    slab = -np.expm1(-2 * m_a * u * geo.D)
    decay = np.exp(-2 * m_a * geo.d * u)
    return root * slab * decay * phi(geo.R, m_a * u)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    abserr: float
    neval: int
    m_a_used: float
    clamped: bool


def integral_i(geo: Geometry, m_a: float, *, epsrel: float = 1e-10, full_output: bool = False):
    """Sphere-plate geometry integral over u in [1, inf), in eV^-1.

    Integrated in v = 1/u on (1/u_max, 1] by adaptive Gauss-Kronrod, where
    u_max puts exp(-2 m_a d u) ~1e-20 below its value at u = 1.  The initial
    partition is graded geometrically in u - 1 both towards the
    square-root edge at u = 1 and across the decades a small m_a spreads the
    integrand over.
    """
    m, clamped = _clamp_mass(m_a)
    if geo.D == 0 or geo.R == 0:
        res = IntegralResult(0.0, 0.0, 0, m, clamped)
        return res if full_output else 0.0
    umax = _u_max(geo, m)
    smax = umax - 1.0
    s_lo = min(smax, 1.0) * 1e-8
    ndec = math.log10(smax / s_lo)
    s_knots = np.geomspace(s_lo, smax, max(int(4 * ndec), 8))
    v_knots = 1.0 / (1.0 + s_knots)

    def g(v):
        return _integrand_u(1.0 / v, geo, m) / v**2

    q: QuadResult = gauss_kronrod(g, 1.0 / umax, 1.0, breakpoints=v_knots, epsrel=epsrel)
    res = IntegralResult(q.value, q.abserr, q.neval, m, clamped)
    return res if full_output else res.value


def integral_i_cosh(geo: Geometry, m_a: float, *, panels: int = 96, order: int = 32) -> float:
    """Independent evaluation of the same integral with u = cosh(theta).

    The substitution turns sqrt(u^2 - 1) du into sinh(theta)^2 dtheta, removing
    the edge singularity; a fixed composite Gauss-Legendre rule is applied on
    [0, arccosh(u_max)].
    """
    m, _ = _clamp_mass(m_a)
    if geo.D == 0 or geo.R == 0:
        return 0.0
    tmax = math.acosh(_u_max(geo, m))

    def h(theta):
        u = np.cosh(theta)
        slab = -np.expm1(-2 * m * u * geo.D)
        decay = np.exp(-2 * m * geo.d * u)
        return np.tanh(theta) ** 2 * slab * decay * phi(geo.R, m * u)

    return gauss_legendre_composite(h, 0.0, tmax, panels=panels, order=order)


def coupling_coefficient(mat: Material, c: Couplings) -> float:
    """rho (g_ap^2/4pi Z/mu + g_an^2/4pi N/mu), in MeV^4."""
    return mat.rho_natural * (c.gp2_over_4pi * mat.Z_over_mu + c.gn2_over_4pi * mat.N_over_mu)


def _prefactor(const: PhysConstants) -> float:
    # pi / (m^2 m_H^2), with both C's converted from MeV^4 to eV^4
    return math.pi / (const.m**2 * const.m_H**2) * MEV4_IN_EV4**2


def force_gradient(mat: Material, sphere: Material, geo: Geometry, c: Couplings,
                   const: PhysConstants = CODATA, *, integral: float | None = None) -> float:
    """Gradient dF/dd of the two-axion force on the sphere over section ``mat``, in eV^3."""
    cb = coupling_coefficient(mat, c)
    cs = coupling_coefficient(sphere, c)
    if cb == 0 or cs == 0:
        return 0.0
    I = integral_i(geo, c.m_a) if integral is None else integral
    return _prefactor(const) * cb * cs * I


def differential_force_gradient(geo: Geometry, c: Couplings, mat_al: Material, mat_au: Material,
                                sphere: Material, const: PhysConstants = CODATA,
                                *, integral: float | None = None) -> float:
    """dF_Al/dd - dF_Au/dd, in eV^3."""
    dC = coupling_coefficient(mat_al, c) - coupling_coefficient(mat_au, c)
    cs = coupling_coefficient(sphere, c)
    if dC == 0 or cs == 0:
        return 0.0
    I = integral_i(geo, c.m_a) if integral is None else integral
    return _prefactor(const) * dC * cs * I
