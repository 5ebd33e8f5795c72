"""Pump-probe transmission of a levitated-sphere optomechanical cavity.

Mean-field steady state, first-order probe sideband and the probe
transmission t = 1 - 2 kappa a_+ / E_pr of a one-sided cavity.  All
frequencies are in the same "Hz" convention throughout; no factor 2*pi is
ever inserted.

Probe frequencies are handled internally as offsets ``delta - omega0``.  The
mechanical line is ~1e-8 Hz wide while ``delta`` is ~1e5 Hz, so forming
``omega_m**2 - delta**2`` directly would leave only a few significant digits
inside the line; the difference is instead built from the exact offsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

__all__ = [
    "OptomechParams",
    "SteadyState",
    "SidebandSolution",
    "Spectrum",
    "Peak",
    "SpectrumError",
    "PeakNotFoundError",
    "steady_state_intensity",
    "sideband_coefficients",
    "probe_sideband",
    "solve_sideband",
    "transmission",
    "transmission_at_offset",
    "scan_spectrum",
    "locate_peak",
]


class SpectrumError(ArithmeticError):
    pass


class PeakNotFoundError(SpectrumError):
    pass


@dataclass(frozen=True)
class OptomechParams:
    """Cavity, mechanics and drive parameters.

    ``gamma_m`` defaults to ``omega0 / Q``.  The defaults put the
    mechanical line on ``omega0``.
    """

    omega0: float = 1e5
    omega_m: float = 1e5
    kappa: float = 1e6
    gamma_m: float | None = None
    Delta: float = 0.0
    g: float = 200.0
    E_pu: float = 1e3
    E_pr: float = 100.0
    Q: float = 3e12
    m_s: float = 4.0 / 3.0 * math.pi * (10e-9) ** 3 * 2500.0

    def __post_init__(self) -> None:
        if self.gamma_m is None:
            if not self.Q > 0:
                raise ValueError(f"Q must be positive, got {self.Q!r}")
            object.__setattr__(self, "gamma_m", self.omega0 / self.Q)
        for name in ("omega0", "omega_m", "kappa", "gamma_m", "Delta", "g", "E_pu", "E_pr", "Q", "m_s"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        for name in ("omega0", "omega_m", "kappa", "gamma_m", "Q", "m_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("E_pu", "E_pr"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)!r}")

    @property
    def mechanical_offset(self) -> float:
        """omega_m - omega0: where the resonance feature sits on the offset axis."""
        return self.omega_m - self.omega0

    def with_mechanical_offset(self, offset: float) -> OptomechParams:
        return replace(self, omega_m=self.omega0 + offset)


@dataclass(frozen=True)
class SteadyState:
    """Positive roots of the steady-state cubic; ``sigma`` is the smallest."""

    sigma: float
    roots: tuple[float, ...]

    @property
    def multistable(self) -> bool:
        return len(self.roots) > 1


def _cubic_residual(p: OptomechParams, sigma: float) -> float:
    b = 2 * p.g**2 / p.omega_m
    return (p.kappa**2 + (p.Delta - b * sigma) ** 2) * sigma - p.E_pu**2


def steady_state_intensity(p: OptomechParams) -> SteadyState:
    """Solve E_pu^2 = [kappa^2 + (Delta - 2 g^2 sigma/omega_m)^2] sigma.

    f(sigma) = rhs - E_pu^2 is a cubic with f(0) = -E_pu^2 and all positive
    roots inside (0, E_pu^2/kappa^2].  Its stationary points split that range
    into monotone pieces, each bracketing at most one root.
    """
    E2 = p.E_pu**2
    if E2 == 0:
        return SteadyState(0.0, (0.0,))
    kappa2 = p.kappa**2
    b = 2 * p.g**2 / p.omega_m
    if b == 0:
        sigma = E2 / (kappa2 + p.Delta**2)
        return SteadyState(sigma, (sigma,))

    hi = E2 / kappa2
    # f(hi) = (Delta - b hi)^2 hi > 0 in exact arithmetic, but rounding can flip
    # its sign when b hi << kappa; widen until the bracket closes
    pad = 1e-15
    while _cubic_residual(p, hi) <= 0:
        hi = E2 / kappa2 * (1 + pad)
        pad *= 16
    # f'(s) = 3 b^2 s^2 - 4 Delta b s + kappa^2 + Delta^2
    disc = 4 * b * b * (p.Delta**2 - 3 * kappa2)
    edges = [0.0]
    if disc > 0:
        r = math.sqrt(disc)
        for s in sorted(((4 * p.Delta * b - r) / (6 * b * b), (4 * p.Delta * b + r) / (6 * b * b))):
            if 0 < s < hi:
                edges.append(s)
    edges.append(hi)

    def f(s: float) -> float:
        return _cubic_residual(p, s)

    roots: list[float] = []
    for lo, up in zip(edges[:-1], edges[1:]):
        flo, fup = f(lo), f(up)
        if fup == 0:
            root = up
        elif flo == 0:
            root = lo
        elif (flo < 0) != (fup < 0):
            root = optimize.brentq(f, lo, up, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        else:
            continue
        if root > 0 and (not roots or root != roots[-1]):
            roots.append(root)
    if not roots:
        raise SpectrumError(f"no positive steady-state root found for {p}")
    return SteadyState(roots[0], tuple(roots))


def _coefficients(p: OptomechParams, offset, sigma: float):
    offset = np.asarray(offset, dtype=float)
    delta = p.omega0 + offset
    detune = p.mechanical_offset - offset  # omega_m - delta, exact
    shift = 2 * p.g**2 * sigma / p.omega_m
    K1 = detune * (p.omega_m + delta) - 1j * delta * p.gamma_m
    K2 = -p.kappa + 1j * delta + 1j * p.Delta - 1j * shift
    K3 = p.kappa - 1j * delta + 1j * p.Delta - 1j * shift
    K4 = 2 * p.g**2 * sigma * p.omega_m
    return K1, K2, K3, K4


def _normalized_sideband(p: OptomechParams, offset, sigma: float):
    """a_+ / E_pr.

    The full denominator (K1 K3 - iK4)(K1 K2 - iK4) + K4^2 factors as
    K1 [K1 K2 K3 - iK4 (K2 + K3)]; cancelling K1 and the two K4^2 terms
    avoids the subtraction that otherwise costs a digit on resonance.
    """
    K1, K2, K3, K4 = _coefficients(p, offset, sigma)
    num = K1 * K2 - 1j * K4
    den = K1 * K2 * K3 - 1j * K4 * (K2 + K3)
    if np.any(den == 0):
        raise SpectrumError("probe sideband has a pole at the requested detuning")
    return num / den


def sideband_coefficients(p: OptomechParams, delta, sigma: float):
    """Return (K1, K2, K3, K4) at absolute probe detuning ``delta``."""
    return _coefficients(p, np.asarray(delta, dtype=float) - p.omega0, sigma)


def probe_sideband(p: OptomechParams, delta, sigma: float):
    """Probe sideband amplitude a_+ at probe-pump detuning ``delta``."""
    return p.E_pr * _normalized_sideband(p, np.asarray(delta, dtype=float) - p.omega0, sigma)


@dataclass(frozen=True)
class SidebandSolution:
    sigma: float
    K1: complex
    K2: complex
    K3: complex
    K4: float
    a_plus: complex


def solve_sideband(p: OptomechParams, delta: float) -> SidebandSolution:
    sigma = steady_state_intensity(p).sigma
    K1, K2, K3, K4 = sideband_coefficients(p, delta, sigma)
    a_plus = complex(probe_sideband(p, delta, sigma))
    return SidebandSolution(sigma, complex(K1), complex(K2), complex(K3), float(K4), a_plus)


def transmission_at_offset(p: OptomechParams, offset, sigma: float | None = None):
    """(t, |t|^2) at probe offsets ``delta - omega0``."""
    if not p.E_pr > 0:
        raise ValueError("transmission needs a probe field, E_pr > 0")
    if sigma is None:
        sigma = steady_state_intensity(p).sigma
    t = 1 - 2 * p.kappa * _normalized_sideband(p, offset, sigma)
    return t, (t * np.conj(t)).real


def transmission(p: OptomechParams, delta):
    """(t, |t|^2) at absolute probe-pump detuning ``delta``."""
    return transmission_at_offset(p, np.asarray(delta, dtype=float) - p.omega0)


@dataclass(frozen=True)
class Spectrum:
    offsets: np.ndarray
    transmission: np.ndarray
    params: OptomechParams
    peak_in_window: bool = True
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["offset_hz,transmission"]
        lines += [f"{x:.17g},{y:.17g}" for x, y in zip(self.offsets, self.transmission)]
        return "\n".join(lines) + "\n"


def _refined_offsets(center: float, gamma: float, halfwidth: float, step: float) -> np.ndarray:
    h = step * gamma
    n = int(math.ceil(halfwidth / step))
    return center + np.arange(-n, n + 1) * h


def scan_spectrum(
    p: OptomechParams,
    window: tuple[float, float] = (-100.0, 100.0),
    n_coarse: int = 2001,
    refine_halfwidth: float = 25.0,
    refine_step: float = 1.0 / 40.0,
) -> Spectrum:
    """|t|^2 on a uniform grid plus a dense cluster around the mechanical line.

    ``refine_halfwidth`` and ``refine_step`` are in units of gamma_m; the
    cluster sits at offsets ``center + k * refine_step * gamma_m`` so halving
    the step only inserts new samples between existing ones.
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError(f"window must satisfy lo < hi, got {window}")
    if n_coarse < 100:
        raise ValueError(f"n_coarse must be >= 100, got {n_coarse}")
    center = p.mechanical_offset
    offsets = np.linspace(lo, hi, n_coarse)
    peak_in_window = lo <= center <= hi
    if peak_in_window:
        fine = _refined_offsets(center, p.gamma_m, refine_halfwidth, refine_step)
        offsets = np.concatenate([offsets, fine[(fine >= lo) & (fine <= hi)]])
    offsets = np.unique(offsets)
    sigma = steady_state_intensity(p).sigma
    _, T = transmission_at_offset(p, offsets, sigma)
    return Spectrum(
        offsets,
        T,
        p,
        peak_in_window,
        {"n_coarse": n_coarse, "refine_halfwidth": refine_halfwidth, "refine_step": refine_step},
    )


@dataclass(frozen=True)
class Peak:
    center: float
    fwhm: float
    height: float

    def as_dict(self) -> dict:
        return {"center_hz": self.center, "fwhm_hz": self.fwhm, "height": self.height}


def locate_peak(
    p: OptomechParams,
    window: tuple[float, float] = (-100.0, 100.0),
    search_halfwidth: float = 25.0,
) -> Peak:
    """Center, FWHM and height of the mechanical feature in |t|^2.

    The metric is | |t|^2 - 1 |, so a dip is located as readily as a peak.
    Everything is solved in the local coordinate y = (offset - c0)/gamma_m with
    c0 = omega_m - omega0; the center is refined by bounded golden-section
    search and each half-maximum crossing by Brent bisection, both to 1e-6
    in y.
    """
    c0 = p.mechanical_offset
    gamma = p.gamma_m
    if not window[0] <= c0 <= window[1]:
        raise PeakNotFoundError(f"mechanical line at {c0} Hz lies outside window {window}")
    sigma = steady_state_intensity(p).sigma

    def metric(y):
        _, T = transmission_at_offset(p, c0 + np.asarray(y) * gamma, sigma)
        return np.abs(T - 1.0)

    ys = np.linspace(-search_halfwidth, search_halfwidth, int(40 * search_halfwidth) + 1)
    vals = metric(ys)
    j = int(np.argmax(vals))
    if not vals[j] > 1e-9 or j in (0, len(ys) - 1):
        raise PeakNotFoundError("no resonance extremum of |t|^2 near the mechanical line")

    res = optimize.minimize_scalar(
        lambda y: -float(metric(y)),
        bounds=(ys[j - 1], ys[j + 1]),
        method="bounded",
        options={"xatol": 1e-7},
    )
    yc = float(res.x)
    top = float(metric(yc))
    half = top / 2

    def crossing(direction: int) -> float:
        y = yc
        for k in range(1, 2000):
            y_next = yc + direction * 0.25 * k
            if metric(y_next) < half:
                a, b = sorted((y, y_next))
                return optimize.brentq(lambda s: float(metric(s)) - half, a, b, xtol=1e-8)
            y = y_next
        raise PeakNotFoundError("half-maximum crossing not found")

    fwhm = (crossing(+1) - crossing(-1)) * gamma
    _, height = transmission_at_offset(p, c0 + yc * gamma, sigma)
    return Peak(c0 + yc * gamma, fwhm, float(height))
