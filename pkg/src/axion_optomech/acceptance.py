"""Acceptance criteria, runnable from pytest or ``axion-optomech check``.

Each criterion returns a Result; tolerances are fixed here and never tuned at
run time.  Rounded (paper_literal) constants unless a criterion says otherwise.
"""

from __future__ import annotations

import contextlib
import io
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .axion import Couplings, Geometry, PAPER_MATERIALS, integral_i, integral_i_cosh, phi, two_axion_potential
from .bessel import bessel_k1
from .constants import PAPER
from .constraints import Regime, bound_at_mass, constraint_curves, material_factor
from .metrology import (
    LINEWIDTH_HZ,
    SPHERE_MASS_KG,
    NoiseParams,
    gradient_threshold,
    resonance_shift,
    thermal_noise_floor,
)
from .spectrum import OptomechParams, locate_peak, steady_state_intensity, transmission_at_offset

PAPER_GEOMETRY = Geometry.from_si(const=PAPER)


@dataclass(frozen=True)
class Result:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def c01_noise_floor() -> Result:
    v = thermal_noise_floor(NoiseParams(), PAPER)
    err = rel(v, 3.6253e-8)
    return Result(1, "noise floor", err < 1e-4, f"{v:.6e} Hz, rel err {err:.2e} (tol 1e-4)")


def c02_threshold_chain() -> Result:
    si, nat = gradient_threshold(LINEWIDTH_HZ, SPHERE_MASS_KG, 1e5, PAPER)
    e1, e2 = rel(si, 6.2832e-23), rel(nat, 1.5276e-17)
    return Result(2, "threshold chain", e1 < 1e-4 and e2 < 1e-3,
                  f"{si:.5e} kg/s^2 (rel {e1:.1e}, tol 1e-4); {nat:.5e} eV^3 (rel {e2:.1e}, tol 1e-3)")


def c03_spectrum_peaks() -> Result:
    t0 = time.perf_counter()
    base = OptomechParams()
    worst_c, fwhms = 0.0, []
    for off in (-10.0, 0.0, 10.0):
        pk = locate_peak(base.with_mechanical_offset(off))
        worst_c = max(worst_c, abs(pk.center - off) / base.gamma_m)
        fwhms.append(pk.fwhm)
    dt = time.perf_counter() - t0
    ok = worst_c < 1e-3 and all(2.7e-8 <= w <= 4.0e-8 for w in fwhms) and dt < 5
    return Result(3, "spectrum peaks", ok,
                  f"max center err {worst_c:.1e} gamma_m (tol 1e-3), fwhm "
                  + ", ".join(f"{w:.4e}" for w in fwhms) + f" Hz (band [2.7e-8, 4e-8]), {dt:.2f} s")


def c04_baseline_unitarity() -> Result:
    worst = 0.0
    for off in (-10.0, 0.0, 10.0):
        p = OptomechParams().with_mechanical_offset(off)
        x = np.linspace(-100, 100, 20001)
        x = x[np.abs(x - off) > 1.0]
        _, T = transmission_at_offset(p, x)
        worst = max(worst, float(np.max(np.abs(T - 1))))
    return Result(4, "baseline unitarity", worst < 1e-6, f"max ||t|^2-1| = {worst:.2e} (tol 1e-6)")


def random_params(rng: np.random.Generator) -> OptomechParams:
    kappa = 10 ** rng.uniform(3, 7)
    return OptomechParams(
        omega0=1e5,
        omega_m=10 ** rng.uniform(3, 7),
        kappa=kappa,
        gamma_m=10 ** rng.uniform(-9, 1),
        Delta=kappa * rng.uniform(-5, 5),
        g=10 ** rng.uniform(0, 5),
        E_pu=10 ** rng.uniform(0, 7),
        E_pr=100.0,
    )


def c05_steady_state() -> Result:
    rng = np.random.default_rng(20231)
    worst = 0.0
    for _ in range(100):
        p = random_params(rng)
        for s in steady_state_intensity(p).roots:
            b = 2 * p.g**2 / p.omega_m
            r = abs(p.E_pu**2 - (p.kappa**2 + (p.Delta - b * s) ** 2) * s) / p.E_pu**2
            worst = max(worst, r)
    p0 = OptomechParams(g=0.0)
    lin = rel(steady_state_intensity(p0).sigma, p0.E_pu**2 / p0.kappa**2)
    return Result(5, "steady-state residual", worst < 1e-12 and lin < 1e-14,
                  f"max residual {worst:.1e} (tol 1e-12), g=0 limit rel err {lin:.1e} (tol 1e-14)")


def c06_quadrature_oracle() -> Result:
    t0 = time.perf_counter()
    masses = 10.0 ** np.linspace(-10, math.log10(20), int(math.ceil((math.log10(20) + 10) * 5)) + 1)
    worst = max(rel(integral_i(PAPER_GEOMETRY, m), integral_i_cosh(PAPER_GEOMETRY, m)) for m in masses)
    dt = time.perf_counter() - t0
    return Result(6, "quadrature oracle", worst < 1e-8 and dt < 10,
                  f"{len(masses)} masses, max rel diff {worst:.1e} (tol 1e-8), {dt:.2f} s")


def c07_exclusion_curves() -> Result:
    thr = gradient_threshold(LINEWIDTH_HZ, SPHERE_MASS_KG, 1e5, PAPER)[1]
    kw = dict(threshold_natural=thr, materials=PAPER_MATERIALS, geometry=PAPER_GEOMETRY, const=PAPER)
    proton, neutron, equal = constraint_curves(["proton", "neutron", "equal"], 1e-10, 20.0, 40, **kw)
    low = equal.bounds[equal.masses < 1e-9]
    flat = (low.max() - low.min()) / low.min()
    mono = bool(np.all(np.diff(equal.bounds) >= 0))
    below = bool(np.all(equal.bounds < np.minimum(proton.bounds, neutron.bounds)))
    scale = 0.0
    for m in (1e-10, 1e-3, 0.3, 5.0):
        for r in Regime:
            b1 = bound_at_mass(r, m, thr, PAPER_MATERIALS, PAPER_GEOMETRY, PAPER)
            b4 = bound_at_mass(r, m, 4 * thr, PAPER_MATERIALS, PAPER_GEOMETRY, PAPER)
            scale = max(scale, abs(b4 / b1 - 2) / 2)
    ident = 0.0
    for label in ("Al", "Au", "SiO2"):
        mat = PAPER_MATERIALS[label]
        tot = material_factor(Regime.EQUAL, mat)
        ident = max(ident, rel(material_factor(Regime.PROTON, mat) + material_factor(Regime.NEUTRON, mat), tot))
    al, au = PAPER_MATERIALS["Al"], PAPER_MATERIALS["Au"]
    br = (material_factor(Regime.EQUAL, al) - material_factor(Regime.EQUAL, au))
    br_sum = (material_factor(Regime.PROTON, al) - material_factor(Regime.PROTON, au)) + (
        material_factor(Regime.NEUTRON, al) - material_factor(Regime.NEUTRON, au))
    ident = max(ident, rel(br_sum, br))
    ok = flat < 0.01 and mono and below and scale < 1e-10 and ident < 1e-12
    return Result(7, "exclusion curves", ok,
                  f"flat {flat:.1e} (<1e-2), monotone {mono}, equal lowest {below}, "
                  f"sqrt-threshold err {scale:.1e} (<1e-10), regime identity {ident:.1e} (<1e-12)")


def c08_trivial_limits() -> Result:
    errs = {
        "phi(0,z)": max(abs(phi(0.0, z)) for z in (1e-6, 1.0, 1e6)),
        "I(D=0)": abs(integral_i(Geometry(PAPER_GEOMETRY.R, 0.0, PAPER_GEOMETRY.t, PAPER_GEOMETRY.a), 0.1)),
        "V(g=0)": abs(two_axion_potential(1.0, Couplings(1.0, 0.0, 1.0), "pn", PAPER)),
    }
    x = 6.2832e-23
    errs["dw linear"] = rel(resonance_shift(2 * x, SPHERE_MASS_KG, 1e5), 2 * resonance_shift(x, SPHERE_MASS_KG, 1e5))
    worst = max(errs.values())
    return Result(8, "trivial limits", worst <= 1e-14,
                  ", ".join(f"{k} {v:.1e}" for k, v in errs.items()) + " (tol 1e-14)")


def c09_determinism() -> Result:
    from .cli import main

    digests = []
    with tempfile.TemporaryDirectory() as tmp, contextlib.redirect_stdout(io.StringIO()):
        out = Path(tmp)
        for _ in range(2):
            for argv in (
                ["spectrum", "--offsets", "10", "--out", str(out)],
                ["constrain", "--regime", "all", "--set", "constraint.points_per_decade=5", "--out", str(out)],
            ):
                if main(argv) != 0:
                    return Result(9, "determinism", False, f"command {argv[0]} failed")
            digests.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    same = digests[0] == digests[1]
    return Result(9, "determinism", same, f"{len(digests[0])} files byte-identical: {same}")


def k1_integral_oracle(x: float, h: float = 1.0 / 32.0) -> float:
    """K1(x) = int_0^inf exp(-x cosh t) cosh t dt by the trapezoidal rule.

    The integrand is entire and decays double-exponentially, so the
    trapezoid error is ~exp(-pi^2/h).
    """
    tmax = math.acosh(760.0 / x + 1.0)
    t = np.arange(0.0, tmax + h, h)
    f = np.exp(-x * np.cosh(t)) * np.cosh(t)
    f[0] *= 0.5
    return h * math.fsum(f)


def c10_bessel() -> Result:
    xs = np.geomspace(1e-6, 100, 81)
    worst = max(rel(bessel_k1(x), k1_integral_oracle(x)) for x in xs)
    return Result(10, "bessel K1", worst < 1e-10, f"max rel err {worst:.1e} over {len(xs)} points (tol 1e-10)")


CRITERIA = (
    c01_noise_floor,
    c02_threshold_chain,
    c03_spectrum_peaks,
    c04_baseline_unitarity,
    c05_steady_state,
    c06_quadrature_oracle,
    c07_exclusion_curves,
    c08_trivial_limits,
    c09_determinism,
    c10_bessel,
)


def run_all() -> list[Result]:
    out = []
    for crit in CRITERIA:
        try:
            out.append(crit())
        except Exception as exc:  # a crash is a failure, not an abort
            out.append(Result(CRITERIA.index(crit) + 1, crit.__name__, False, f"raised {exc!r}"))
    return out
