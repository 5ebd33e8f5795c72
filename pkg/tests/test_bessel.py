import math

import mpmath
import numpy as np
import pytest

from axion_optomech.acceptance import k1_integral_oracle
from axion_optomech.bessel import bessel_k1


def test_small_argument_asymptote():
    assert 1e-6 * bessel_k1(1e-6) == pytest.approx(1.0, rel=1e-6)


def test_k1_at_one_matches_integral_representation():
    oracle = mpmath.quad(lambda t: mpmath.exp(-mpmath.cosh(t)) * mpmath.cosh(t), [0, 2, 5, 10])
    assert bessel_k1(1.0) == pytest.approx(float(oracle), rel=1e-10)


def test_large_argument_asymptote():
    x = 100.0
    approx = math.sqrt(math.pi / (2 * x)) * math.exp(-x) * (1 + 3 / (8 * x))
    assert bessel_k1(x) == pytest.approx(approx, rel=1e-4)


@pytest.mark.parametrize("x", np.geomspace(1e-8, 700, 60))
def test_against_mpmath(x):
    assert bessel_k1(x) == pytest.approx(float(mpmath.besselk(1, x)), rel=1e-10)


def test_series_branch_seam_is_continuous():
    lo, hi = bessel_k1(2.0), bessel_k1(math.nextafter(2.0, 3.0))
    assert hi == pytest.approx(lo, rel=1e-14)


def test_trapezoid_oracle_itself():
    for x in (1e-6, 0.3, 7.0, 100.0):
        assert k1_integral_oracle(x) == pytest.approx(float(mpmath.besselk(1, x)), rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, math.nan])
def test_domain(x):
    with pytest.raises(ValueError):
        bessel_k1(x)


def test_underflow():
    assert bessel_k1(800.0) == 0.0
    assert bessel_k1(700.0) > 0.0
