import math

import numpy as np
import pytest

from axion_optomech.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    QuadratureError,
    gauss_kronrod,
    gauss_legendre_composite,
)


def test_rule_tables():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert np.all(np.diff(NODES) > 0)
    for k in range(23):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert NODES**k @ KRONROD_WEIGHTS == pytest.approx(exact, abs=1e-14)
        if k < 14:
            assert NODES**k @ GAUSS_WEIGHTS == pytest.approx(exact, abs=1e-14)


def test_sqrt_edge_singularity():
    res = gauss_kronrod(lambda x: np.sqrt(1 - x), 0.0, 1.0, epsrel=1e-12)
    assert res.value == pytest.approx(2 / 3, rel=1e-12)


def test_breakpoints_and_log_features():
    res = gauss_kronrod(lambda x: 1 / x, 1e-9, 1.0, breakpoints=np.geomspace(1e-9, 1, 30))
    assert res.value == pytest.approx(9 * math.log(10), rel=1e-10)


def test_budget_exhaustion_reports_estimate():
    with pytest.raises(QuadratureError) as info:
        gauss_kronrod(lambda x: np.sin(1 / x), 1e-6, 1.0, epsrel=1e-14, limit=20)
    assert math.isfinite(info.value.estimate)


def test_gauss_legendre_composite():
    assert gauss_legendre_composite(np.exp, 0.0, 3.0, panels=4, order=16) == pytest.approx(math.expm1(3.0), rel=1e-14)
