"""Modified Bessel function of the second kind, order one."""

from __future__ import annotations

import math

EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-17
_MAXIT = 10000


def _k1_series(x: float) -> float:
    # K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
    q = 0.25 * x * x
    term = 1.0  # (x^2/4)^k / (k! (k+1)!)
    psi1 = -EULER_GAMMA  # psi(k+1)
    psi2 = 1.0 - EULER_GAMMA  # psi(k+2)
    i_sum = 0.0
    k_sum = 0.0
    k = 0
    while True:
        i_sum += term
        k_sum += (psi1 + psi2) * term
        k += 1
        term *= q / (k * (k + 1))
        psi1 += 1.0 / k
        psi2 += 1.0 / (k + 1)
        if term < _EPS * i_sum:
            break
    i1 = 0.5 * x * i_sum
    return 1.0 / x + math.log(0.5 * x) * i1 - 0.25 * x * k_sum


def _k1_steed(x: float) -> float:
    # Temme's continued fraction for K0, K1 (Steed's algorithm), order mu = 0.
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-17:
            break
    else:
        raise ArithmeticError(f"K1 continued fraction did not converge at x={x}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    return k0 * (x + 0.5 - h) / x


def bessel_k1(x: float) -> float:
    """K_1(x) for x > 0.

    Power series for x <= 2, Temme's continued fraction above.  Underflows to
    0 past x ~ 705.
    """
    x = float(x)
    if not x > 0 or math.isnan(x):
        raise ValueError(f"bessel_k1 requires x > 0, got {x!r}")
    if math.isinf(x):
        return 0.0
    if x <= 2.0:
        return _k1_series(x)
    if x > 745.0:
        return 0.0
    return _k1_steed(x)
