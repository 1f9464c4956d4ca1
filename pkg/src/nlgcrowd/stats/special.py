"""Distribution tail probabilities built on the regularized incomplete beta.

Self-contained double-precision implementations so p-values do not depend on
an external statistics stack; the test suite pins them against fixtures
frozen from an independent reference implementation.
"""

from __future__ import annotations

from math import erfc, exp, lgamma, log, log1p, sqrt


class ConvergenceError(ArithmeticError):
    pass


_EPS = 1e-16
_FPMIN = 1e-300
_MAX_ITER = 500


def log_beta(a: float, b: float) -> float:
    return lgamma(a) + lgamma(b) - lgamma(a + b)


def _betacf(a: float, b: float, x: float) -> float:
    # Continued fraction for the incomplete beta (modified Lentz).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ConvergenceError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    front = exp(a * log(x) + b * log1p(-x) - log_beta(a, b))
    # Evaluate the continued fraction on the side where it converges fast.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_survival(f_stat: float, df1: int, df2: int) -> float:
    """Upper tail of the F distribution: P(F_{df1,df2} > f_stat)."""
    if f_stat < 0:
        raise ValueError("F statistic must be non-negative")
    if df1 < 1 or df2 < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if f_stat == 0.0:
        return 1.0
    x = df2 / (df2 + df1 * f_stat)
    return betainc(df2 / 2.0, df1 / 2.0, x)


def normal_sf(z: float) -> float:
    """Upper tail of the standard normal."""
    return 0.5 * erfc(z / sqrt(2.0))


def t_sf_two_sided(t_stat: float, df: int) -> float:
    """Two-sided tail of Student's t: P(|T_df| > |t_stat|)."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    t2 = t_stat * t_stat
    return betainc(df / 2.0, 0.5, df / (df + t2))
