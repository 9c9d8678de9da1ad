"""Airy Ai and Ai' for non-negative arguments.

Three regimes: Maclaurin series for small x (cancellation between the two
series grows like e^{2 zeta} so the switch happens early), asymptotic
expansion for large x, and in between a Taylor-stepped integration of
y'' = x y started from the asymptotic seed at the upper end. Integrating
toward smaller x is the stable direction for Ai (the admixed Bi component
decays relative to it).
"""

from __future__ import annotations

import math

_SERIES_MAX = 2.5
_ASYMPTOTIC_MIN = 9.0
_ODE_STEP = 0.4

_AI0 = 0.3550280538878172392600631860041831763980  # Ai(0) = 3^(-2/3)/Gamma(2/3)
_AIP0 = -0.2588194037928067984051835601892039634793  # Ai'(0) = -3^(-1/3)/Gamma(1/3)


def _maclaurin(x):
    x3 = x * x * x
    f, tf = 1.0, 1.0
    g, tg = x, x
    df, tdf = 0.0, 1.0
    dg, tdg = 1.0, 1.0
    k = 1
    while True:
        tf *= x3 / ((3 * k) * (3 * k - 1))
        tg *= x3 / ((3 * k + 1) * (3 * k))
        f += tf
        g += tg
        # derivative series: f' has terms x^{3k-1}/..., g' terms x^{3k}/...
        tdf = tf * (3 * k) / x if x != 0 else 0.0
        tdg = tg * (3 * k + 1) / x if x != 0 else 0.0
        df += tdf
        dg += tdg
        if abs(tf) < 1e-18 * abs(f) and abs(tg) < 1e-18 * abs(g):
            break
        k += 1
        if k > 200:
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * df + _AIP0 * dg
    return ai, aip


def _asymptotic(x):
    zeta = 2.0 / 3.0 * x**1.5
    u, v = 1.0, 1.0
    su, sv = 1.0, 1.0
    term_u = 1.0
    sign = -1.0
    prev = math.inf
    for k in range(1, 40):
        term_u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        tu = term_u / zeta**k
        if tu > prev:  # past the optimal truncation point
            break
        prev = tu
        tv = tu * (6 * k + 1) / (1.0 - 6 * k)
        su += sign * tu
        sv += sign * tv
        sign = -sign
    pre = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    ai = pre * su / x**0.25
    aip = -pre * sv * x**0.25
    return ai, aip


def _taylor_step(x0, a0, a1, h, terms=26):
    """Advance (Ai, Ai') from x0 to x0+h via Taylor coefficients of y''=x*y."""
    c = [a0, a1]
    for n in range(terms - 2):
        prev = c[n - 1] if n >= 1 else 0.0
        c.append((x0 * c[n] + prev) / ((n + 1) * (n + 2)))
    y = 0.0
    dy = 0.0
    for n in range(len(c) - 1, -1, -1):
        y = y * h + c[n]
    for n in range(len(c) - 1, 0, -1):
        dy = dy * h + n * c[n]
    return y, dy


def ai_and_aip(x: float):
    """(Ai(x), Ai'(x)) for x >= 0, accurate to ~1e-12 relative."""
    if x < 0 or not math.isfinite(x):
        raise ValueError(f"argument must be finite and non-negative, got {x}")
    if x <= _SERIES_MAX:
        return _maclaurin(x)
    if x >= _ASYMPTOTIC_MIN:
        return _asymptotic(x)
    x0 = _ASYMPTOTIC_MIN
    a, ap = _asymptotic(x0)
    while x0 - x > _ODE_STEP:
        a, ap = _taylor_step(x0, a, ap, -_ODE_STEP)
        x0 -= _ODE_STEP
    return _taylor_step(x0, a, ap, x - x0)


def ai(x: float) -> float:
    return ai_and_aip(x)[0]


def aip(x: float) -> float:
    return ai_and_aip(x)[1]
