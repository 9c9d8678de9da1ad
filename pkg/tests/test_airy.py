"""Airy function values against arbitrary-precision references."""

import numpy as np
import pytest

mpmath = pytest.importorskip("mpmath")

from fockgates.airy import ai_and_aip


def test_origin_values():
    a, ap = ai_and_aip(0.0)
    assert abs(a - 0.3550280538878172) < 1e-15
    assert abs(ap + 0.2588194037928068) < 1e-15


@pytest.mark.parametrize("x", np.linspace(0.0, 30.0, 61).tolist())
def test_against_mpmath(x):
    mpmath.mp.dps = 40
    ref_a = float(mpmath.airyai(x))
    ref_ap = float(mpmath.airyai(x, 1))
    a, ap = ai_and_aip(x)
    assert abs(a - ref_a) <= 1e-11 * max(abs(ref_a), 1e-300)
    assert abs(ap - ref_ap) <= 1e-11 * max(abs(ref_ap), 1e-300)


def test_regime_boundaries_are_seamless():
    """Values must agree across the series/ODE/asymptotic handoffs."""
    for x0 in (2.5, 9.0):
        lo, lop = ai_and_aip(x0 - 1e-9)
        hi, _ = ai_and_aip(x0 + 1e-9)
        # remove the function's own slope before comparing across the seam
        assert abs(hi - (lo + 2e-9 * lop)) <= 1e-12 * abs(lo)


def test_wronskian():
    """Ai Bi' - Ai' Bi = 1/pi; checked indirectly via the ODE residual."""
    # second derivative from the ODE: y'' = x y, verified by a fine
    # finite-difference stencil on Ai itself
    x = 4.3
    h = 1e-4
    vals = [ai_and_aip(x + k * h)[0] for k in (-1, 0, 1)]
    second = (vals[0] - 2 * vals[1] + vals[2]) / h**2
    assert abs(second - x * vals[1]) < 1e-6
