"""Analytic gradients checked against finite differences of the tensors."""

import numpy as np
import pytest

from fockgates import gradients, tensors
from fockgates.exponents import GaussianSpec, TwoModeSpec, build_general, build_two_mode
from fockgates.gradients import (
    REAL,
    WIRTINGER,
    ExponentJacobian,
    amplitude_gradient_two_mode_squeezer,
    combine_upstream,
    finite_difference_jacobians,
    grad_from_jacobian,
    jacobians_all_params,
    phase_gradient_single_param,
    polar_chain,
    single_mode_displacement_jacobians,
    single_mode_jacobians,
    two_mode_jacobians,
)

from conftest import random_unitary

H = 1e-5


def central(f, h=H):
    """Five-point central difference of a tensor-valued map at 0."""
    return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)


def rel_err(a, b):
    scale = max(np.abs(b).max(), 1e-12)
    return np.abs(a - b).max() / scale


def single_mode_tensor(g, phi, z, N=7):
    return tensors.single_mode_gaussian(g, phi, z, N).data


def test_single_mode_jacobians_vs_fd():
    g, phi, z = 0.4 - 0.3j, 0.7, 0.5 * np.exp(0.9j)
    N = 7
    G = tensors.single_mode_gaussian(g, phi, z, N)
    jacs = {j.param: j for j in single_mode_jacobians(g, phi, z)}
    r, delta = abs(z), np.angle(z)

    fd = {
        "phi": central(lambda h: single_mode_tensor(g, phi + h, z, N)),
        "r": central(lambda h: single_mode_tensor(g, phi, (r + h) * np.exp(1j * delta), N)),
        "delta": central(lambda h: single_mode_tensor(g, phi, r * np.exp(1j * (delta + h)), N)),
    }
    for name, ref in fd.items():
        got = grad_from_jacobian(G, jacs[name]).data
        assert rel_err(got, ref) < 1e-8, name

    dx = central(lambda h: single_mode_tensor(g + h, phi, z, N))
    dy = central(lambda h: single_mode_tensor(g + 1j * h, phi, z, N))
    dgamma = grad_from_jacobian(G, jacs["gamma"]).data
    dgamma_star = grad_from_jacobian(G, jacs["gamma*"]).data
    assert rel_err(dgamma + dgamma_star, dx) < 1e-8
    assert rel_err(1j * (dgamma - dgamma_star), dy) < 1e-8


def test_displacement_closed_form_jacobians():
    g, phi, z = 0.6 + 0.2j, 0.4, 0.3 - 0.5j
    full = {j.param: j for j in single_mode_jacobians(g, phi, z)}
    jg, jgs = single_mode_displacement_jacobians(g, phi, z)
    for closed, name in ((jg, "gamma"), (jgs, "gamma*")):
        ref = full[name]
        assert abs(closed.dC_over_C - ref.dC_over_C) < 1e-13
        assert np.allclose(closed.dmu, ref.dmu, atol=1e-13)
        assert np.allclose(closed.dSigma, ref.dSigma, atol=1e-13)


def test_fd_jacobians_match_analytic(rng):
    spec = GaussianSpec.create(
        rng.normal(size=2) + 1j * rng.normal(size=2),
        random_unitary(rng, 2),
        0.5 * (rng.normal(size=2) + 1j * rng.normal(size=2)),
        random_unitary(rng, 2),
    )
    ana = {j.param: j for j in jacobians_all_params(spec)}
    for j in finite_difference_jacobians(spec, step=1e-6):
        a = ana[j.param]
        assert j.kind == a.kind
        assert abs(j.dC_over_C - a.dC_over_C) < 1e-7, j.param
        assert np.abs(j.dmu - a.dmu).max() < 1e-7, j.param
        assert np.abs(j.dSigma - a.dSigma).max() < 1e-7, j.param


def two_mode_tensor(spec, N=5):
    return tensors.general_gaussian_tensor(build_two_mode(spec), 2, N).data


def test_two_mode_jacobians_vs_fd():
    spec = TwoModeSpec(
        gamma=(0.3 - 0.1j, 0.2j), phi=(0.5, -0.4), theta_w=0.6, varphi_w=0.9,
        zeta=(0.4, 0.3 * np.exp(0.7j)), theta_v=0.8, varphi_v=0.2,
    )
    N = 5
    G = tensors.general_gaussian_tensor(build_two_mode(spec), 2, N)
    jacs = {j.param: j for j in two_mode_jacobians(spec)}

    def bump(**kw):
        d = spec.__dict__ | kw
        return TwoModeSpec(**d)

    r = np.abs(spec.zeta)
    delta = np.angle(np.asarray(spec.zeta, complex))

    checks = {
        "phi[0]": lambda h: two_mode_tensor(bump(phi=(spec.phi[0] + h, spec.phi[1])), N),
        "theta_w": lambda h: two_mode_tensor(bump(theta_w=spec.theta_w + h), N),
        "varphi_w": lambda h: two_mode_tensor(bump(varphi_w=spec.varphi_w + h), N),
        "r[1]": lambda h: two_mode_tensor(
            bump(zeta=(spec.zeta[0], (r[1] + h) * np.exp(1j * delta[1]))), N
        ),
        "delta[0]": lambda h: two_mode_tensor(
            bump(zeta=((r[0]) * np.exp(1j * (delta[0] + h)), spec.zeta[1])), N
        ),
        "theta_v": lambda h: two_mode_tensor(bump(theta_v=spec.theta_v + h), N),
        "varphi_v": lambda h: two_mode_tensor(bump(varphi_v=spec.varphi_v + h), N),
    }
    for name, f in checks.items():
        got = grad_from_jacobian(G, jacs[name]).data
        assert rel_err(got, central(f)) < 1e-7, name

    dx = central(lambda h: two_mode_tensor(bump(gamma=(spec.gamma[0] + h, spec.gamma[1])), N))
    dg = grad_from_jacobian(G, jacs["gamma[0]"]).data
    dgs = grad_from_jacobian(G, jacs["gamma[0]*"]).data
    assert rel_err(dg + dgs, dx) < 1e-7


def test_interferometer_spec_jacobians_three_modes(rng):
    spec = GaussianSpec.create(
        0.2 * (rng.normal(size=3) + 1j * rng.normal(size=3)),
        random_unitary(rng, 3),
        0.3 * (rng.normal(size=3) + 1j * rng.normal(size=3)),
        random_unitary(rng, 3),
    )
    N = 4
    G = tensors.general_gaussian_tensor(build_general(spec), 3, N)
    jacs = {j.param: j for j in jacobians_all_params(spec)}

    def with_r(j, h):
        r = spec.r.copy()
        r[j] += h
        s2 = GaussianSpec(gamma=spec.gamma, W=spec.W, r=r, delta=spec.delta, V=spec.V)
        return tensors.general_gaussian_tensor(build_general(s2), 3, N).data

    got = grad_from_jacobian(G, jacs["r[2]"]).data
    assert rel_err(got, central(lambda h: with_r(2, h))) < 1e-7


def test_combine_upstream_real_param():
    g, phi, z = 0.5, 0.3, 0.4
    N = 6
    G = tensors.single_mode_gaussian(g, phi, z, N)
    jac = {j.param: j for j in single_mode_jacobians(g, phi, z)}["r"]
    dG = grad_from_jacobian(G, jac)
    rng = np.random.default_rng(7)
    up = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    got = combine_upstream(up, dG, dG)
    expected = 2 * np.real(np.sum(np.conj(up) * dG.data))
    assert abs(got - expected) < 1e-12
    assert abs(got.imag if isinstance(got, complex) else 0) < 1e-12


def test_combine_upstream_shape_check():
    G = tensors.displacement(0.1, 4)
    with pytest.raises(ValueError):
        combine_upstream(np.zeros((3, 3)), G, G)


def test_polar_chain():
    """Check dL/dr and dL/dphase against direct differentiation of a toy loss."""
    xi = 0.7 * np.exp(0.4j)

    def loss(x):
        return abs(x - (0.2 + 0.5j)) ** 2

    # L = |xi - c|^2 has dL/dxi* = xi - c
    dstar = xi - (0.2 + 0.5j)
    dr, dphi = polar_chain(dstar, xi)
    h = 1e-6
    r, ph = abs(xi), np.angle(xi)
    fr = (loss((r + h) * np.exp(1j * ph)) - loss((r - h) * np.exp(1j * ph))) / (2 * h)
    fp = (loss(r * np.exp(1j * (ph + h))) - loss(r * np.exp(1j * (ph - h)))) / (2 * h)
    assert abs(dr - fr) < 1e-8
    assert abs(dphi - fp) < 1e-8
    dr0, dphi0 = polar_chain(0.3 + 0.1j, 0.0)
    assert dphi0 == 0.0 and abs(dr0 - 0.6) < 1e-14


def test_phase_gradient_single_param():
    z = 0.5 * np.exp(0.8j)
    N = 8
    r, delta = abs(z), np.angle(z)
    G = tensors.squeezer(z, N)
    got = phase_gradient_single_param(G, 0.5).data
    # d/ddelta S(r e^{i delta}) = i/2 (m - n) S elementwise
    ref = central(lambda h: tensors.squeezer(r * np.exp(1j * (delta + h)), N).data)
    assert rel_err(got, ref) < 1e-9


def test_two_mode_squeezer_amplitude_gradient():
    z = 0.6 * np.exp(0.3j)
    N = 6
    r, eps = abs(z), np.angle(z)
    S2 = tensors.two_mode_squeezer(z, N + 1)
    got = amplitude_gradient_two_mode_squeezer(S2, eps).data
    ref = central(lambda h: tensors.two_mode_squeezer((r + h) * np.exp(1j * eps), N).data)
    assert rel_err(got, ref) < 1e-8


def test_grad_dimension_check():
    G = tensors.displacement(0.2, 5)
    jac = ExponentJacobian(0.0, np.zeros(4), np.zeros((4, 4)), "x", REAL)
    with pytest.raises(ValueError):
        grad_from_jacobian(G, jac)
