"""Analytic parameter gradients of gate tensors.

The derivative of a gate tensor with respect to any parameter is a linear
combination of index-shifted copies of the tensor itself, weighted by the
derivatives of the exponent triple (C, mu, Sigma). This module provides the
exponent jacobians for the supported parametrizations, the shifted-tensor
combination, and the chain-rule plumbing for complex (Wirtinger) and polar
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exponents import (
    GaussianSpec,
    GeneratingExponent,
    TwoModeSpec,
    beamsplitter_matrix,
    build_general,
    two_mode_unitaries,
)
from .tensors import GateTensor

REAL = "real"
WIRTINGER = "complex_holomorphic_pair"


@dataclass(frozen=True)
class ExponentJacobian:
    """Derivative of (C, mu, Sigma) along one real or Wirtinger direction."""

    dC_over_C: complex
    dmu: np.ndarray
    dSigma: np.ndarray
    param: str
    kind: str = REAL

    def __post_init__(self):
        object.__setattr__(self, "dmu", np.asarray(self.dmu, dtype=complex))
        S = np.asarray(self.dSigma, dtype=complex)
        object.__setattr__(self, "dSigma", (S + S.T) / 2)


def _shifted(data, shifts):
    """data indexed at k - shifts, zero outside the tensor."""
    out = np.zeros_like(data)
    src = []
    dst = []
    for s in shifts:
        src.append(slice(None, -s) if s else slice(None))
        dst.append(slice(s, None) if s else slice(None))
    out[tuple(dst)] = data[tuple(src)]
    return out


def _axis_factor(data, axis, values):
    shape = [1] * data.ndim
    shape[axis] = -1
    return values.reshape(shape)


def grad_from_jacobian(G: GateTensor, jac: ExponentJacobian) -> GateTensor:
    """dG/dxi from the four-term shifted-tensor combination."""
    dim = 2 * G.modes
    if jac.dmu.shape[0] != dim:
        raise ValueError(f"jacobian dimension {jac.dmu.shape[0]} != {dim}")
    N = G.cutoff
    data = G.data
    k = np.arange(N, dtype=float)
    sqrt_k = np.sqrt(k)
    sqrt_kk1 = np.sqrt(k * (k - 1))

    out = jac.dC_over_C * data
    for i in range(dim):
        if jac.dmu[i] != 0:
            shifts = [0] * dim
            shifts[i] = 1
            out += jac.dmu[i] * _axis_factor(data, i, sqrt_k) * _shifted(data, shifts)
    for i in range(dim):
        for j in range(i):
            if jac.dSigma[i, j] != 0:
                shifts = [0] * dim
                shifts[i] = 1
                shifts[j] = 1
                out -= (
                    jac.dSigma[i, j]
                    * _axis_factor(data, i, sqrt_k)
                    * _axis_factor(data, j, sqrt_k)
                    * _shifted(data, shifts)
                )
        if jac.dSigma[i, i] != 0:
            shifts = [0] * dim
            shifts[i] = 2
            out -= 0.5 * jac.dSigma[i, i] * _axis_factor(data, i, sqrt_kk1) * _shifted(data, shifts)
    return GateTensor(modes=G.modes, cutoff=N, data=out)


# ---------------------------------------------------------------------------
# Exponent jacobians
# ---------------------------------------------------------------------------


def _assemble(W, V, g, gc, t, s, E, dW=None, dV=None, dg=None, dgc=None,
              dT=None, dS=None, dTbar=None, dlog=0.0, param="", kind=REAL):
    """Product rule over the block closed forms of (C, mu, Sigma).

    ``g`` and ``gc`` are the displacement vector and its conjugate treated as
    independent variables; ``t, s, E`` are tanh r, sech r, e^{i delta}.
    """
    ell = len(g)
    Z = np.zeros((ell, ell), dtype=complex)
    zv = np.zeros(ell, dtype=complex)
    dW = Z if dW is None else dW
    dV = Z if dV is None else dV
    dT = Z if dT is None else dT
    dS = Z if dS is None else dS
    dTbar = Z if dTbar is None else dTbar
    dg = zv if dg is None else dg
    dgc = zv if dgc is None else dgc

    T = np.diag(E * t)
    Sm = np.diag(s)
    Tb = np.diag(np.conj(E) * t)
    A = W @ T @ W.T
    B = W @ Sm @ V
    dA = dW @ T @ W.T + W @ dT @ W.T + W @ T @ dW.T
    dB = dW @ Sm @ V + W @ dS @ V + W @ Sm @ dV
    dCq = dV.T @ Tb @ V + V.T @ dTbar @ V + V.T @ Tb @ dV

    dC_over_C = -0.5 * (dgc @ g + gc @ dg + dgc @ A @ gc + gc @ dA @ gc + gc @ A @ dgc) + dlog
    dmu = np.concatenate([dgc @ A + gc @ dA + dg, -(dgc @ B + gc @ dB)])
    dSigma = np.block([[dA, -dB], [-dB.T, -dCq]])
    return ExponentJacobian(dC_over_C=complex(dC_over_C), dmu=dmu, dSigma=dSigma,
                            param=param, kind=kind)


def _unit(ell, j):
    M = np.zeros((ell, ell), dtype=complex)
    M[j, j] = 1.0
    return M


def _bloch_messiah_jacobians(W, V, gamma, r, delta, with_W_phase=False):
    """Analytic jacobians for gamma (Wirtinger pairs), r and delta.

    ``with_W_phase`` additionally emits d/dphi with W = e^{i phi} (single
    mode only).
    """
    ell = len(gamma)
    g = np.asarray(gamma, dtype=complex)
    gc = np.conj(g)
    t, s, E = np.tanh(r), 1 / np.cosh(r), np.exp(1j * delta)
    base = dict(W=W, V=V, g=g, gc=gc, t=t, s=s, E=E)
    ev = np.eye(ell, dtype=complex)

    jacs = []
    for j in range(ell):
        tag = f"[{j}]" if ell > 1 else ""
        jacs.append(_assemble(**base, dg=ev[j], param=f"gamma{tag}", kind=WIRTINGER))
        jacs.append(_assemble(**base, dgc=ev[j], param=f"gamma{tag}*", kind=WIRTINGER))
    if with_W_phase:
        jacs.append(_assemble(**base, dW=1j * W, param="phi"))
    for j in range(ell):
        tag = f"[{j}]" if ell > 1 else ""
        jacs.append(
            _assemble(
                **base,
                dT=E[j] * s[j] ** 2 * _unit(ell, j),
                dS=-s[j] * t[j] * _unit(ell, j),
                dTbar=np.conj(E[j]) * s[j] ** 2 * _unit(ell, j),
                dlog=-0.5 * t[j],
                param=f"r{tag}",
            )
        )
        jacs.append(
            _assemble(
                **base,
                dT=1j * E[j] * t[j] * _unit(ell, j),
                dTbar=-1j * np.conj(E[j]) * t[j] * _unit(ell, j),
                param=f"delta{tag}",
            )
        )
    return jacs


def single_mode_jacobians(gamma: complex, phi: float, zeta: complex):
    """The five jacobians of D(gamma) R(phi) S(zeta): gamma pair, phi, r, delta."""
    spec = GaussianSpec.create([gamma], np.array([[np.exp(1j * phi)]]), [zeta], np.eye(1))
    return _bloch_messiah_jacobians(spec.W, spec.V, spec.gamma, spec.r, spec.delta,
                                    with_W_phase=True)


def single_mode_displacement_jacobians(gamma: complex, phi: float, zeta: complex):
    """Wirtinger pair (d/dgamma, d/dgamma*) in closed form."""
    z = np.abs(zeta)
    delta = np.angle(zeta) if z > 0 else 0.0
    t, s = np.tanh(z), 1 / np.cosh(z)
    E = np.exp(1j * (delta + 2 * phi))
    gc = np.conj(gamma)
    jac_gamma = ExponentJacobian(
        dC_over_C=-gc / 2,
        dmu=np.array([1.0, 0.0], dtype=complex),
        dSigma=np.zeros((2, 2), dtype=complex),
        param="gamma",
        kind=WIRTINGER,
    )
    jac_gamma_star = ExponentJacobian(
        dC_over_C=-gamma / 2 - gc * E * t,
        dmu=np.array([E * t, -np.exp(1j * phi) * s], dtype=complex),
        dSigma=np.zeros((2, 2), dtype=complex),
        param="gamma*",
        kind=WIRTINGER,
    )
    return jac_gamma, jac_gamma_star


def _beamsplitter_angle_derivatives(theta, varphi):
    ct, st = np.cos(theta), np.sin(theta)
    dtheta = np.array(
        [[-st, -np.exp(-1j * varphi) * ct], [np.exp(1j * varphi) * ct, -st]], dtype=complex
    )
    dvarphi = np.array(
        [[0, 1j * np.exp(-1j * varphi) * st], [1j * np.exp(1j * varphi) * st, 0]], dtype=complex
    )
    return dtheta, dvarphi


def two_mode_jacobians(spec: TwoModeSpec):
    """All 14 real-coordinate jacobians of the general two-mode gate."""
    W, V = two_mode_unitaries(spec)
    g = np.asarray(spec.gamma, dtype=complex)
    r, delta = np.abs(spec.zeta), np.where(np.abs(spec.zeta) == 0, 0.0,
                                           np.mod(np.angle(np.asarray(spec.zeta, complex)), 2 * np.pi))
    gc = np.conj(g)
    t, s, E = np.tanh(r), 1 / np.cosh(r), np.exp(1j * delta)
    base = dict(W=W, V=V, g=g, gc=gc, t=t, s=s, E=E)
    ev = np.eye(2, dtype=complex)

    jacs = []
    for j in range(2):
        jacs.append(_assemble(**base, dg=ev[j], param=f"gamma[{j}]", kind=WIRTINGER))
        jacs.append(_assemble(**base, dgc=ev[j], param=f"gamma[{j}]*", kind=WIRTINGER))

    P = np.diag(np.exp(1j * np.asarray(spec.phi, dtype=float)))
    Bw = beamsplitter_matrix(spec.theta_w, spec.varphi_w)
    for j in range(2):
        dP = np.zeros((2, 2), dtype=complex)
        dP[j, j] = 1j * P[j, j]
        jacs.append(_assemble(**base, dW=dP @ Bw, param=f"phi[{j}]"))
    dBw_t, dBw_v = _beamsplitter_angle_derivatives(spec.theta_w, spec.varphi_w)
    jacs.append(_assemble(**base, dW=P @ dBw_t, param="theta_w"))
    jacs.append(_assemble(**base, dW=P @ dBw_v, param="varphi_w"))

    for j in range(2):
        jacs.append(
            _assemble(
                **base,
                dT=E[j] * s[j] ** 2 * _unit(2, j),
                dS=-s[j] * t[j] * _unit(2, j),
                dTbar=np.conj(E[j]) * s[j] ** 2 * _unit(2, j),
                dlog=-0.5 * t[j],
                param=f"r[{j}]",
            )
        )
        jacs.append(
            _assemble(
                **base,
                dT=1j * E[j] * t[j] * _unit(2, j),
                dTbar=-1j * np.conj(E[j]) * t[j] * _unit(2, j),
                param=f"delta[{j}]",
            )
        )

    dV_t, dV_v = _beamsplitter_angle_derivatives(spec.theta_v, spec.varphi_v)
    jacs.append(_assemble(**base, dV=dV_t, param="theta_v"))
    jacs.append(_assemble(**base, dV=dV_v, param="varphi_v"))
    return jacs


def jacobians_all_params(spec):
    """One jacobian per independent real coordinate of the parametrization.

    Complex displacements contribute Wirtinger pairs. For a raw GaussianSpec
    the interferometer matrices W and V carry no parametrization, so only the
    gamma, r and delta coordinates are emitted (the single-mode case also
    gets the W phase); the paper-quoted count 2l^2+3l assumes an angle
    parametrization of (W, V) it never specifies.
    """
    if isinstance(spec, TwoModeSpec):
        return two_mode_jacobians(spec)
    if isinstance(spec, GaussianSpec):
        return _bloch_messiah_jacobians(
            spec.W, spec.V, spec.gamma, spec.r, spec.delta, with_W_phase=spec.modes == 1
        )
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def finite_difference_jacobians(spec: GaussianSpec, step: float = 1e-6):
    """Central finite differences of (C, mu, Sigma) over gamma, r, delta.

    Returns Wirtinger pairs for gamma. Intended as an independent check of
    the analytic jacobians and as the fallback for exotic parametrizations.
    """
    ell = spec.modes

    def build(gamma, r, delta):
        zeta = r * np.exp(1j * delta)
        return build_general(GaussianSpec.create(gamma, spec.W, zeta, spec.V))

    e0 = build(spec.gamma, spec.r, spec.delta)

    def diff(plus: GeneratingExponent, minus: GeneratingExponent, h):
        return (
            (plus.C - minus.C) / (2 * h * e0.C),
            (plus.mu - minus.mu) / (2 * h),
            (plus.Sigma - minus.Sigma) / (2 * h),
        )

    jacs = []
    for j in range(ell):
        tag = f"[{j}]" if ell > 1 else ""
        parts = []
        for direction in (1.0, 1.0j):
            gp, gm = spec.gamma.copy(), spec.gamma.copy()
            gp[j] += step * direction
            gm[j] -= step * direction
            parts.append(diff(build(gp, spec.r, spec.delta), build(gm, spec.r, spec.delta), step))
        (dcx, dmx, dsx), (dcy, dmy, dsy) = parts
        jacs.append(ExponentJacobian((dcx - 1j * dcy) / 2, (dmx - 1j * dmy) / 2,
                                     (dsx - 1j * dsy) / 2, f"gamma{tag}", WIRTINGER))
        jacs.append(ExponentJacobian((dcx + 1j * dcy) / 2, (dmx + 1j * dmy) / 2,
                                     (dsx + 1j * dsy) / 2, f"gamma{tag}*", WIRTINGER))
    for j in range(ell):
        tag = f"[{j}]" if ell > 1 else ""
        for name, vec in (("r", spec.r), ("delta", spec.delta)):
            vp, vm = vec.copy(), vec.copy()
            vp[j] += step
            vm[j] -= step
            if name == "r":
                dc, dm, ds = diff(build(spec.gamma, vp, spec.delta),
                                  build(spec.gamma, vm, spec.delta), step)
            else:
                dc, dm, ds = diff(build(spec.gamma, spec.r, vp),
                                  build(spec.gamma, spec.r, vm), step)
            jacs.append(ExponentJacobian(dc, dm, ds, f"{name}{tag}", REAL))
    return jacs


# ---------------------------------------------------------------------------
# Chain rule
# ---------------------------------------------------------------------------


def combine_upstream(up: np.ndarray, dG_dxi: GateTensor, dG_dxistar: GateTensor) -> complex:
    """dL/dxi* from the upstream cotangent dL/dG* and the two local gradients.

    Assumes a real-valued loss, so dL/dG is the conjugate of the upstream
    tensor. For a real parameter pass the same tensor twice; the result is
    then 2 Re(sum dL/dG * dG/dx).
    """
    up = np.asarray(up)
    if up.shape != dG_dxi.data.shape or up.shape != dG_dxistar.data.shape:
        raise ValueError("cotangent and gradient shapes disagree")
    return complex(np.sum(up * np.conj(dG_dxi.data)) + np.sum(np.conj(up) * dG_dxistar.data))


def polar_chain(dL_dxistar: complex, xi: complex):
    """(dL/dr, dL/dphi) for xi = r e^{i phi}; the phase gradient is 0 at xi = 0."""
    if xi == 0:
        return 2 * np.real(dL_dxistar), 0.0
    phase = np.exp(-1j * np.angle(xi))
    dr = 2 * np.real(dL_dxistar * phase)
    dphi = -2 * np.real(dL_dxistar * 1j * np.conj(xi))
    return float(dr), float(dphi)


def phase_gradient_single_param(G: GateTensor, s: float) -> GateTensor:
    """d/depsilon of a single-complex-parameter gate: i*s*(m1 - n1) elementwise."""
    N = G.cutoff
    m1 = np.arange(N).reshape((N,) + (1,) * (2 * G.modes - 1))
    n1 = np.arange(N).reshape((N,) + (1,) * (G.modes - 1))
    data = 1j * s * (m1 - n1) * G.data
    return GateTensor(modes=G.modes, cutoff=N, data=data)


def amplitude_gradient_two_mode_squeezer(S2: GateTensor, epsilon: float) -> GateTensor:
    """d/dr of the two-mode squeezer from its own matrix elements.

    ``S2`` must be built with one row of headroom (cutoff N+1); the returned
    gradient has cutoff N. The combination looks one ket step up and one
    down, so the headroom keeps the upward term exact on the truncation.
    """
    if S2.modes != 2:
        raise ValueError("expected a two-mode tensor")
    Np = S2.cutoff
    N = Np - 1
    d = S2.data
    n1 = np.arange(N, dtype=float)
    n2 = np.arange(N, dtype=float)
    up = np.sqrt((n1[:, None] + 1) * (n2[None, :] + 1)) * d[:N, :N, 1 : N + 1, 1 : N + 1]
    down = np.zeros((N, N, N, N), dtype=complex)
    down[:, :, 1:, 1:] = np.sqrt(n1[1:, None] * n2[None, 1:]) * d[:N, :N, : N - 1, : N - 1]
    out = np.exp(1j * epsilon) * up - np.exp(-1j * epsilon) * down
    return GateTensor(modes=2, cutoff=N, data=out)
