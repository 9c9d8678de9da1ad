"""Generating-function exponents of Gaussian gates.

A Gaussian gate in Bloch-Messiah form ``D(gamma) U(W) S(zeta) U(V)`` has a
coherent-state generating function of the form ``C * exp(mu @ nu - nu @ Sigma @ nu / 2)``.
This module assembles the triple ``(C, mu, Sigma)`` for the general l-mode gate
and for the common single-mode, two-mode and interferometer parametrizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNITARY_TOL = 1e-12

# tanh r is +/-1 and sech r underflows to 0 well before this; beyond it we
# switch C to log-domain accumulation so cosh r cannot overflow.
_LARGE_R = 300.0


class NonUnitaryError(ValueError):
    """An interferometer matrix failed the unitarity check."""


def _check_unitary(U, name):
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {U.shape}")
    if not np.all(np.isfinite(U.view(float))):
        raise ValueError(f"{name} contains non-finite entries")
    dev = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
    if dev > UNITARY_TOL:
        raise NonUnitaryError(f"{name} deviates from unitarity by {dev:.3e} (> {UNITARY_TOL})")
    return U


def _check_finite(x, name):
    arr = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def _polar_squeezing(zeta):
    """Normalize complex squeezing parameters to (r >= 0, delta in [0, 2pi))."""
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    r = np.abs(zeta)
    delta = np.where(r == 0, 0.0, np.mod(np.angle(zeta), 2 * np.pi))
    # mod can round a tiny negative angle up to exactly 2*pi
    delta = np.where(delta >= 2 * np.pi, 0.0, delta)
    return r, delta


@dataclass(frozen=True)
class GaussianSpec:
    """Bloch-Messiah parameters of an l-mode Gaussian unitary.

    The squeezing is stored in polar form ``zeta_j = r_j * exp(1j * delta_j)``
    with ``r_j >= 0`` and ``delta_j in [0, 2pi)``.
    """

    gamma: np.ndarray
    W: np.ndarray
    r: np.ndarray
    delta: np.ndarray
    V: np.ndarray

    @classmethod
    def create(cls, gamma, W, zeta, V):
        gamma = np.atleast_1d(_check_finite(gamma, "gamma"))
        W = _check_unitary(W, "W")
        V = _check_unitary(V, "V")
        r, delta = _polar_squeezing(_check_finite(zeta, "zeta"))
        ell = gamma.shape[0]
        if W.shape != (ell, ell) or V.shape != (ell, ell) or r.shape != (ell,):
            raise ValueError("gamma, W, zeta, V disagree on the number of modes")
        return cls(gamma=gamma, W=W, r=r, delta=delta, V=V)

    @property
    def modes(self):
        return self.gamma.shape[0]


@dataclass(frozen=True)
class GeneratingExponent:
    """The triple (C, mu, Sigma) with Sigma symmetric and complex-unitary."""

    C: complex
    mu: np.ndarray
    Sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=complex))
        # kill rounding asymmetry once and for all; the recurrences assume
        # exact symmetry
        S = np.asarray(self.Sigma, dtype=complex)
        object.__setattr__(self, "Sigma", (S + S.T) / 2)

    @property
    def modes(self):
        return self.mu.shape[0] // 2


@dataclass(frozen=True)
class TwoModeSpec:
    """The 14 real parameters of the most general two-mode Gaussian gate.

    ``theta_w, varphi_w`` are the angles of the output beamsplitter (applied
    together with the phase pair ``phi``), ``theta_v, varphi_v`` those of the
    input beamsplitter.
    """

    gamma: tuple[complex, complex]
    phi: tuple[float, float]
    theta_w: float
    varphi_w: float
    zeta: tuple[complex, complex]
    theta_v: float
    varphi_v: float


def beamsplitter_matrix(theta, varphi):
    """2x2 unitary of the beamsplitter B(theta, varphi)."""
    ct, st = np.cos(theta), np.sin(theta)
    return np.array(
        [[ct, -np.exp(-1j * varphi) * st], [np.exp(1j * varphi) * st, ct]], dtype=complex
    )


def _tanh_sech(r):
    """Numerically stable tanh r and sech r for any r >= 0."""
    t = np.tanh(r)
    e = np.exp(-r)
    s = 2 * e / (1 + e * e)
    return t, s


def _log_cosh(r):
    # r + log((1 + exp(-2r)) / 2), safe for arbitrarily large r
    return r + np.log1p(np.exp(-2 * r)) - np.log(2.0)


def build_general(spec: GaussianSpec) -> GeneratingExponent:
    """Exponent of the general l-mode gate D(gamma) U(W) S(zeta) U(V)."""
    gamma, W, V = spec.gamma, spec.W, spec.V
    r, delta = spec.r, spec.delta
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise ValueError("squeezing amplitudes must be finite and non-negative")

    t, s = _tanh_sech(r)
    E = np.exp(1j * delta)
    WtW = (W * (E * t)) @ W.T          # W diag(e^{i delta} tanh r) W^T
    WsV = (W * s) @ V                  # W diag(sech r) V
    VtV = (V.T * (np.conj(E) * t)) @ V

    gd = np.conj(gamma)                # gamma^dagger as a row
    log_c = -0.5 * (gd @ gamma + gd @ WtW @ gd) - 0.5 * np.sum(_log_cosh(r))
    C = np.exp(log_c)

    mu = np.concatenate([gd @ WtW + gamma, -(gd @ WsV)])
    Sigma = np.block([[WtW, -WsV], [-WsV.T, -VtV]])
    return GeneratingExponent(C=complex(C), mu=mu, Sigma=Sigma)


def build_single_mode(gamma: complex, phi: float, zeta: complex) -> GeneratingExponent:
    """Exponent of the single-mode gate D(gamma) R(phi) S(zeta)."""
    for name, v in (("gamma", gamma), ("phi", phi), ("zeta", zeta)):
        if not np.all(np.isfinite([complex(v).real, complex(v).imag])):
            raise ValueError(f"{name} is not finite")
    spec = GaussianSpec.create(
        gamma=[gamma],
        W=np.array([[np.exp(1j * phi)]]),
        zeta=[zeta],
        V=np.eye(1),
    )
    return build_general(spec)


def two_mode_unitaries(spec: TwoModeSpec):
    """The (W, V) pair realizing the two-mode parametrization."""
    V = beamsplitter_matrix(spec.theta_v, spec.varphi_v)
    W = np.diag(np.exp(1j * np.asarray(spec.phi, dtype=float))) @ beamsplitter_matrix(
        spec.theta_w, spec.varphi_w
    )
    return W, V


def build_two_mode(spec: TwoModeSpec) -> GeneratingExponent:
    """Exponent of the general 14-parameter two-mode Gaussian gate."""
    W, V = two_mode_unitaries(spec)
    gspec = GaussianSpec.create(gamma=list(spec.gamma), W=W, zeta=list(spec.zeta), V=V)
    return build_general(gspec)


def build_two_mode_squeezer(zeta: complex) -> GeneratingExponent:
    """Exponent of S2(zeta) = B(-pi/4, 0) [S(zeta) x S(-zeta)] B(pi/4, 0)."""
    spec = TwoModeSpec(
        gamma=(0j, 0j),
        phi=(0.0, 0.0),
        theta_w=-np.pi / 4,
        varphi_w=0.0,
        zeta=(zeta, -zeta),
        theta_v=np.pi / 4,
        varphi_v=0.0,
    )
    return build_two_mode(spec)


def build_interferometer(V) -> GeneratingExponent:
    """Exponent of the passive transformation U(V): C = 1, mu = 0."""
    V = _check_unitary(V, "V")
    ell = V.shape[0]
    Z = np.zeros((ell, ell))
    Sigma = -np.block([[Z, V], [V.T, Z]])
    return GeneratingExponent(C=1.0 + 0j, mu=np.zeros(2 * ell, dtype=complex), Sigma=Sigma)
