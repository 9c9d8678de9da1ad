"""Kerr, cubic-phase and quartic-phase gates in the Fock basis.

The cubic and quartic gates exp(i eta q^k / (k hbar)) have symmetric matrices
V_{mn} filled by three-term-in-the-column recurrences from a handful of
closed-form seeds (Airy functions for the cubic gate, moments of a quartic
Gaussian integral for the quartic one). The recurrences are only stable for
eta > 1; below that the public constructors fall back to direct quadrature
and emit a FellBackToOracle warning.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .airy import ai_and_aip
from .tensors import GateTensor

DEFAULT_HBAR = 2.0


class UnstableRegimeError(ValueError):
    """The recurrence path is unreliable for this parameter regime."""


class FellBackToOracle(UserWarning):
    """A constructor silently used the quadrature oracle instead of the recurrence."""


class QuadratureError(RuntimeError):
    """The quadrature oracle could not reach the requested accuracy."""


@dataclass(frozen=True)
class KerrSpec:
    kappa: float
    cutoff: int


@dataclass(frozen=True)
class PhaseGateSpec:
    """exp(i eta q^order / (order * hbar)) truncated at ``cutoff``."""

    order: int
    eta: float
    cutoff: int
    hbar: float = DEFAULT_HBAR

    def __post_init__(self):
        if self.order not in (3, 4):
            raise ValueError(f"order must be 3 or 4, got {self.order}")
        if not np.isfinite(self.eta):
            raise ValueError(f"eta must be finite, got {self.eta}")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")


def kerr_diagonal(kappa: float, cutoff: int) -> np.ndarray:
    """Diagonal of exp(i kappa n^2)."""
    n = np.arange(cutoff)
    return np.exp(1j * kappa * n * n)


def kerr_tensor(spec: KerrSpec) -> GateTensor:
    return GateTensor(
        modes=1, cutoff=spec.cutoff, data=np.diag(kerr_diagonal(spec.kappa, spec.cutoff))
    )


def kerr_diagonal_gradient(kappa: float, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff)
    return 1j * n * n * np.exp(1j * kappa * n * n)


# ---------------------------------------------------------------------------
# quadrature oracle


def _hermite_functions(x, nmax):
    """Normalized Hermite functions h_0..h_nmax at scalar x."""
    h = np.empty(nmax + 1)
    h[0] = math.pi**-0.25 * math.exp(-0.5 * x * x)
    if nmax >= 1:
        h[1] = math.sqrt(2.0) * x * h[0]
    for n in range(2, nmax + 1):
        h[n] = math.sqrt(2.0 / n) * x * h[n - 1] - math.sqrt((n - 1.0) / n) * h[n - 2]
    return h


def quadrature_element(
    m: int,
    n: int,
    order: int,
    eta: float,
    hbar: float = DEFAULT_HBAR,
    tol: float = 1e-9,
) -> complex:
    """<m| exp(i eta q^order / (order hbar)) |n> by direct integration.

    In the dimensionless variable the phase is (eta/order) hbar^{order/2-1} x^order
    and the wavefunctions are normalized Hermite functions.
    """
    coeff = eta / order * hbar ** (order / 2.0 - 1.0)
    nmax = max(m, n)
    xmax = math.sqrt(2.0 * nmax + 1.0) + 9.0

    def f_re(x):
        h = _hermite_functions(x, nmax)
        return h[m] * h[n] * math.cos(coeff * x**order)

    def f_im(x):
        h = _hermite_functions(x, nmax)
        return h[m] * h[n] * math.sin(coeff * x**order)

    re, err_re = integrate.quad(f_re, -xmax, xmax, epsabs=1e-13, epsrel=1e-13, limit=500)
    im, err_im = integrate.quad(f_im, -xmax, xmax, epsabs=1e-13, epsrel=1e-13, limit=500)
    achieved = max(err_re, err_im)
    if achieved > tol:
        raise QuadratureError(
            f"quadrature for ({m},{n}) did not converge: error estimate {achieved:.3e} > {tol:.1e}"
        )
    return complex(re, im)


def quadrature_oracle(spec: PhaseGateSpec, tol: float = 1e-9) -> np.ndarray:
    """Full cutoff x cutoff matrix by quadrature; exact symmetry by construction."""
    N = spec.cutoff
    out = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(m, N):
            if spec.order == 4 and (m + n) % 2 == 1:
                continue  # odd in x, exactly zero
            v = quadrature_element(m, n, spec.order, spec.eta, spec.hbar, tol)
            out[m, n] = v
            out[n, m] = v
    return out


# ---------------------------------------------------------------------------
# cubic phase gate


def _cubic_seeds(eta, hbar):
    """V_00, V_01 and V_11 of the cubic gate from Airy functions."""
    y = (math.sqrt(hbar) * eta) ** (-1.0 / 3.0)
    a, ap = ai_and_aip(y**4)
    pre = 2.0 * math.sqrt(math.pi) * math.exp(2.0 * y**6 / 3.0)
    v00 = pre * abs(y) * a
    v01 = -1j * math.sqrt(2.0) * pre * y * y * (ap + y * y * a)
    v11 = -4.0 * pre * abs(y) ** 5 * (ap + y * y * a)
    return complex(v00), complex(v01), complex(v11), y


def _cubic_col(V, m, c, g):
    """V[m, c] from the in-column recurrence; g = 2*sqrt(2)/(sqrt(hbar)*eta)."""
    n = c - 2
    v = 1j * g * (-math.sqrt(m + 1.0) * V[m + 1, n])
    if n > 0:
        v += 1j * g * math.sqrt(n) * V[m, n - 1]
        v -= math.sqrt(n * (n - 1.0)) * V[m, n - 2]
    v -= (2 * n + 1.0) * V[m, n]
    return v / math.sqrt((n + 1.0) * (n + 2.0))


def _cubic_recurrence(eta, hbar, N):
    if eta <= 1.0:
        raise UnstableRegimeError(
            f"cubic recurrence is unstable for eta <= 1 (got eta = {eta}); use the quadrature oracle"
        )
    g = 2.0 * math.sqrt(2.0) / (math.sqrt(hbar) * eta)
    K = N + (N + 3) // 2 + 4
    R = max(N, 3)
    V = np.zeros((R, K), dtype=complex)
    v00, v01, v11, _ = _cubic_seeds(eta, hbar)
    V[0, 0] = v00
    V[0, 1] = v01
    V[1, 0] = v01
    V[1, 1] = v11
    # rows 0 and 1 march right together; row 2 trails two columns behind
    # because column c of row 1 needs V_{2, c-2}, which in turn needs
    # V_{0, c-1} from the row-increment form of the same recurrence.
    row2 = np.zeros(K, dtype=complex)
    for c in range(2, K):
        V[0, c] = _cubic_col(V, 0, c, g)
        n = c - 2
        row2[n] = (1j * g * (-math.sqrt(n + 1.0) * V[0, n + 1]) - V[0, n]) / math.sqrt(2.0)
        V[1, c] = (
            1j * g * (-math.sqrt(2.0) * row2[n]) - (2 * n + 1.0) * V[1, n]
        ) / math.sqrt((n + 1.0) * (n + 2.0))
        if n > 0:
            V[1, c] += (
                1j * g * math.sqrt(n) * V[1, n - 1] - math.sqrt(n * (n - 1.0)) * V[1, n - 2]
            ) / math.sqrt((n + 1.0) * (n + 2.0))
    avail = [K - 1, K - 1, K - 3]
    V[2, : K - 2] = row2[: K - 2]
    # remaining rows by the row-increment form m -> m+2, shrinking the
    # reachable column range by one every two rows.
    for t in range(3, N):
        m = t - 2
        top = min(avail[t - 2] - 1, avail[t - 1])
        pre = 1.0 / math.sqrt((m + 1.0) * (m + 2.0))
        for n in range(top + 1):
            v = 1j * g * (math.sqrt(m) * V[m - 1, n] - math.sqrt(n + 1.0) * V[m, n + 1])
            v -= (2 * m + 1.0) * V[m, n]
            if m > 1:
                v -= math.sqrt(m * (m - 1.0)) * V[m - 2, n]
            V[t, n] = v * pre
        avail.append(top)
        if top < N - 1:
            raise UnstableRegimeError("internal workspace too small for the requested cutoff")
    out = V[:N, :N].copy()
    return 0.5 * (out + out.T)


def cubic_phase(spec: PhaseGateSpec) -> GateTensor:
    """exp(i eta q^3 / (3 hbar)); recurrence for eta > 1, oracle otherwise."""
    if spec.order != 3:
        raise ValueError("spec.order must be 3")
    if spec.eta > 1.0:
        data = _cubic_recurrence(spec.eta, spec.hbar, spec.cutoff)
    else:
        warnings.warn(
            f"cubic recurrence is unstable for eta = {spec.eta} <= 1; "
            "falling back to the quadrature oracle",
            FellBackToOracle,
            stacklevel=2,
        )
        data = quadrature_oracle(spec)
    return GateTensor(modes=1, cutoff=spec.cutoff, data=data)


def cubic_amplitude_gradient(
    padded: np.ndarray, eta: float, hbar: float = DEFAULT_HBAR, cutoff: int | None = None
) -> np.ndarray:
    """d V^(3) / d eta from a tensor built at cutoff + 3.

    ``padded`` must be the (N+3) x (N+3) cubic-phase matrix; the result is
    the N x N gradient, N = cutoff (default: padded size minus three).
    """
    Np = padded.shape[0]
    N = Np - 3 if cutoff is None else cutoff
    if Np < N + 3:
        raise ValueError(f"padded matrix of size {Np} cannot produce a {N} x {N} gradient")
    out = np.zeros((N, N), dtype=complex)
    ns = np.arange(N, dtype=float)
    c3 = np.sqrt(np.maximum(ns * (ns - 1) * (ns - 2), 0.0))
    c1 = 3.0 * ns**1.5
    u1 = 3.0 * (ns + 1.0) ** 1.5
    u3 = np.sqrt((ns + 1.0) * (ns + 2.0) * (ns + 3.0))
    pre = 1j * math.sqrt(hbar) / (3.0 * 2.0**1.5)
    block = padded[:N]
    out += u1[None, :] * block[:, 1 : N + 1]
    out += u3[None, :] * block[:, 3 : N + 3]
    out[:, 1:] += c1[None, 1:] * block[:, 0 : N - 1]
    out[:, 3:] += c3[None, 3:] * block[:, 0 : N - 3]
    return pre * out


# ---------------------------------------------------------------------------
# quartic phase gate


def _quartic_f_derivatives(w):
    """f(w,1), df/dlambda and d2f/dlambda2 of f = (1/sqrt(pi)) Int exp(-x^2 + i w x^4 / 4).

    Derivatives in lambda (the Gaussian width, evaluated at 1) are moments:
    d^k_lambda f = ((-1)^k / sqrt(pi)) Int x^{2k} exp(-x^2 + i w x^4 / 4).
    """

    def moment(p):
        def f_re(x):
            return x**p * math.exp(-x * x) * math.cos(0.25 * w * x**4)

        def f_im(x):
            return x**p * math.exp(-x * x) * math.sin(0.25 * w * x**4)

        re, err_re = integrate.quad(f_re, -12, 12, epsabs=1e-13, epsrel=1e-13, limit=500)
        im, err_im = integrate.quad(f_im, -12, 12, epsabs=1e-13, epsrel=1e-13, limit=500)
        if max(err_re, err_im) > 1e-11:
            raise QuadratureError(
                f"quartic seed moment x^{p} did not converge (error {max(err_re, err_im):.3e})"
            )
        return complex(re, im) / math.sqrt(math.pi)

    f = moment(0)
    df = -moment(2)
    d2f = moment(4)
    return f, df, d2f


def _quartic_seeds(eta, hbar):
    """The independent seeds V_00, V_11, V_02, V_22 of the quartic gate."""
    w = hbar * eta
    f, df, d2f = _quartic_f_derivatives(w)
    v00 = f
    v11 = -2.0 * df
    v02 = (v11 - v00) / math.sqrt(2.0)
    v22 = 0.5 * v00 - v11 + 2.0 * d2f
    return v00, v11, v02, v22


def _quartic_col(V, m, c, g):
    """V[m, c] from the in-column recurrence; g = 4/(eta*hbar)."""
    n = c - 3
    v = 1j * g * (-math.sqrt(m + 1.0) * V[m + 1, n])
    v -= 3.0 * (n + 1.0) ** 1.5 * V[m, n + 1]
    if n > 0:
        v += 1j * g * math.sqrt(n) * V[m, n - 1]
        v -= 3.0 * n**1.5 * V[m, n - 1]
    if n > 2:
        v -= math.sqrt(n * (n - 1.0) * (n - 2.0)) * V[m, n - 3]
    return v / math.sqrt((n + 1.0) * (n + 2.0) * (n + 3.0))


def _quartic_recurrence(eta, hbar, N):
    if eta <= 1.0:
        raise UnstableRegimeError(
            f"quartic recurrence is unstable for eta <= 1 (got eta = {eta}); use the quadrature oracle"
        )
    g = 4.0 / (eta * hbar)
    K = N + (N + 5) // 3 + 6
    R = max(N, 4)
    V = np.zeros((R, K), dtype=complex)
    v00, v11, v02, v22 = _quartic_seeds(eta, hbar)
    V[0, 0] = v00
    V[1, 1] = v11
    V[0, 2] = v02
    V[2, 0] = v02
    V[2, 2] = v22
    # rows 0..2 march right together; row 3 trails via the row-increment
    # form (needed by column fills of row 2).
    row3 = np.zeros(K, dtype=complex)
    for c in range(3, K):
        V[0, c] = _quartic_col(V, 0, c, g)
        V[1, c] = _quartic_col(V, 1, c, g)
        n = c - 3
        # V_{3,n} from the row form at m = 0: only the V_{0,n+1} and V_{1,n}
        # terms survive.
        row3[n] = (
            1j * g * (-math.sqrt(n + 1.0) * V[0, n + 1]) - 3.0 * V[1, n]
        ) / math.sqrt(6.0)
        v = 1j * g * (-math.sqrt(3.0) * row3[n])
        v -= 3.0 * (n + 1.0) ** 1.5 * V[2, n + 1]
        if n > 0:
            v += (1j * g * math.sqrt(n) - 3.0 * n**1.5) * V[2, n - 1]
        if n > 2:
            v -= math.sqrt(n * (n - 1.0) * (n - 2.0)) * V[2, n - 3]
        V[2, c] = v / math.sqrt((n + 1.0) * (n + 2.0) * (n + 3.0))
    avail = [K - 1, K - 1, K - 1, K - 4]
    V[3, : K - 3] = row3[: K - 3]
    for t in range(4, N):
        m = t - 3
        top = min(avail[t - 3] - 1, avail[t - 2], avail[t - 4])
        if m > 2:
            top = min(top, avail[t - 6])
        pre = 1.0 / math.sqrt((m + 1.0) * (m + 2.0) * (m + 3.0))
        for n in range(top + 1):
            v = 1j * g * (-math.sqrt(n + 1.0) * V[m, n + 1])
            v -= 3.0 * (m + 1.0) ** 1.5 * V[m + 1, n]
            if m > 0:
                v += (1j * g * math.sqrt(m) - 3.0 * m**1.5) * V[m - 1, n]
            if m > 2:
                v -= math.sqrt(m * (m - 1.0) * (m - 2.0)) * V[m - 3, n]
            V[t, n] = v * pre
        avail.append(top)
        if top < N - 1:
            raise UnstableRegimeError("internal workspace too small for the requested cutoff")
    out = V[:N, :N].copy()
    out = 0.5 * (out + out.T)
    # parity: the gate is even in x, so odd-total entries vanish identically
    m_idx, n_idx = np.indices((N, N))
    out[(m_idx + n_idx) % 2 == 1] = 0.0
    return out


def quartic_phase(spec: PhaseGateSpec) -> GateTensor:
    """exp(i eta q^4 / (4 hbar)); recurrence for eta > 1, oracle otherwise."""
    if spec.order != 4:
        raise ValueError("spec.order must be 4")
    if spec.eta > 1.0:
        data = _quartic_recurrence(spec.eta, spec.hbar, spec.cutoff)
    else:
        warnings.warn(
            f"quartic recurrence is unstable for eta = {spec.eta} <= 1; "
            "falling back to the quadrature oracle",
            FellBackToOracle,
            stacklevel=2,
        )
        data = quadrature_oracle(spec)
    return GateTensor(modes=1, cutoff=spec.cutoff, data=data)


def phase_gate(spec: PhaseGateSpec) -> GateTensor:
    return cubic_phase(spec) if spec.order == 3 else quartic_phase(spec)
