"""Independent slow references for validating the recurrence fills.

The padded matrix exponential builds D, R and S from truncated ladder
operators at a cutoff several times larger than requested, multiplies the
exponentials, and returns the top-left block. Truncation error contaminates
the high corner first, so only a small leading block of the result is
trustworthy; callers compare 6x6 blocks.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm


def ladder(cutoff: int) -> np.ndarray:
    """Truncated annihilation operator."""
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1).astype(complex)


def padded_exponential_single_mode(
    gamma: complex, phi: float, zeta: complex, cutoff: int, pad_factor: int = 4
) -> np.ndarray:
    """D(gamma) R(phi) S(zeta) via expm at pad_factor * cutoff, truncated."""
    big = pad_factor * cutoff
    a = ladder(big)
    ad = a.conj().T
    n = ad @ a
    D = expm(gamma * ad - np.conj(gamma) * a)
    R = expm(1j * phi * n)
    S = expm(0.5 * (np.conj(zeta) * (a @ a) - zeta * (ad @ ad)))
    return (D @ R @ S)[:cutoff, :cutoff]


def padded_exponential_displacement(gamma: complex, cutoff: int, pad_factor: int = 4) -> np.ndarray:
    return padded_exponential_single_mode(gamma, 0.0, 0.0, cutoff, pad_factor)


def padded_exponential_squeezer(zeta: complex, cutoff: int, pad_factor: int = 4) -> np.ndarray:
    return padded_exponential_single_mode(0.0, 0.0, zeta, cutoff, pad_factor)


def padded_exponential_two_mode_squeezer(
    zeta: complex, cutoff: int, pad_factor: int = 3
) -> np.ndarray:
    """S2(zeta) = exp(zeta a^dag b^dag - zeta* a b) at pad_factor * cutoff.

    Returns the dense rank-4 tensor truncated to ``cutoff`` per axis. The
    single-pair element S2_{1,1,0,0} = e^{i delta} tanh(r) sech(r) pins the
    sign convention against the recurrence fill.
    """
    big = pad_factor * cutoff
    a = np.kron(ladder(big), np.eye(big))
    b = np.kron(np.eye(big), ladder(big))
    M = expm(zeta * (a.conj().T @ b.conj().T) - np.conj(zeta) * (a @ b))
    t = M.reshape(big, big, big, big)
    return t[:cutoff, :cutoff, :cutoff, :cutoff]


def padded_exponential_beamsplitter(
    theta: float, varphi: float, cutoff: int, pad_factor: int = 2
) -> np.ndarray:
    """B(theta, varphi) = exp(theta (e^{i varphi} a b^dag - e^{-i varphi} a^dag b)).

    The single-photon block of this exponential equals the 2x2 matrix of
    ``beamsplitter_matrix``. Particle conservation means no padding is
    strictly needed, but a modest pad keeps the comparison honest about
    truncation behavior.
    """
    big = pad_factor * cutoff
    a = np.kron(ladder(big), np.eye(big))
    b = np.kron(np.eye(big), ladder(big))
    gen = theta * (np.exp(1j * varphi) * (a @ b.conj().T) - np.exp(-1j * varphi) * (a.conj().T @ b))
    t = expm(gen).reshape(big, big, big, big)
    return t[:cutoff, :cutoff, :cutoff, :cutoff]
