"""Truncated Fock-basis tensors of optical gates.

All tensors share one cutoff N per axis and the axis order
(m_1..m_l, n_1..n_l): bra indices first, ket indices second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exponents import (
    GeneratingExponent,
    _check_unitary,
    _polar_squeezing,
    beamsplitter_matrix,
    build_single_mode,
)

DEFAULT_ELEMENT_BUDGET = 10**8

SELECTION_NONE = "none"
SELECTION_PARTICLE = "particle_conserving"
SELECTION_PAIR_DIFFERENCE = "pair_difference_conserving"


class BudgetExceededError(MemoryError):
    """A dense tensor would exceed the element budget."""


def _check_budget(modes, cutoff, budget):
    n_elem = cutoff ** (2 * modes)
    if n_elem > budget:
        raise BudgetExceededError(
            f"dense tensor with {n_elem} complex entries exceeds the budget of {budget}"
        )


@dataclass(frozen=True)
class GateTensor:
    """Rank-2l complex tensor of gate matrix elements up to a cutoff."""

    modes: int
    cutoff: int
    data: np.ndarray
    selection_rule: str = SELECTION_NONE

    def __post_init__(self):
        expected = (self.cutoff,) * (2 * self.modes)
        if self.data.shape != expected:
            raise ValueError(f"data shape {self.data.shape} != {expected}")

    def as_matrix(self):
        """Flatten to an N^l x N^l matrix (bra rows, ket columns)."""
        n = self.cutoff**self.modes
        return self.data.reshape(n, n)


def general_gaussian_tensor(
    exp: GeneratingExponent, modes: int, cutoff: int, budget: int = DEFAULT_ELEMENT_BUDGET
) -> GateTensor:
    """Fill the full rank-2l tensor from the generic recurrence."""
    if exp.mu.shape[0] != 2 * modes:
        raise ValueError(f"exponent is for {exp.modes} modes, requested {modes}")
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    _check_budget(modes, cutoff, budget)
    dim = 2 * modes
    data = np.zeros(cutoff**dim, dtype=complex)
    _kernels.fill_general(data, complex(exp.C), exp.mu, exp.Sigma, cutoff, dim)
    return GateTensor(modes=modes, cutoff=cutoff, data=data.reshape((cutoff,) * dim))


def displacement(gamma: complex, cutoff: int) -> GateTensor:
    if not np.isfinite(complex(gamma)):
        raise ValueError("gamma is not finite")
    out = np.zeros((cutoff, cutoff), dtype=complex)
    _kernels.fill_displacement(out, complex(gamma), cutoff)
    return GateTensor(modes=1, cutoff=cutoff, data=out)


def squeezer(zeta: complex, cutoff: int) -> GateTensor:
    if not np.isfinite(complex(zeta)):
        raise ValueError("zeta is not finite")
    r, delta = _polar_squeezing(zeta)
    out = np.zeros((cutoff, cutoff), dtype=complex)
    _kernels.fill_squeezer(out, float(r[0]), float(delta[0]), cutoff)
    return GateTensor(modes=1, cutoff=cutoff, data=out)


def single_mode_gaussian(gamma: complex, phi: float, zeta: complex, cutoff: int) -> GateTensor:
    """D(gamma) R(phi) S(zeta) via the column-then-rows recurrence fill."""
    exp = build_single_mode(gamma, phi, zeta)
    out = np.zeros((cutoff, cutoff), dtype=complex)
    S = exp.Sigma
    _kernels.fill_single_mode(
        out, complex(exp.C), exp.mu[0], exp.mu[1], S[0, 0], S[0, 1], S[1, 0], S[1, 1], cutoff
    )
    return GateTensor(modes=1, cutoff=cutoff, data=out)


def _block_offsets(sizes):
    offsets = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(np.asarray(sizes, dtype=np.int64) ** 2, out=offsets[1:])
    return offsets


def beamsplitter_blocks(theta: float, varphi: float, cutoff: int):
    """Compact per-total-photon blocks of B(theta, varphi).

    Returns (buf, offsets): block T is the c x c row-major slice at
    offsets[T], c = cutoff - |T - cutoff + 1|. This is the N^3-scaling fill
    that ``beamsplitter`` scatters into a dense tensor.
    """
    N = cutoff
    sizes = [N - abs(T - (N - 1)) for T in range(2 * N - 1)]
    offsets = _block_offsets(sizes)
    buf = np.zeros(offsets[-1], dtype=complex)
    V = beamsplitter_matrix(theta, varphi)
    _kernels.fill_beamsplitter_blocks(
        buf, offsets[:-1], V[0, 0], V[0, 1], V[1, 0], V[1, 1], N
    )
    return buf, offsets


def beamsplitter(
    theta: float, varphi: float, cutoff: int, budget: int = DEFAULT_ELEMENT_BUDGET
) -> GateTensor:
    if not (np.isfinite(theta) and np.isfinite(varphi)):
        raise ValueError("beamsplitter angles must be finite")
    _check_budget(2, cutoff, budget)
    N = cutoff
    buf, offsets = beamsplitter_blocks(theta, varphi, N)
    data = np.zeros((N, N, N, N), dtype=complex)
    for T in range(2 * N - 1):
        lo = max(0, T - N + 1)
        c = N - abs(T - (N - 1))
        block = buf[offsets[T] : offsets[T + 1]].reshape(c, c)
        ms = np.arange(lo, lo + c)
        data[ms[:, None], T - ms[:, None], ms[None, :], T - ms[None, :]] = block
    return GateTensor(modes=2, cutoff=N, data=data, selection_rule=SELECTION_PARTICLE)


def two_mode_squeezer_blocks(zeta: complex, cutoff: int):
    """Compact per-photon-difference blocks of S2(zeta).

    Returns (buf, offsets): block index b = d + cutoff - 1 for difference
    d = m1 - m2 = n1 - n2, of size (cutoff - |d|)^2.
    """
    N = cutoff
    r, delta = _polar_squeezing(zeta)
    sizes = [N - abs(d) for d in range(-(N - 1), N)]
    offsets = _block_offsets(sizes)
    buf = np.zeros(offsets[-1], dtype=complex)
    eit = np.exp(1j * float(delta[0])) * np.tanh(float(r[0]))
    sech = 1.0 / np.cosh(float(r[0]))
    _kernels.fill_two_mode_squeezer_blocks(buf, offsets[:-1], eit, sech, N)
    return buf, offsets


def two_mode_squeezer(
    zeta: complex, cutoff: int, budget: int = DEFAULT_ELEMENT_BUDGET
) -> GateTensor:
    if not np.isfinite(complex(zeta)):
        raise ValueError("zeta is not finite")
    _check_budget(2, cutoff, budget)
    N = cutoff
    buf, offsets = two_mode_squeezer_blocks(zeta, N)
    data = np.zeros((N, N, N, N), dtype=complex)
    for d in range(-(N - 1), N):
        lo = max(0, d)
        c = N - abs(d)
        block = buf[offsets[d + N - 1] : offsets[d + N]].reshape(c, c)
        ms = np.arange(lo, lo + c)
        data[ms[:, None], ms[:, None] - d, ms[None, :], ms[None, :] - d] = block
    return GateTensor(modes=2, cutoff=N, data=data, selection_rule=SELECTION_PAIR_DIFFERENCE)


def interferometer_tensor(V, cutoff: int, budget: int = DEFAULT_ELEMENT_BUDGET) -> GateTensor:
    V = _check_unitary(V, "V")
    ell = V.shape[0]
    _check_budget(ell, cutoff, budget)
    dim = 2 * ell
    data = np.zeros(cutoff**dim, dtype=complex)
    _kernels.fill_interferometer(data, V, cutoff, ell)
    return GateTensor(
        modes=ell,
        cutoff=cutoff,
        data=data.reshape((cutoff,) * dim),
        selection_rule=SELECTION_PARTICLE,
    )
