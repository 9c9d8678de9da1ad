"""Fock-basis state vectors and gate application.

States are immutable; every application returns a new state. The two-mode
selection-rule gates get single-sum fast paths whose semantics are defined
by the full contraction (the fast paths must agree with it to 1e-13).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .tensors import SELECTION_PAIR_DIFFERENCE, SELECTION_PARTICLE, GateTensor

NORM_SLACK = 1e-10


@dataclass(frozen=True)
class StateVector:
    modes: int
    cutoff: int
    amplitudes: np.ndarray

    def __post_init__(self):
        expected = (self.cutoff,) * self.modes
        if self.amplitudes.shape != expected:
            raise ValueError(f"amplitudes shape {self.amplitudes.shape} != {expected}")
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("amplitudes contain non-finite entries")
        n = self.norm()
        if n > 1.0 + NORM_SLACK:
            raise ValueError(f"state norm {n} exceeds 1 (truncation can only lose norm)")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero state")
        return StateVector(self.modes, self.cutoff, self.amplitudes / n)


def vacuum(modes: int, cutoff: int) -> StateVector:
    amp = np.zeros((cutoff,) * modes, dtype=complex)
    amp[(0,) * modes] = 1.0
    return StateVector(modes, cutoff, amp)


def fock(ns, cutoff: int) -> StateVector:
    """|n_1, ..., n_l>."""
    ns = tuple(int(n) for n in np.atleast_1d(ns))
    amp = np.zeros((cutoff,) * len(ns), dtype=complex)
    amp[ns] = 1.0
    return StateVector(len(ns), cutoff, amp)


@dataclass(frozen=True)
class LossValue:
    value: float
    overlap: complex


def apply_gate(gate: GateTensor, psi: StateVector, target_modes=None) -> StateVector:
    """Contract the gate's ket indices with the state on ``target_modes``."""
    if target_modes is None:
        target_modes = tuple(range(gate.modes))
    target_modes = tuple(int(t) for t in target_modes)
    if gate.cutoff != psi.cutoff:
        raise ValueError(f"gate cutoff {gate.cutoff} != state cutoff {psi.cutoff}")
    if len(target_modes) != gate.modes:
        raise ValueError(f"gate acts on {gate.modes} modes, got {len(target_modes)} targets")
    if len(set(target_modes)) != len(target_modes):
        raise ValueError("target modes must be distinct")
    if any(t < 0 or t >= psi.modes for t in target_modes):
        raise ValueError(f"target modes {target_modes} out of range for {psi.modes} modes")
    ket_axes = tuple(range(gate.modes, 2 * gate.modes))
    out = np.tensordot(gate.data, psi.amplitudes, axes=(ket_axes, target_modes))
    out = np.moveaxis(out, range(gate.modes), target_modes)
    return StateVector(psi.modes, psi.cutoff, np.ascontiguousarray(out))


def apply_beamsplitter_fast(gate: GateTensor, psi: StateVector) -> StateVector:
    """Particle-conserving single-sum update: one k-sum per output entry."""
    if gate.selection_rule != SELECTION_PARTICLE:
        raise ValueError(f"expected a particle-conserving gate, got {gate.selection_rule!r}")
    if gate.cutoff != psi.cutoff or psi.modes != 2:
        raise ValueError("cutoff mismatch or state is not two-mode")
    N = psi.cutoff
    B = gate.data
    c = psi.amplitudes
    out = np.empty((N, N), dtype=complex)
    for n in range(N):
        for m in range(N):
            lo = max(0, n + m - N + 1)
            hi = min(n + m, N - 1)
            ks = np.arange(lo, hi + 1)
            out[n, m] = B[n, m, ks, n + m - ks] @ c[ks, n + m - ks]
    return StateVector(2, N, out)


def apply_two_mode_squeezer_fast(gate: GateTensor, psi: StateVector) -> StateVector:
    """Pair-difference single-sum update: ket indices satisfy q - k = m - n."""
    if gate.selection_rule != SELECTION_PAIR_DIFFERENCE:
        raise ValueError(f"expected a pair-difference gate, got {gate.selection_rule!r}")
    if gate.cutoff != psi.cutoff or psi.modes != 2:
        raise ValueError("cutoff mismatch or state is not two-mode")
    N = psi.cutoff
    S = gate.data
    c = psi.amplitudes
    out = np.empty((N, N), dtype=complex)
    for n in range(N):
        for m in range(N):
            # k + m - n must stay in [0, N-1]
            lo = max(0, n - m)
            hi = min(N - 1, N - 1 + n - m)
            ks = np.arange(lo, hi + 1)
            out[n, m] = S[n, m, ks, ks + m - n] @ c[ks, ks + m - n]
    return StateVector(2, N, out)


def loss(psi_out: StateVector, psi_target: StateVector) -> LossValue:
    if psi_out.amplitudes.shape != psi_target.amplitudes.shape:
        raise ValueError("state shapes differ")
    o = complex(np.vdot(psi_target.amplitudes, psi_out.amplitudes))
    return LossValue(value=-abs(o), overlap=o)


def to_json(psi: StateVector) -> str:
    flat = psi.amplitudes.ravel()
    return json.dumps(
        {
            "modes": psi.modes,
            "cutoff": psi.cutoff,
            "amplitudes": [[float(z.real), float(z.imag)] for z in flat],
        }
    )


def from_json(text: str) -> StateVector:
    doc = json.loads(text)
    modes = int(doc["modes"])
    cutoff = int(doc["cutoff"])
    pairs = np.asarray(doc["amplitudes"], dtype=float)
    if pairs.shape != (cutoff**modes, 2):
        raise ValueError(f"expected {cutoff ** modes} [re, im] pairs, got shape {pairs.shape}")
    amp = (pairs[:, 0] + 1j * pairs[:, 1]).reshape((cutoff,) * modes)
    return StateVector(modes, cutoff, amp)
