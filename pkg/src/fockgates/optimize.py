"""Layered single-mode circuit optimizer.

The circuit is a product of M layers, each a Kerr gate followed by a
single-mode Gaussian gate; the loss is minus the absolute overlap with a
target state. Gradients flow backward through the layers with the Wirtinger
chain rule: complex coordinates are updated through dL/dxi*, real ones
through the doubled real part.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .gradients import (
    combine_upstream,
    grad_from_jacobian,
    single_mode_jacobians,
)
from .nongaussian import kerr_diagonal
from .states import StateVector, loss as loss_of, vacuum
from .tensors import single_mode_gaussian

COORDS_PER_LAYER = 6  # gamma_x, gamma_y, phi, r, delta, kappa


@dataclass
class LayerParams:
    gamma: complex = 0.0
    phi: float = 0.0
    r: float = 0.0
    delta: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        vals = [self.gamma, self.phi, self.r, self.delta, self.kappa]
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("layer parameters must be finite")
        if self.r < 0:
            raise ValueError("squeezing amplitude r must be >= 0")

    @property
    def zeta(self) -> complex:
        return self.r * np.exp(1j * self.delta)


def params_to_vector(params) -> np.ndarray:
    out = np.empty(COORDS_PER_LAYER * len(params))
    for i, p in enumerate(params):
        out[6 * i : 6 * i + 6] = [p.gamma.real, p.gamma.imag, p.phi, p.r, p.delta, p.kappa]
    return out


def vector_to_params(vec: np.ndarray):
    if len(vec) % COORDS_PER_LAYER:
        raise ValueError("coordinate vector length is not a multiple of 6")
    out = []
    for i in range(len(vec) // COORDS_PER_LAYER):
        gx, gy, phi, r, delta, kappa = vec[6 * i : 6 * i + 6]
        out.append(LayerParams(complex(gx, gy), phi, max(r, 0.0), delta, kappa))
    return out


@dataclass
class ForwardCache:
    psi_out: StateVector
    # per layer: input state, Kerr diagonal, state after Kerr, gate matrix
    layers: list = field(default_factory=list)


def forward(params, cutoff: int) -> ForwardCache:
    """psi_out = prod_m G1(gamma_m, phi_m, zeta_m) K(kappa_m) |0>, with cache."""
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    if not params:
        raise ValueError("at least one layer required")
    psi = vacuum(1, cutoff).amplitudes
    cache = ForwardCache(psi_out=None)
    for p in params:
        d = kerr_diagonal(p.kappa, cutoff)
        psi_k = d * psi
        G = single_mode_gaussian(p.gamma, p.phi, p.zeta, cutoff)
        psi_next = G.data @ psi_k
        cache.layers.append((psi, d, psi_k, G, p))
        psi = psi_next
    cache.psi_out = StateVector(1, cutoff, psi)
    return cache


def backward(cache: ForwardCache, psi_target: StateVector) -> np.ndarray:
    """Gradient of L = -|<target|psi_out>| per real coordinate of every layer."""
    if not cache.layers:
        raise ValueError("forward cache is empty")
    lv = loss_of(cache.psi_out, psi_target)
    o = lv.overlap
    t = psi_target.amplitudes
    if abs(o) == 0:
        # the loss is not differentiable at exactly zero overlap; the
        # subgradient 0 is returned so the caller can continue
        return np.zeros(COORDS_PER_LAYER * len(cache.layers))
    u = -o * t / (2 * abs(o))  # dL/dpsi_out*
    grads = np.zeros(COORDS_PER_LAYER * len(cache.layers))
    for i in range(len(cache.layers) - 1, -1, -1):
        psi_in, d, psi_k, G, p = cache.layers[i]
        # gate cotangent dL/dG*_{mn} = u_m conj(psi_k)_n
        U = np.outer(u, np.conj(psi_k))
        jacs = {j.param: grad_from_jacobian(G, j) for j in single_mode_jacobians(p.gamma, p.phi, p.zeta)}
        dL_dgamma_star = combine_upstream(U, jacs["gamma"], jacs["gamma*"])
        grads[6 * i + 0] = 2 * dL_dgamma_star.real
        grads[6 * i + 1] = 2 * dL_dgamma_star.imag
        grads[6 * i + 2] = combine_upstream(U, jacs["phi"], jacs["phi"]).real
        grads[6 * i + 3] = combine_upstream(U, jacs["r"], jacs["r"]).real
        grads[6 * i + 4] = combine_upstream(U, jacs["delta"], jacs["delta"]).real
        # through the gate: dL/dpsi_k* = G^dagger u
        u_k = G.data.conj().T @ u
        # Kerr parameter and propagation through the diagonal
        grads[6 * i + 5] = 2 * np.real(np.sum(np.conj(u_k) * 1j * np.arange(len(d)) ** 2 * d * psi_in))
        u = np.conj(d) * u_k
    return grads


@dataclass
class AdamState:
    dim: int
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: np.ndarray = None
    v: np.ndarray = None

    def __post_init__(self):
        if self.m is None:
            self.m = np.zeros(self.dim)
        if self.v is None:
            self.v = np.zeros(self.dim)


def adam_step(state: AdamState, vec: np.ndarray, grads: np.ndarray) -> np.ndarray:
    """One Adam update on the real coordinate vector; r entries clipped at 0."""
    if not np.all(np.isfinite(grads)):
        bad = np.flatnonzero(~np.isfinite(grads))
        raise FloatingPointError(f"non-finite gradient at coordinates {bad.tolist()}")
    state.step += 1
    state.m = state.beta1 * state.m + (1 - state.beta1) * grads
    state.v = state.beta2 * state.v + (1 - state.beta2) * grads**2
    mhat = state.m / (1 - state.beta1**state.step)
    vhat = state.v / (1 - state.beta2**state.step)
    new = vec - state.lr * mhat / (np.sqrt(vhat) + state.eps)
    new[3::COORDS_PER_LAYER] = np.maximum(new[3::COORDS_PER_LAYER], 0.0)
    return new


@dataclass
class RunRecord:
    seed: int
    layers: int
    cutoff: int
    steps_run: int
    losses: list
    fidelities: list
    wall_time: float
    final_params: list

    @property
    def final_fidelity(self) -> float:
        return self.fidelities[-1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "layers": self.layers,
                "cutoff": self.cutoff,
                "steps_run": self.steps_run,
                "final_fidelity": self.final_fidelity,
                "final_loss": self.losses[-1],
                "wall_time_s": self.wall_time,
                "final_params": [
                    {
                        "gamma": [p.gamma.real, p.gamma.imag],
                        "phi": p.phi,
                        "r": p.r,
                        "delta": p.delta,
                        "kappa": p.kappa,
                    }
                    for p in self.final_params
                ],
            }
        )


def optimize_state_prep(
    target: StateVector,
    layers: int,
    cutoff: int,
    steps: int,
    seed: int = 0,
    lr: float = 0.01,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
    tol: float = 0.0,
    init_scale: float = 0.01,
) -> RunRecord:
    """Adam descent of L = -|<target|psi_out>| from a small random start.

    Stops early once 1 - fidelity <= tol (tol = 0 runs all steps).
    """
    if abs(target.norm() - 1.0) > 1e-9:
        raise ValueError("target state must be normalized")
    if target.modes != 1 or target.cutoff != cutoff:
        raise ValueError("target must be single-mode at the run cutoff")
    rng = np.random.default_rng(seed)
    vec = rng.uniform(-init_scale, init_scale, COORDS_PER_LAYER * layers)
    vec[3::COORDS_PER_LAYER] = np.abs(vec[3::COORDS_PER_LAYER])
    adam = AdamState(dim=len(vec), lr=lr, beta1=beta1, beta2=beta2, eps=eps)
    losses, fids = [], []
    t0 = time.perf_counter()
    params = vector_to_params(vec)
    for _ in range(steps):
        cache = forward(params, cutoff)
        lv = loss_of(cache.psi_out, target)
        if not np.isfinite(lv.value):
            raise FloatingPointError(f"non-finite loss at step {len(losses)}")
        losses.append(lv.value)
        fids.append(abs(lv.overlap))
        if tol > 0 and 1.0 - fids[-1] <= tol:
            break
        grads = backward(cache, target)
        vec = adam_step(adam, vec, grads)
        params = vector_to_params(vec)
    return RunRecord(
        seed=seed,
        layers=layers,
        cutoff=cutoff,
        steps_run=len(losses),
        losses=losses,
        fidelities=fids,
        wall_time=time.perf_counter() - t0,
        final_params=params,
    )


def best_of_seeds(target, layers, cutoff, steps, seeds, **kwargs) -> RunRecord:
    best = None
    for s in seeds:
        rec = optimize_state_prep(target, layers, cutoff, steps, seed=s, **kwargs)
        if best is None or rec.final_fidelity > best.final_fidelity:
            best = rec
    return best
