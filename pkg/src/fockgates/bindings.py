"""Gate construction by name, for the CLI and the external binding boundary.

Each kind maps a flat JSON-friendly parameter dict to a GateTensor and a
list of per-parameter gradient tensors. Complex parameters appear as
Wirtinger pairs (name and name*); the host combines them with its upstream
cotangent dL/dG* to get dL/dxi*.
"""

from __future__ import annotations

import numpy as np

from . import tensors
from .exponents import TwoModeSpec, _polar_squeezing
from .gradients import (
    REAL,
    WIRTINGER,
    amplitude_gradient_two_mode_squeezer,
    grad_from_jacobian,
    phase_gradient_single_param,
    single_mode_jacobians,
    two_mode_jacobians,
)
from .nongaussian import (
    DEFAULT_HBAR,
    PhaseGateSpec,
    cubic_amplitude_gradient,
    cubic_phase,
    kerr_diagonal,
    kerr_diagonal_gradient,
    quartic_phase,
)
from .tensors import GateTensor

GATE_KINDS = (
    "displacement",
    "squeezer",
    "single_mode_gaussian",
    "beamsplitter",
    "two_mode_squeezer",
    "kerr",
    "cubic",
    "quartic",
)


def _cplx(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(re, im)
    return complex(value)


def build_gate(kind: str, params: dict, cutoff: int, budget=None) -> GateTensor:
    kw = {} if budget is None else {"budget": budget}
    if kind == "displacement":
        return tensors.displacement(_cplx(params["gamma"]), cutoff)
    if kind == "squeezer":
        return tensors.squeezer(_cplx(params["zeta"]), cutoff)
    if kind == "single_mode_gaussian":
        return tensors.single_mode_gaussian(
            _cplx(params.get("gamma", 0)),
            float(params.get("phi", 0)),
            _cplx(params.get("zeta", 0)),
            cutoff,
        )
    if kind == "beamsplitter":
        return tensors.beamsplitter(float(params["theta"]), float(params["varphi"]), cutoff, **kw)
    if kind == "two_mode_squeezer":
        return tensors.two_mode_squeezer(_cplx(params["zeta"]), cutoff, **kw)
    if kind == "kerr":
        data = np.diag(kerr_diagonal(float(params["kappa"]), cutoff))
        return GateTensor(modes=1, cutoff=cutoff, data=data)
    if kind == "cubic":
        return cubic_phase(
            PhaseGateSpec(3, float(params["eta"]), cutoff, float(params.get("hbar", DEFAULT_HBAR)))
        )
    if kind == "quartic":
        return quartic_phase(
            PhaseGateSpec(4, float(params["eta"]), cutoff, float(params.get("hbar", DEFAULT_HBAR)))
        )
    raise ValueError(f"unknown gate kind {kind!r}; known: {', '.join(GATE_KINDS)}")


def build_gradients(kind: str, params: dict, cutoff: int):
    """[(param name, kind tag, GateTensor gradient), ...] for ``kind``."""
    if kind in ("displacement", "squeezer", "single_mode_gaussian"):
        gamma = _cplx(params.get("gamma", 0)) if kind != "squeezer" else 0.0
        phi = float(params.get("phi", 0)) if kind == "single_mode_gaussian" else 0.0
        zeta = _cplx(params.get("zeta", 0)) if kind != "displacement" else 0.0
        G = tensors.single_mode_gaussian(gamma, phi, zeta, cutoff)
        jacs = single_mode_jacobians(gamma, phi, zeta)
        if kind == "displacement":
            wanted = ("gamma", "gamma*")
        elif kind == "squeezer":
            wanted = ("r", "delta")
        else:
            wanted = ("gamma", "gamma*", "phi", "r", "delta")
        return [
            (j.param, j.kind, grad_from_jacobian(G, j)) for j in jacs if j.param in wanted
        ]
    if kind == "beamsplitter":
        theta, varphi = float(params["theta"]), float(params["varphi"])
        spec = TwoModeSpec(
            gamma=(0, 0), phi=(0, 0), theta_w=0.0, varphi_w=0.0,
            zeta=(0, 0), theta_v=theta, varphi_v=varphi,
        )
        G = tensors.beamsplitter(theta, varphi, cutoff)
        out = []
        for j in two_mode_jacobians(spec):
            if j.param in ("theta_v", "varphi_v"):
                out.append((j.param, j.kind, grad_from_jacobian(G, j)))
        return out
    if kind == "two_mode_squeezer":
        zeta = _cplx(params["zeta"])
        r, delta = _polar_squeezing(zeta)
        padded = tensors.two_mode_squeezer(zeta, cutoff + 1)
        base = tensors.two_mode_squeezer(zeta, cutoff)
        return [
            ("r", REAL, amplitude_gradient_two_mode_squeezer(padded, float(delta[0]))),
            ("delta", REAL, phase_gradient_single_param(base, 1.0)),
        ]
    if kind == "kerr":
        kappa = float(params["kappa"])
        data = np.diag(kerr_diagonal_gradient(kappa, cutoff))
        return [("kappa", REAL, GateTensor(modes=1, cutoff=cutoff, data=data))]
    if kind == "cubic":
        eta = float(params["eta"])
        hbar = float(params.get("hbar", DEFAULT_HBAR))
        padded = cubic_phase(PhaseGateSpec(3, eta, cutoff + 3, hbar))
        grad = cubic_amplitude_gradient(padded.data, eta, hbar, cutoff)
        return [("eta", REAL, GateTensor(modes=1, cutoff=cutoff, data=grad))]
    raise ValueError(f"no gradients available for gate kind {kind!r}")
