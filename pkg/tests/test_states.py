"""State vectors, gate application and the selection-rule fast paths."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockgates import states, tensors
from fockgates.states import (
    StateVector,
    apply_beamsplitter_fast,
    apply_gate,
    apply_two_mode_squeezer_fast,
    fock,
    from_json,
    loss,
    to_json,
    vacuum,
)


def random_state(rng, modes, cutoff):
    amp = rng.normal(size=(cutoff,) * modes) + 1j * rng.normal(size=(cutoff,) * modes)
    amp /= np.linalg.norm(amp)
    return StateVector(modes, cutoff, amp)


def test_vacuum_and_fock():
    v = vacuum(2, 4)
    assert v.amplitudes[0, 0] == 1 and v.norm() == 1
    f = fock([1, 2], 4)
    assert f.amplitudes[1, 2] == 1 and np.count_nonzero(f.amplitudes) == 1
    single = fock(3, 5)
    assert single.modes == 1 and single.amplitudes[3] == 1


def test_norm_guard():
    with pytest.raises(ValueError):
        StateVector(1, 3, np.array([1.0, 1.0, 0.0], dtype=complex))
    with pytest.raises(ValueError):
        StateVector(1, 3, np.array([np.nan, 0, 0], dtype=complex))


def test_normalized():
    s = StateVector(1, 2, np.array([0.3, 0.4], dtype=complex))
    assert abs(s.normalized().norm() - 1) < 1e-15


def test_apply_gate_displaced_vacuum():
    g = 0.7 - 0.2j
    D = tensors.displacement(g, 25)
    out = apply_gate(D, vacuum(1, 25))
    assert np.allclose(out.amplitudes, D.data[:, 0], atol=1e-15)


def test_apply_gate_target_mode(rng):
    """A single-mode gate on mode 1 of a two-mode state matches the kron form."""
    psi = random_state(rng, 2, 6)
    G = tensors.single_mode_gaussian(0.2, 0.5, 0.3j, 6)
    out = apply_gate(G, psi, target_modes=[1])
    ref = psi.amplitudes @ G.data.T
    assert np.abs(out.amplitudes - ref).max() < 1e-14


def test_apply_gate_validation(rng):
    psi = random_state(rng, 2, 5)
    G = tensors.displacement(0.1, 4)
    with pytest.raises(ValueError):
        apply_gate(G, psi)  # cutoff mismatch
    G5 = tensors.displacement(0.1, 5)
    with pytest.raises(ValueError):
        apply_gate(G5, psi, target_modes=[0, 1])
    with pytest.raises(ValueError):
        apply_gate(G5, psi, target_modes=[2])
    B = tensors.beamsplitter(0.3, 0.1, 5)
    with pytest.raises(ValueError):
        apply_gate(B, psi, target_modes=[1, 1])


def test_beamsplitter_fast_path(rng):
    psi = random_state(rng, 2, 7)
    B = tensors.beamsplitter(0.8, 0.3, 7)
    slow = apply_gate(B, psi)
    fast = apply_beamsplitter_fast(B, psi)
    assert np.abs(slow.amplitudes - fast.amplitudes).max() < 1e-13


def test_two_mode_squeezer_fast_path(rng):
    psi = random_state(rng, 2, 7)
    S = tensors.two_mode_squeezer(0.5 + 0.2j, 7)
    slow = apply_gate(S, psi)
    fast = apply_two_mode_squeezer_fast(S, psi)
    assert np.abs(slow.amplitudes - fast.amplitudes).max() < 1e-13


def test_fast_path_rejects_wrong_rule(rng):
    psi = random_state(rng, 2, 5)
    B = tensors.beamsplitter(0.3, 0.2, 5)
    S = tensors.two_mode_squeezer(0.4, 5)
    with pytest.raises(ValueError):
        apply_beamsplitter_fast(S, psi)
    with pytest.raises(ValueError):
        apply_two_mode_squeezer_fast(B, psi)


def test_loss_value():
    a = fock(0, 3)
    b = StateVector(1, 3, np.array([0.6, 0.8j, 0.0]))
    lv = loss(b, a)
    assert abs(lv.value + 0.6) < 1e-15
    assert abs(lv.overlap - 0.6) < 1e-15
    with pytest.raises(ValueError):
        loss(a, fock([0, 0], 3))


def test_json_round_trip(rng):
    psi = random_state(rng, 2, 4)
    back = from_json(to_json(psi))
    assert back.modes == 2 and back.cutoff == 4
    assert np.abs(back.amplitudes - psi.amplitudes).max() < 1e-15
    with pytest.raises(ValueError):
        from_json('{"modes": 1, "cutoff": 3, "amplitudes": [[1, 0]]}')


@given(st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=6))
@settings(max_examples=30, deadline=None)
def test_beamsplitter_preserves_total_photons(n, m):
    """B|n, m> stays in the total-photon-number sector n + m."""
    N = 14
    psi = fock([n, m], N)
    out = apply_beamsplitter_fast(tensors.beamsplitter(0.7, 0.4, N), psi)
    amp = out.amplitudes
    i, j = np.indices(amp.shape)
    assert np.abs(amp[i + j != n + m]).max() == 0
    assert abs(np.linalg.norm(amp) - 1) < 1e-12
