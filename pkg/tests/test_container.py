"""FGT1 round-trip and malformed-input handling."""

import numpy as np
import pytest

from fockgates import container, tensors


def test_round_trip_bytes(rng):
    t = tensors.single_mode_gaussian(0.3 + 0.1j, 0.5, 0.2j, 7)
    back = container.load_bytes(container.dump_bytes(t))
    assert back.modes == 1 and back.cutoff == 7
    assert back.selection_rule == t.selection_rule
    assert np.array_equal(back.data, t.data)


def test_round_trip_file(tmp_path):
    t = tensors.beamsplitter(0.4, 1.1, 5)
    p = tmp_path / "bs.fgt1"
    container.dump(t, p)
    back = container.load(p)
    assert back.selection_rule == tensors.SELECTION_PARTICLE
    assert np.array_equal(back.data, t.data)


def test_bad_magic():
    blob = container.dump_bytes(tensors.displacement(0.1, 3))
    with pytest.raises(ValueError, match="magic"):
        container.load_bytes(b"XXXX" + blob[4:])


def test_bad_tag():
    blob = bytearray(container.dump_bytes(tensors.displacement(0.1, 3)))
    blob[12] = 77
    with pytest.raises(ValueError, match="tag"):
        container.load_bytes(bytes(blob))


def test_bad_size():
    blob = container.dump_bytes(tensors.displacement(0.1, 3))
    with pytest.raises(ValueError, match="size"):
        container.load_bytes(blob[:-8])
