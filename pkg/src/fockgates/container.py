"""FGT1 binary container for gate tensors.

Layout: 4-byte magic ``FGT1``, uint32 mode count, uint32 cutoff, uint8
selection-rule tag, then the row-major complex-double payload. All fields
little-endian.
"""

from __future__ import annotations

import struct

import numpy as np

from .tensors import (
    SELECTION_NONE,
    SELECTION_PAIR_DIFFERENCE,
    SELECTION_PARTICLE,
    GateTensor,
)

MAGIC = b"FGT1"
_HEADER = struct.Struct("<4sIIB")
_TAGS = {SELECTION_NONE: 0, SELECTION_PARTICLE: 1, SELECTION_PAIR_DIFFERENCE: 2}
_RULES = {v: k for k, v in _TAGS.items()}


def dump_bytes(tensor: GateTensor) -> bytes:
    header = _HEADER.pack(MAGIC, tensor.modes, tensor.cutoff, _TAGS[tensor.selection_rule])
    payload = np.ascontiguousarray(tensor.data, dtype="<c16").tobytes()
    return header + payload


def load_bytes(blob: bytes) -> GateTensor:
    magic, modes, cutoff, tag = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if tag not in _RULES:
        raise ValueError(f"unknown selection-rule tag {tag}")
    n_elem = cutoff ** (2 * modes)
    expected = _HEADER.size + 16 * n_elem
    if len(blob) != expected:
        raise ValueError(f"payload size {len(blob)} != expected {expected}")
    data = np.frombuffer(blob, dtype="<c16", offset=_HEADER.size).astype(complex)
    return GateTensor(
        modes=modes,
        cutoff=cutoff,
        data=data.reshape((cutoff,) * (2 * modes)),
        selection_rule=_RULES[tag],
    )


def dump(tensor: GateTensor, path) -> None:
    with open(path, "wb") as fh:
        fh.write(dump_bytes(tensor))


def load(path) -> GateTensor:
    with open(path, "rb") as fh:
        return load_bytes(fh.read())
