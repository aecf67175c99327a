"""Deterministic random-stream derivation for seeded, order-independent runs.

Every independent stream is keyed by a spawn-key tuple fed to numpy's
SeedSequence on top of the experiment's master seed:

    (TRIAL_DOMAIN,  cell, trial)              per-trial values (collective-rotation angle)
    (BIT_DOMAIN,    cell, trial, bit_index)   random bit value for one burst
    (PHOTON_DOMAIN, cell, trial, bit_index)   photon draw block for one burst

``cell`` is the sweep-cell index (0 for a plain run). The photon block is a
``(burst_size, draws_per_photon)`` uniform matrix drawn in a single call;
photon k of the burst owns row k and consumes it left to right. Because
every key is derived independently of execution order, results are
reproducible under any scheduling or worker count.
"""

from __future__ import annotations

import numpy as np

TRIAL_DOMAIN = 0
BIT_DOMAIN = 1
PHOTON_DOMAIN = 2


def generator(master_seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for the stream addressed by ``key`` under ``master_seed``."""
    if master_seed < 0:
        raise ValueError(f"master seed must be non-negative, got {master_seed}")
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


class DrawStream:
    """A caller-owned source of uniform draws in [0, 1).

    Wraps either a live numpy Generator or a pre-drawn buffer (one row of a
    photon block). ``draws`` counts consumed values so tests can assert how
    many draws an operation used.
    """

    __slots__ = ("_gen", "_buf", "_pos", "draws")

    def __init__(self, gen: np.random.Generator | None = None,
                 buffer: np.ndarray | None = None) -> None:
        if (gen is None) == (buffer is None):
            raise ValueError("provide exactly one of gen or buffer")
        self._gen = gen
        self._buf = buffer
        self._pos = 0
        self.draws = 0

    @classmethod
    def from_seed(cls, master_seed: int, *key: int) -> "DrawStream":
        return cls(gen=generator(master_seed, *key))

    @classmethod
    def from_buffer(cls, buffer: np.ndarray) -> "DrawStream":
        return cls(buffer=np.asarray(buffer, dtype=float))

    def uniform(self) -> float:
        """Next uniform draw in [0, 1); consumes exactly one value."""
        self.draws += 1
        if self._gen is not None:
            return float(self._gen.random())
        if self._pos >= len(self._buf):
            raise RuntimeError("draw buffer exhausted")
        value = float(self._buf[self._pos])
        self._pos += 1
        return value
