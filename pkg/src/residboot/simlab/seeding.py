"""Deterministic stream derivation for the Monte Carlo harness.

Counter-based keying on (master, phase, n, scenario, sim, boot) via Philox:
the 128-bit key packs the master seed with the simulation coordinates, and a
replicate index offsets the 256-bit counter by ``boot * 2**192``, so every
replicate owns a disjoint counter region of the same keyed stream.  The same
coordinates always yield the same stream, independent of worker assignment or
scheme order; distinct coordinates give statistically independent streams.

Phases separate the draws: PHASE_DATA generates the dataset, PHASE_BOOT the
per-replicate bootstrap draws, and PHASE_BOOT_ALT is used for the smooth
scheme when the schemes are configured *not* to share their uniforms.
"""

from __future__ import annotations

import numpy as np

__all__ = ["PHASE_DATA", "PHASE_BOOT", "PHASE_BOOT_ALT", "seed_stream", "data_stream", "boot_stream"]

PHASE_DATA = 1
PHASE_BOOT = 2
PHASE_BOOT_ALT = 3

_MASK64 = (1 << 64) - 1


def seed_stream(master, phase, n, scenario, sim, boot=0):
    """A fresh Generator keyed on the integer coordinates.

    Field widths: phase < 16, n < 2**20, scenario < 256, sim < 2**24,
    boot < 2**64; the master seed contributes its low 64 bits.
    """
    phase, n, scenario, sim, boot = int(phase), int(n), int(scenario), int(sim), int(boot)
    if not 0 <= phase < 16:
        raise ValueError(f"phase out of range: {phase}")
    if not 0 <= n < 1 << 20:
        raise ValueError(f"n out of range: {n}")
    if not 0 <= scenario < 256:
        raise ValueError(f"scenario index out of range: {scenario}")
    if not 0 <= sim < 1 << 24:
        raise ValueError(f"sim index out of range: {sim}")
    if not 0 <= boot < 1 << 64:
        raise ValueError(f"boot index out of range: {boot}")
    key = np.array([int(master) & _MASK64, (phase << 60) | (n << 40) | (scenario << 32) | sim], dtype=np.uint64)
    counter = np.array([0, 0, 0, boot], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def data_stream(master, n, scenario, sim):
    """The dataset stream of one simulation; identical across schemes."""
    return seed_stream(master, PHASE_DATA, n, scenario, sim)


def boot_stream(master, n, scenario, sim, boot, phase=PHASE_BOOT):
    """The stream owning one bootstrap replicate's draws."""
    return seed_stream(master, phase, n, scenario, sim, boot)
