"""Simulated test signals: bumps, doppler, heavisine, plus portable noise.

Closed forms (sampled on t_i = i/T, i = 1..T):

    bumps(t)     = sum_j a_j * (1 + |t - p_j| / w_j)**-4
    doppler(t)   = sqrt(t (1 - t)) * sin(2 pi * 1.05 / (t + 0.05))
    heavisine(t) = 4 sin(4 pi t) - sgn(t - 0.3) - sgn(0.72 - t)

Noise is iid Gaussian from a fully specified counter-based generator so that
golden files are portable: draw i uses SplitMix64 outputs at counters 2i and
2i+1,

    mix(x): x ^= x >> 30; x *= 0xBF58476D1CE4E5B9;
            x ^= x >> 27; x *= 0x94D049BB133111EB;  x ^= x >> 31
    out(c) = mix((seed + (c + 1) * 0x9E3779B97F4A7C15) mod 2**64)

mapped to u1 = ((out(2i) >> 11) + 1) * 2**-53 in (0,1], u2 = (out(2i+1) >> 11)
* 2**-53 in [0,1), and Box-Muller: sqrt(-2 ln u1) * cos(2 pi u2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["SignalSpec", "generate", "SIGNAL_KINDS", "gaussian_noise"]

SIGNAL_KINDS = ("bumps", "doppler", "heavisine")

_BUMP_POSITIONS = (0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81)
_BUMP_HEIGHTS = (4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2)
_BUMP_WIDTHS = (0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005)

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class SignalSpec:
    kind: str
    length: int
    noise_sd: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}; choose from {SIGNAL_KINDS}")
        if self.length < 2:
            raise ValueError("signal length must be >= 2")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be >= 0")


def _splitmix64(seed: int, counter: int) -> int:
    z = (seed + (counter + 1) * _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def gaussian_noise(seed: int, n: int) -> np.ndarray:
    """n standard-normal draws from the documented counter-based scheme."""
    out = np.empty(n)
    for i in range(n):
        u1 = ((_splitmix64(seed, 2 * i) >> 11) + 1) * 2.0**-53
        u2 = (_splitmix64(seed, 2 * i + 1) >> 11) * 2.0**-53
        out[i] = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
    return out


def _bumps(t: np.ndarray) -> np.ndarray:
    y = np.zeros_like(t)
    for pos, height, width in zip(_BUMP_POSITIONS, _BUMP_HEIGHTS, _BUMP_WIDTHS):
        y += height * (1.0 + np.abs((t - pos) / width)) ** -4
    return y


def _doppler(t: np.ndarray) -> np.ndarray:
    return np.sqrt(t * (1.0 - t)) * np.sin(2.0 * np.pi * 1.05 / (t + 0.05))


def _heavisine(t: np.ndarray) -> np.ndarray:
    return 4.0 * np.sin(4.0 * np.pi * t) - np.sign(t - 0.3) - np.sign(0.72 - t)


_FORMS = {"bumps": _bumps, "doppler": _doppler, "heavisine": _heavisine}


def generate(spec: SignalSpec) -> np.ndarray:
    """Sample the requested function on i/T, i = 1..T, plus optional noise."""
    grid = np.arange(1, spec.length + 1, dtype=np.float64) / spec.length
    y = _FORMS[spec.kind](grid)
    if spec.noise_sd > 0:
        y = y + spec.noise_sd * gaussian_noise(spec.seed, spec.length)
    return y
