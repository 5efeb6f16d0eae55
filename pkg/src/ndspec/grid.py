"""Spectral grids and gridded power spectra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpectralGridSpec:
    """Uniform grid over [0, 1) cycles/sample per axis.

    Axis i carries counts[i] points; point m has frequency m / counts[i]
    and angular frequency 2 pi m / counts[i].
    """

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not self.counts or any(c < 1 for c in self.counts):
            raise ValueError(f"grid counts must all be >= 1, got {self.counts}")

    @property
    def d(self) -> int:
        return len(self.counts)

    @property
    def size(self) -> int:
        out = 1
        for c in self.counts:
            out *= c
        return out

    def frequencies(self, axis: int) -> np.ndarray:
        return np.arange(self.counts[axis]) / self.counts[axis]

    def angular(self, axis: int) -> np.ndarray:
        return 2.0 * np.pi * self.frequencies(axis)


@dataclass(frozen=True)
class SpectrumEstimate:
    """Strictly positive power values indexed power[m_0, ..., m_{d-1}]."""

    grid: SpectralGridSpec
    power: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.power, dtype=float)
        object.__setattr__(self, "power", arr)
        if arr.shape != self.grid.counts:
            raise ValueError(
                f"power shape {arr.shape} does not match grid counts {self.grid.counts}"
            )
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise ValueError("power values must be finite and strictly positive")
