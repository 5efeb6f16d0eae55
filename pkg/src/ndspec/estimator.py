"""Sequential dimension-by-dimension spectral estimation.

The estimator inverts the assembled correlation matrix once and then
sweeps the dimensions from the highest label down. Each stage holds, at
every already-processed frequency tuple, the first block-column of a
running inverse; the stage forms the block Fourier sum M(w) over a new
frequency axis, pushes it through the inverted zero block as the
congruence M [G(0)]^{-1} M^H, and extracts a smaller first block-column
for the next stage. After the last dimension the field is scalar and the
power spectrum is its reciprocal.

In one dimension the sweep reproduces the classical autoregressive
(maximum entropy) spectrum of the lag sequence exactly: the first column
of the inverse is the normalized prediction polynomial over its error
power, which makes the Levinson recursion an independent oracle for the
whole pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import CorrelationSignal, assemble
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotPositiveDefinite,
    SizeMismatch,
)
from .grid import SpectralGridSpec, SpectrumEstimate
from .indexing import DimSpec, Nesting, apply_walking, walking_map
from .linalg import invert_pd, sandwich


@dataclass(frozen=True)
class LevinsonResult:
    """Normalized forward prediction solution of a 1D lag sequence.

    p solves R(c) p = rho e_0 with p[0] = 1; rho is the prediction error
    power c(0) prod(1 - |sigma_k|^2); sigmas are the reflection
    coefficients of successive orders, all strictly inside the unit disc
    for a positive definite sequence.
    """

    p: np.ndarray
    rho: float
    sigmas: np.ndarray


def levinson_1d(c: CorrelationSignal) -> LevinsonResult:
    """Levinson recursion on a 1D Hermitian lag sequence.

    Raises NotPositiveDefinite as soon as a reflection coefficient
    reaches the unit circle (the recursion order is reported as the
    failing pivot index).
    """
    if c.d != 1:
        raise DimensionMismatch(f"expected a 1D correlation signal, got {c.d}-d")
    g = c.gamma[0]
    r = c.lags[g - 1:]
    rho = float(r[0].real)
    if rho <= 0.0:
        raise NotPositiveDefinite("zero lag is not positive", pivot_index=0,
                                  pivot_value=rho)
    p = np.zeros(g, dtype=complex)
    p[0] = 1.0
    sigmas = np.zeros(max(g - 1, 0), dtype=complex)
    for m in range(1, g):
        acc = r[m] + np.dot(p[1:m], r[m - 1:0:-1])
        sigma = -acc / rho
        if abs(sigma) >= 1.0:
            raise NotPositiveDefinite(
                f"reflection coefficient {m} has modulus {abs(sigma):.6g} >= 1",
                pivot_index=m, pivot_value=float(abs(sigma)),
            )
        sigmas[m - 1] = sigma
        head = p[1:m].copy()
        p[m] = sigma
        p[1:m] = head + sigma * np.conj(head[::-1])
        rho *= 1.0 - abs(sigma) ** 2
    return LevinsonResult(p, rho, sigmas)


def ar_spectrum_1d(res: LevinsonResult, grid: SpectralGridSpec) -> SpectrumEstimate:
    """S(w) = rho / |sum_k p_k e^{j w k}|^2 on a 1D grid.

    The denominator cannot vanish while every reflection coefficient
    stays inside the unit disc.
    """
    if grid.d != 1:
        raise DimensionMismatch(f"expected a 1D grid, got {grid.d}-d")
    w = grid.angular(0)
    poly = np.exp(1j * np.outer(w, np.arange(res.p.size))) @ res.p
    return SpectrumEstimate(grid, res.rho / np.abs(poly) ** 2)


@dataclass(frozen=True)
class StageField:
    """First block-column blocks of the running inverse at one stage.

    ``blocks`` carries one leading axis per processed dimension (highest
    label first, matching ``processed``/``counts``), then the block index
    k, then the h x h block itself. Stage x in 1..d is ready for an
    update; stage d + 1 is the finished scalar field.
    """

    spec: DimSpec
    stage: int
    processed: tuple[int, ...]
    counts: tuple[int, ...]
    blocks: np.ndarray

    @property
    def block_size(self) -> int:
        return self.blocks.shape[-1]

    @property
    def n_blocks(self) -> int:
        return self.blocks.shape[-3]


def init_stage(r_inv, spec: DimSpec) -> StageField:
    """Stage-1 field: the first block-column of the inverted matrix.

    Block k of size q/gamma_{d-1} is read at block-row k, block-column 0
    along the stride of the slowest dimension.
    """
    a = np.asarray(r_inv, dtype=complex)
    if a.shape != (spec.q, spec.q):
        raise SizeMismatch(f"inverse shape {a.shape}, expected {(spec.q,) * 2}")
    g_last = spec.gamma[-1]
    h = spec.q // g_last
    blocks = np.stack([a[k * h:(k + 1) * h, 0:h] for k in range(g_last)])
    return StageField(spec, 1, (), (), blocks)


def fourier_block_sum(field: StageField, m: int, count: int) -> np.ndarray:
    """M(w) = sum_k G(k) e^{j k w} at w = 2 pi m / count, for every
    processed-frequency point at once."""
    if not 0 <= m < count:
        raise IndexOutOfRange(f"grid index {m} outside [0, {count})")
    phases = np.exp(2j * np.pi * m * np.arange(field.n_blocks) / count)
    return np.tensordot(field.blocks, phases, axes=([-3], [0]))


def stage_update(field: StageField, grid: SpectralGridSpec) -> StageField:
    """One sweep stage: invert the zero block at every processed point,
    apply the congruence at every new grid index, and extract the next
    blocks.

    At the final stage (x = d) there is nothing left to extract and the
    returned field holds the 1 x 1 scalars. NotPositiveDefinite is
    re-raised tagged with the stage and the processed grid indices where
    the zero block failed.
    """
    spec = field.spec
    d = spec.d
    x = field.stage
    if x > d:
        raise ValueError("sweep already complete")
    if grid.d != d:
        raise DimensionMismatch(f"{grid.d}-d grid for a {d}-d field")
    dim = d - x
    count = grid.counts[dim]
    h = field.block_size

    g0_inv = np.empty(field.counts + (h, h), dtype=complex)
    for point in np.ndindex(*field.counts):
        try:
            g0_inv[point] = invert_pd(field.blocks[point + (0,)])
        except NotPositiveDefinite as exc:
            raise exc.tagged(x, point) from exc

    if x < d:
        new_h = h // spec.gamma[dim - 1]
        n_new = spec.gamma[dim - 1]
    else:
        new_h = 1
        n_new = 1
    out = np.empty(field.counts + (count, n_new, new_h, new_h), dtype=complex)
    for m in range(count):
        summed = fourier_block_sum(field, m, count)
        for point in np.ndindex(*field.counts):
            updated = sandwich(summed[point], g0_inv[point])
            if x < d:
                for k in range(n_new):
                    out[point + (m, k)] = updated[k * new_h:(k + 1) * new_h, 0:new_h]
            else:
                out[point + (m, 0)] = updated
    return StageField(spec, x + 1, field.processed + (dim,),
                      field.counts + (count,), out)


def _verify_walked_inverse(c: CorrelationSignal, r_inv, tol: float = 1e-8) -> None:
    """Invert under the reversed nesting and walk back; must match r_inv."""
    spec = DimSpec(c.gamma)
    if spec.d == 1:
        return
    reversed_nesting = Nesting(tuple(reversed(range(spec.d))))
    alt_inv = invert_pd(assemble(c, reversed_nesting).entries)
    walked = apply_walking(alt_inv, walking_map(spec, reversed_nesting,
                                                Nesting.identity(spec.d)))
    scale = float(np.max(np.abs(r_inv)))
    err = float(np.max(np.abs(walked - r_inv)))
    if err > tol * scale:
        raise ArithmeticError(
            f"walked inverse deviates from the direct inverse by {err:.3g}"
        )


def sequential_spectrum(c: CorrelationSignal, grid: SpectralGridSpec,
                        cross_check_walking: bool = False) -> SpectrumEstimate:
    """Full sweep over all dimensions; returns S = 1 / G_final on the grid.

    The correlation matrix is assembled under the identity nesting and
    inverted once; each dimension is then converted to an explicit
    frequency axis from the highest label down. With
    ``cross_check_walking`` the initial inverse is additionally computed
    under the reversed nesting and walked back as a consistency check.
    """
    spec = DimSpec(c.gamma)
    if grid.d != spec.d:
        raise DimensionMismatch(f"{grid.d}-d grid for a {spec.d}-d signal")
    r = assemble(c)
    try:
        r_inv = invert_pd(r.entries)
    except NotPositiveDefinite as exc:
        raise exc.tagged(1, ()) from exc
    if cross_check_walking:
        _verify_walked_inverse(c, r_inv)
    field = init_stage(r_inv, spec)
    for _ in range(spec.d):
        field = stage_update(field, grid)
    # leading axes run over dimensions d-1..0; reorder to m_0..m_{d-1}
    scalars = field.blocks[..., 0, 0, 0].real
    power = 1.0 / np.transpose(scalars, axes=tuple(reversed(range(spec.d))))
    return SpectrumEstimate(grid, power)
