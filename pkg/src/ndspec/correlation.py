"""Correlation signals on a bounded lag box and their block matrices.

A correlation signal holds one complex value per lag tuple t with
|t_i| <= gamma_i - 1 and satisfies c(-t) = conj(c(t)). Signals come from
three places: the biased empirical estimator over a sampled tensor,
closed-form synthesis from a spectral composition, or the ``ndcorr``
text file format. Assembly turns a signal into the q x q Hermitian
matrix R[i, j] = c(m(i) - m(j)) under a chosen dimension nesting.

Spectral convention: the analysis kernel is e^{+j w n}, so a unit
spectral mass at frequency f (cycles/sample) contributes e^{-j 2 pi f.t}
to the lags, and a planted peak shows up at grid index round(f * C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    FileFormatError,
    InsufficientData,
    NotPositiveDefinite,
)
from .indexing import DimSpec, Nesting, strides
from .linalg import cholesky

# Loader / constructor tolerance for Hermitian symmetry, relative to the
# largest lag magnitude.
HERMITIAN_REL_TOL = 1e-9

NDCORR_MAGIC = "ndcorr 1"


def _fmt(x: float) -> str:
    """Shortest round-trip decimal form; negative zero collapses to 0.0."""
    return repr(float(x) + 0.0)


@dataclass(frozen=True)
class SignalTensor:
    """Complex sample grid; axis i holds the samples of dimension i."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=complex)
        if arr.ndim < 1 or arr.size < 1:
            raise ValueError("sample tensor must be non-empty")
        object.__setattr__(self, "samples", arr)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.samples.shape


@dataclass(frozen=True)
class CorrelationSignal:
    """Lag function on the box prod [-(gamma_i - 1), gamma_i - 1].

    ``lags`` has shape (2 gamma_0 - 1, ..., 2 gamma_{d-1} - 1); the value
    at lag t lives at array index t + gamma - 1, so the zero lag sits at
    the center.
    """

    gamma: tuple[int, ...]
    lags: np.ndarray

    def __post_init__(self):
        gamma = tuple(int(g) for g in self.gamma)
        if not gamma or any(g < 1 for g in gamma):
            raise ValueError(f"orders must all be >= 1, got {gamma}")
        arr = np.asarray(self.lags, dtype=complex)
        expected = tuple(2 * g - 1 for g in gamma)
        if arr.shape != expected:
            raise ValueError(f"lag array shape {arr.shape}, expected {expected}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "lags", arr)
        scale = float(np.max(np.abs(arr), initial=0.0))
        mirrored = np.conj(arr[tuple(slice(None, None, -1) for _ in gamma)])
        if np.max(np.abs(arr - mirrored), initial=0.0) > HERMITIAN_REL_TOL * max(scale, 1e-300):
            raise ValueError("lag values violate Hermitian symmetry c(-t) = conj(c(t))")
        center = arr[tuple(g - 1 for g in gamma)]
        if abs(center.imag) > HERMITIAN_REL_TOL * max(scale, 1e-300) or center.real < -HERMITIAN_REL_TOL * scale:
            raise ValueError(f"zero lag must be real and non-negative, got {center}")

    @property
    def d(self) -> int:
        return len(self.gamma)

    @property
    def zero_lag(self) -> float:
        return float(self.lags[tuple(g - 1 for g in self.gamma)].real)

    def value(self, t) -> complex:
        """Lag value at an integer tuple t, bounds-checked."""
        t = tuple(int(v) for v in t)
        if len(t) != self.d:
            raise DimensionMismatch(f"lag tuple of length {len(t)} for a {self.d}-d signal")
        if any(abs(v) > g - 1 for v, g in zip(t, self.gamma)):
            raise IndexError(f"lag {t} outside the stored box")
        return complex(self.lags[tuple(v + g - 1 for v, g in zip(t, self.gamma))])

    def with_ridge(self, eps: float) -> "CorrelationSignal":
        """Copy with eps * c(0) added at the zero lag (diagonal loading of R)."""
        if eps < 0:
            raise ValueError("ridge must be >= 0")
        lags = self.lags.copy()
        lags[tuple(g - 1 for g in self.gamma)] += eps * self.zero_lag
        return CorrelationSignal(self.gamma, lags)

    def scaled(self, alpha: float) -> "CorrelationSignal":
        if alpha <= 0:
            raise ValueError("scale must be > 0")
        return CorrelationSignal(self.gamma, self.lags * alpha)

    @classmethod
    def from_forward_lags(cls, values) -> "CorrelationSignal":
        """1D signal from the values at lags 0..gamma-1; the negative half
        is filled in by conjugate mirroring."""
        vals = np.asarray(values, dtype=complex)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("expected a non-empty 1D array of forward lags")
        g = vals.size
        lags = np.concatenate([np.conj(vals[:0:-1]), vals])
        return cls((g,), lags)


def _half_box(gamma) -> list[tuple[int, ...]]:
    """Lag tuples that are lexicographically positive (first nonzero > 0)."""
    zero = (0,) * len(gamma)
    out = []
    for idx in np.ndindex(*[2 * g - 1 for g in gamma]):
        t = tuple(i - (g - 1) for i, g in zip(idx, gamma))
        if t > zero:
            out.append(t)
    return out


def _fill_hermitian(gamma, fill) -> np.ndarray:
    """Build a lag array from values on the positive half box plus zero.

    ``fill`` maps a lag tuple to a complex value; the negative half is the
    exact conjugate of the positive half, and the zero lag is forced real.
    """
    offset = tuple(g - 1 for g in gamma)
    lags = np.zeros(tuple(2 * g - 1 for g in gamma), dtype=complex)
    lags[offset] = complex(fill((0,) * len(gamma))).real
    for t in _half_box(gamma):
        v = complex(fill(t))
        lags[tuple(ti + o for ti, o in zip(t, offset))] = v
        lags[tuple(o - ti for ti, o in zip(t, offset))] = v.conjugate()
    return lags


def estimate_correlation(x, gamma) -> CorrelationSignal:
    """Biased lag estimate c(t) = (1/N) sum_n x(n+t) conj(x(n)).

    The sum runs over every n with both n and n+t inside the sample box;
    N is the total sample count, which keeps the assembled matrix
    positive semi-definite. Raises InsufficientData when some requested
    order exceeds the sample count along its axis.
    """
    arr = x.samples if isinstance(x, SignalTensor) else np.asarray(x, dtype=complex)
    if arr.ndim < 1:
        arr = arr.reshape(1)
    gamma = tuple(int(g) for g in gamma)
    if len(gamma) != arr.ndim:
        raise DimensionMismatch(
            f"{len(gamma)} orders for a {arr.ndim}-dimensional signal"
        )
    dims = arr.shape
    for axis, (g, n) in enumerate(zip(gamma, dims)):
        if g < 1:
            raise ValueError(f"orders must all be >= 1, got {gamma}")
        if g > n:
            raise InsufficientData(
                f"order {g} exceeds the {n} samples along axis {axis}"
            )
    total = arr.size

    def fill(t):
        shifted = arr[tuple(slice(max(ti, 0), n + min(ti, 0)) for ti, n in zip(t, dims))]
        base = arr[tuple(slice(max(-ti, 0), n + min(-ti, 0)) for ti, n in zip(t, dims))]
        return np.vdot(base, shifted) / total

    return CorrelationSignal(gamma, _fill_hermitian(gamma, fill))


@dataclass(frozen=True)
class SpectralComposition:
    """Point peaks, single-axis planes, and white noise in the spectrum.

    peaks: (frequency tuple in [0,1)^d, power > 0) pairs.
    planes: (axis, frequency in [0,1), power > 0) triples; a plane has
        uniform unit density over every other axis, so its lag
        contribution is confined to lags whose other components vanish.
    noise_var: white noise variance, contributing only at the zero lag.
    """

    peaks: tuple = ()
    planes: tuple = ()
    noise_var: float = 0.0

    def __post_init__(self):
        peaks = tuple((tuple(float(f) for f in fs), float(p)) for fs, p in self.peaks)
        planes = tuple((int(a), float(f), float(p)) for a, f, p in self.planes)
        object.__setattr__(self, "peaks", peaks)
        object.__setattr__(self, "planes", planes)
        object.__setattr__(self, "noise_var", float(self.noise_var))
        for fs, p in peaks:
            if p <= 0:
                raise ValueError("peak powers must be > 0")
            if any(not 0 <= f < 1 for f in fs):
                raise ValueError(f"peak frequencies must lie in [0, 1), got {fs}")
        for axis, f, p in planes:
            if p <= 0:
                raise ValueError("plane powers must be > 0")
            if axis < 0:
                raise ValueError("plane axis must be >= 0")
            if not 0 <= f < 1:
                raise ValueError(f"plane frequency must lie in [0, 1), got {f}")
        if self.noise_var < 0:
            raise ValueError("noise variance must be >= 0")

    def mirrored(self) -> "SpectralComposition":
        """Composition with the conjugate mirror of every component added."""
        peaks = self.peaks + tuple(
            (tuple((-f) % 1.0 for f in fs), p) for fs, p in self.peaks
        )
        planes = self.planes + tuple(
            (axis, (-f) % 1.0, p) for axis, f, p in self.planes
        )
        return SpectralComposition(peaks, planes, self.noise_var)


def synth_correlation(comp: SpectralComposition, gamma,
                      symmetrize: bool = False) -> CorrelationSignal:
    """Closed-form lags of a spectral composition.

    A peak of power P at frequency tuple f contributes P e^{-j 2 pi f.t};
    a plane on one axis contributes P e^{-j 2 pi f t_axis} at lags whose
    other components are zero; white noise adds its variance at the zero
    lag. With ``symmetrize`` the conjugate mirror of every component is
    added first, which makes all lags real.
    """
    gamma = tuple(int(g) for g in gamma)
    d = len(gamma)
    for fs, _ in comp.peaks:
        if len(fs) != d:
            raise DimensionMismatch(
                f"peak frequency tuple {fs} for a {d}-dimensional signal"
            )
    for axis, _, _ in comp.planes:
        if axis >= d:
            raise DimensionMismatch(f"plane axis {axis} for a {d}-dimensional signal")
    if symmetrize:
        comp = comp.mirrored()

    def fill(t):
        acc = 0j
        for fs, power in comp.peaks:
            acc += power * np.exp(-2j * np.pi * math.fsum(f * ti for f, ti in zip(fs, t)))
        for axis, f, power in comp.planes:
            if all(ti == 0 for l, ti in enumerate(t) if l != axis):
                acc += power * np.exp(-2j * np.pi * f * t[axis])
        if all(ti == 0 for ti in t):
            acc += comp.noise_var
        return acc

    return CorrelationSignal(gamma, _fill_hermitian(gamma, fill))


@dataclass(frozen=True)
class BlockToeplitzMatrix:
    """Hermitian matrix of a correlation signal under one nesting.

    Shift-invariant along every nested dimension slot (d-time Toeplitz).
    """

    spec: DimSpec
    nesting: Nesting
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.shape != (self.spec.q, self.spec.q):
            raise ValueError(f"entries shape {arr.shape}, expected {(self.spec.q,) * 2}")
        scale = float(np.max(np.abs(arr), initial=0.0))
        if np.max(np.abs(arr - arr.conj().T), initial=0.0) > HERMITIAN_REL_TOL * max(scale, 1e-300):
            raise ValueError("entries are not Hermitian")
        object.__setattr__(self, "entries", arr)


def assemble(c: CorrelationSignal, nesting: Nesting | None = None) -> BlockToeplitzMatrix:
    """q x q matrix R[i, j] = c(m(i) - m(j)) under a nesting.

    m(.) maps a flat index to its per-dimension digits; differences are
    taken per original dimension label, so the result is Hermitian and
    carries a Toeplitz character in every slot.
    """
    spec = DimSpec(c.gamma)
    if nesting is None:
        nesting = Nesting.identity(spec.d)
    st = strides(spec, nesting)
    flats = np.arange(spec.q)
    gather = []
    for dim in range(spec.d):
        slot = nesting.slot_of(dim)
        digits = (flats // st.q[slot]) % st.extents[slot]
        gather.append(digits[:, None] - digits[None, :] + (spec.gamma[dim] - 1))
    entries = c.lags[tuple(gather)]
    return BlockToeplitzMatrix(spec, nesting, entries)


def check_positive_definite(r) -> bool:
    """True iff Cholesky succeeds with every pivot above the scale floor."""
    entries = r.entries if isinstance(r, BlockToeplitzMatrix) else np.asarray(r)
    try:
        cholesky(entries)
    except NotPositiveDefinite:
        return False
    return True


def ndcorr_lines(c: CorrelationSignal) -> list[str]:
    """Text lines of the ``ndcorr 1`` format.

    Line 1 is the magic, line 2 the orders, then one line per lag tuple
    in lexicographic order: the integer lag components followed by the
    real and imaginary parts.
    """
    offset = tuple(g - 1 for g in c.gamma)
    lines = [NDCORR_MAGIC, "gamma: " + " ".join(str(g) for g in c.gamma)]
    for idx in np.ndindex(*c.lags.shape):
        t = tuple(i - o for i, o in zip(idx, offset))
        v = c.lags[idx]
        lines.append(" ".join([str(ti) for ti in t] + [_fmt(v.real), _fmt(v.imag)]))
    return lines


def save_ndcorr(c: CorrelationSignal, path) -> None:
    """Write the ``ndcorr 1`` text format to a file."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(ndcorr_lines(c)) + "\n")


def load_ndcorr(path) -> CorrelationSignal:
    """Read an ``ndcorr 1`` file, validating shape and Hermitian symmetry."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != NDCORR_MAGIC:
        raise FileFormatError(f"{path}: missing '{NDCORR_MAGIC}' header line")
    if len(lines) < 2 or not lines[1].startswith("gamma:"):
        raise FileFormatError(f"{path}: missing 'gamma:' line")
    try:
        gamma = tuple(int(tok) for tok in lines[1].split()[1:])
    except ValueError as exc:
        raise FileFormatError(f"{path}: malformed gamma line: {lines[1]!r}") from exc
    if not gamma or any(g < 1 for g in gamma):
        raise FileFormatError(f"{path}: invalid orders {gamma}")
    d = len(gamma)
    shape = tuple(2 * g - 1 for g in gamma)
    expected_rows = math.prod(shape)
    rows = lines[2:]
    if len(rows) != expected_rows:
        raise FileFormatError(
            f"{path}: expected {expected_rows} lag lines, found {len(rows)}"
        )
    lags = np.zeros(shape, dtype=complex)
    seen = np.zeros(shape, dtype=bool)
    for ln in rows:
        toks = ln.split()
        if len(toks) != d + 2:
            raise FileFormatError(f"{path}: malformed lag line: {ln!r}")
        try:
            t = tuple(int(tok) for tok in toks[:d])
            re, im = float(toks[d]), float(toks[d + 1])
        except ValueError as exc:
            raise FileFormatError(f"{path}: malformed lag line: {ln!r}") from exc
        if any(abs(ti) > g - 1 for ti, g in zip(t, gamma)):
            raise FileFormatError(f"{path}: lag {t} outside the box for orders {gamma}")
        idx = tuple(ti + g - 1 for ti, g in zip(t, gamma))
        if seen[idx]:
            raise FileFormatError(f"{path}: duplicate lag {t}")
        seen[idx] = True
        lags[idx] = complex(re, im)
    try:
        return CorrelationSignal(gamma, lags)
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
