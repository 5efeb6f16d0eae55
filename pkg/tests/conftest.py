"""Shared builders for randomized test inputs.

Everything here is seeded by the caller; no global random state.
"""

from __future__ import annotations

import numpy as np

from ndspec import (
    CorrelationSignal,
    DimSpec,
    Nesting,
    SpectralComposition,
    strides,
    synth_correlation,
)


def random_composition(rng, d, n_peaks=3, noise_floor=0.2):
    """Random point peaks plus a noise floor; always positive definite."""
    peaks = tuple(
        (tuple(rng.random(d)), float(rng.random() + 0.3)) for _ in range(n_peaks)
    )
    return SpectralComposition(peaks=peaks, noise_var=noise_floor + rng.random())


def random_correlation(rng, gamma, n_peaks=3, noise_floor=0.2) -> CorrelationSignal:
    """Random positive definite correlation signal on the given orders."""
    comp = random_composition(rng, len(gamma), n_peaks, noise_floor)
    return synth_correlation(comp, gamma)


def random_correlation_1d(rng, order, n_peaks=3, noise_floor=0.2) -> CorrelationSignal:
    return random_correlation(rng, (order,), n_peaks, noise_floor)


def separable_correlation(factors) -> CorrelationSignal:
    """Outer product c(t) = prod_i c_i(t_i) of 1D signals."""
    lags = factors[0].lags
    for factor in factors[1:]:
        lags = np.multiply.outer(lags, factor.lags)
    gamma = tuple(f.gamma[0] for f in factors)
    return CorrelationSignal(gamma, lags)


def random_pd_matrix(rng, n) -> np.ndarray:
    """Random Hermitian positive definite matrix with unit-scale diagonal."""
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = b @ b.conj().T / n + 0.5 * np.eye(n)
    return 0.5 * (a + a.conj().T)


def random_hermitian(rng, n) -> np.ndarray:
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (b + b.conj().T)


def character_matrix(rng, spec: DimSpec, u: int, nesting: Nesting) -> np.ndarray:
    """Random complex matrix whose entries depend on the slot-u digits only
    through their difference (one Toeplitz character, nothing else)."""
    st = strides(spec, nesting)
    q = spec.q

    def digits(flat):
        return tuple((flat // s) % e for s, e in zip(st.q, st.extents))

    values = {}
    out = np.empty((q, q), dtype=complex)
    for i in range(q):
        di = digits(i)
        for j in range(q):
            dj = digits(j)
            key = (
                tuple(v for slot, v in enumerate(di) if slot != u),
                tuple(v for slot, v in enumerate(dj) if slot != u),
                di[u] - dj[u],
            )
            if key not in values:
                values[key] = complex(rng.standard_normal(), rng.standard_normal())
            out[i, j] = values[key]
    return out
