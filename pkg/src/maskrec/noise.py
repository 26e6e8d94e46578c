"""Seeded white-noise batches, complexification, and filtering.

Realization k of a batch is drawn from its own counter-based Philox stream
keyed by ``(seed, k)``, so a realization depends only on the seed and its
index: batches are reproducible, independent of generation order, and safe
to produce in parallel.  Standard-normal draws are scaled by sigma, which
makes sigma-scaling of a batch exact (same seed, entries multiplied by
sigma).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError
from .locop import LocOpSpectrum
from .tfcore import TFGrid

KIND_COMPLEX = "complex"
KIND_REAL = "real"
KIND_COMPLEXIFIED = "complexified"

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class NoiseBatch:
    """K realizations of white noise with per-entry E|N(t)|^2 = sigma^2."""

    realizations: np.ndarray
    sigma: float
    kind: str
    seed: int

    @property
    def count(self) -> int:
        return self.realizations.shape[0]


def _stream(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_noise(
    grid: TFGrid, count: int, sigma: float, kind: str = KIND_COMPLEX, seed: int = 0
) -> NoiseBatch:
    """Draw ``count`` independent white-noise realizations of length n.

    Complex noise has independent real and imaginary parts of variance
    sigma^2 / 2 each; real noise has variance sigma^2.
    """
    if count < 1:
        raise ConfigurationError(f"need at least one realization, got {count}")
    if sigma <= 0:
        raise ConfigurationError(f"sigma must be positive, got {sigma}")
    if kind not in (KIND_COMPLEX, KIND_REAL):
        raise ConfigurationError(f"unknown noise kind {kind!r}")
    n = grid.n
    out = np.empty((count, n), dtype=np.complex128)
    for k in range(count):
        rng = _stream(seed, k)
        if kind == KIND_COMPLEX:
            z = rng.standard_normal(2 * n)
            out[k] = (z[:n] + 1j * z[n:]) / np.sqrt(2.0)
        else:
            out[k] = rng.standard_normal(n)
    out *= sigma
    return NoiseBatch(realizations=out, sigma=float(sigma), kind=kind, seed=seed)


def complexify(batch: NoiseBatch) -> NoiseBatch:
    """Pair realizations as N'_k = N_k + i N_{k+K'}, K' = floor(K/2).

    Turns real noise into K' complex realizations of variance 2 sigma^2
    (the stored sigma reflects that).  Complex input is accepted as well:
    the pairing of independent complex realizations is again complex white
    noise, so the downstream estimator is valid for either kind.
    """
    if batch.kind == KIND_COMPLEXIFIED:
        raise ConfigurationError("batch is already complexified")
    if batch.count < 2:
        raise ConfigurationError("complexification needs at least 2 realizations")
    half = batch.count // 2
    paired = batch.realizations[:half] + 1j * batch.realizations[half : 2 * half]
    return NoiseBatch(
        realizations=paired,
        sigma=batch.sigma * np.sqrt(2.0),
        kind=KIND_COMPLEXIFIED,
        seed=batch.seed,
    )


def filter_batch(batch: NoiseBatch, H: np.ndarray) -> np.ndarray:
    """Apply the operator to every realization; returns a (K, n) array."""
    H = np.asarray(H)
    if H.shape != (batch.realizations.shape[1],) * 2:
        raise DimensionError(
            f"operator shape {H.shape} does not match realizations of length "
            f"{batch.realizations.shape[1]}"
        )
    return batch.realizations @ H.T


def eigen_coefficients(batch: NoiseBatch, spec: LocOpSpectrum) -> np.ndarray:
    """Coefficients alpha[k, m] = <N_k, f_m> against the eigenvector basis.

    For unit-variance complex noise the coefficients are independent
    standard complex Gaussians; their squared moduli sum to ||N_k||^2
    (Parseval for the orthonormal basis).
    """
    if spec.grid.n != batch.realizations.shape[1]:
        raise DimensionError("spectrum grid does not match batch length")
    return batch.realizations @ np.conj(spec.eigenvectors)
