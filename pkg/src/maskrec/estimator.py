"""The averaged observed spectrogram and the quantile-threshold mask estimate.

The estimator thresholds the average spectrogram of the filtered
observations at one quarter of its maximum.  The threshold is relative, so
the estimate is invariant under rescaling of the noise level: for a fixed
seed the returned mask is bit-identical for every sigma.  Nothing in this
module accepts a noise variance; the optional ``sigma_known`` field on
:class:`AvgSpectrogram` is carried for diagnostics only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, DimensionError
from .noise import KIND_COMPLEXIFIED, NoiseBatch, complexify, filter_batch
from .tfcore import TFGrid, Window


@dataclass(frozen=True)
class AvgSpectrogram:
    """Mean spectrogram of K filtered realizations, in plane-density units."""

    rho: np.ndarray
    grid: TFGrid
    count: int
    window_label: str
    sigma_known: float | None = None


@dataclass(frozen=True)
class MaskEstimate:
    """Thresholded mask: cells where rho >= threshold = max_rho / 4."""

    cells: np.ndarray
    grid: TFGrid
    threshold: float
    max_rho: float


def average_spectrogram(
    filtered: np.ndarray, phi: Window, sigma_known: float | None = None
) -> AvgSpectrogram:
    """rho(z) = mean_k of n * |stft(y_k, phi)(z)|^2.

    The density scaling matches the field of ``locop.theta``: at unit noise
    variance the expectation of rho is exactly that field.  The factor n
    cancels the transform's 1/sqrt(n), so each row is the plain DFT power
    of the windowed realization.
    """
    filtered = np.atleast_2d(np.asarray(filtered, dtype=np.complex128))
    if filtered.shape[0] < 1 or filtered.size == 0:
        raise ConfigurationError("average_spectrogram needs at least one realization")
    n = phi.n
    if filtered.shape[1] != n:
        raise DimensionError(
            f"realization length {filtered.shape[1]} != window length {n}"
        )
    rho = np.empty((n, n))
    for x in range(n):
        B = np.fft.fft(filtered * np.conj(np.roll(phi.samples, x)), axis=1)
        rho[x] = np.mean(np.abs(B) ** 2, axis=0)
    return AvgSpectrogram(
        rho=rho,
        grid=phi.grid,
        count=filtered.shape[0],
        window_label=phi.label,
        sigma_known=sigma_known,
    )


def estimate_mask(avg: AvgSpectrogram) -> MaskEstimate:
    """Threshold the average spectrogram at a quarter of its maximum.

    Ties at the threshold are included.  An identically-zero rho has no
    scale to threshold against and raises :class:`DegenerateInputError`
    rather than returning an empty mask, since the noise model guarantees
    rho > 0 almost surely and silence would hide upstream bugs.
    """
    max_rho = float(avg.rho.max())
    if max_rho <= 0.0:
        raise DegenerateInputError("average spectrogram is identically zero")
    threshold = max_rho / 4.0
    return MaskEstimate(
        cells=avg.rho >= threshold,
        grid=avg.grid,
        threshold=threshold,
        max_rho=max_rho,
    )


def level_set(avg: AvgSpectrogram, delta: float) -> np.ndarray:
    """Deterministic-threshold level set {z : rho(z) >= delta}."""
    if delta <= 0:
        raise ConfigurationError(f"level-set threshold must be positive, got {delta}")
    return avg.rho >= delta


def estimate_mask_real(batch: NoiseBatch, H: np.ndarray, phi: Window) -> MaskEstimate:
    """Estimate from noise of either kind via pairwise complexification.

    Requires K >= 4 realizations; uses the K' = floor(K/2) complexified
    realizations.  Valid regardless of whether the ambient noise is real or
    complex.
    """
    if batch.kind == KIND_COMPLEXIFIED:
        raise ConfigurationError("batch has already been complexified")
    if batch.count < 4:
        raise ConfigurationError(
            f"the complexified estimator needs K >= 4, got {batch.count}"
        )
    paired = complexify(batch)
    filtered = filter_batch(paired, H)
    return estimate_mask(average_spectrogram(filtered, phi))
