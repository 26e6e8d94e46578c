"""Discrete Gabor analysis on the full n x n time-frequency lattice.

Sampling dictionary
-------------------
A length-n signal represents samples of a function on the real line at the
points t_k = (k - n/2) / sqrt(n), so one period of the cyclic signal covers
an interval of length sqrt(n).  The time-frequency plane is then an n x n
grid of cells of side ``1/sqrt(n)`` and measure ``1/n``; the total plane
measure equals n.

With the normalization used here,

    V(x, xi) = n^{-1/2} * sum_t f(t) * conj(g((t - x) mod n)) * e^{-2 pi i xi t / n},

the full-lattice transform is an exact isometry into the n^2-point lattice
equipped with the counting norm: ``sum |V|^2 = ||f||^2 ||g||^2``.  Because a
single lattice cell carries measure 1/n, the squared modulus ``|V|^2``
already absorbs one factor of the cell measure; plane-density units are
recovered by ``spectrogram`` which multiplies by n.  All continuum-style
identities in the package (trace, double orthogonality, moments) hold
exactly on the lattice under this dictionary.

All functions here are pure; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError

WINDOW_GAUSSIAN = "gaussian"
WINDOW_GAUSSIAN_T2 = "gaussian_t2"
WINDOW_CUSTOM = "custom"

#: Number of wrap-around periods summed when periodizing the Gaussian.
#: Three already suffice at double precision for n >= 16; five adds margin.
PERIODIZATION_TERMS = 5

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class TFGrid:
    """The n x n discretization of the time-frequency plane."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 4:
            raise ConfigurationError(f"grid size must be at least 4, got {self.n}")

    @property
    def cell_measure(self) -> float:
        return 1.0 / self.n

    @property
    def cell_side(self) -> float:
        return 1.0 / np.sqrt(self.n)

    @property
    def plane_measure(self) -> float:
        return float(self.n)


@dataclass
class Window:
    """A unit-norm analysis/synthesis window.

    ``samples`` must have l2 norm 1 within 1e-12; use :func:`make_window`
    or :func:`custom_window` to construct one.
    """

    samples: np.ndarray
    label: str = WINDOW_CUSTOM

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 1:
            raise ConfigurationError("window samples must be a 1-D vector")
        norm = np.linalg.norm(self.samples)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ConfigurationError(
                f"window is not unit-norm (||g|| = {norm!r}); normalize first"
            )

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def grid(self) -> TFGrid:
        return TFGrid(self.n)


@dataclass(frozen=True)
class TFMatrix:
    """Values of a full-lattice transform, indexed ``values[x, xi]``."""

    values: np.ndarray
    grid: TFGrid


def time_coordinates(grid: TFGrid) -> np.ndarray:
    """Continuous time coordinates t_k = (k - n/2)/sqrt(n) of the samples."""
    k = np.arange(grid.n)
    return (k - grid.n / 2) / np.sqrt(grid.n)


def make_window(grid: TFGrid, label: str) -> Window:
    """Build one of the two stock windows on ``grid``.

    ``gaussian`` is the periodization of 2^{1/4} e^{-pi t^2} over the
    n-cycle, l2-normalized and centered at index n/2.  ``gaussian_t2``
    multiplies the pre-normalization Gaussian by t^2 and renormalizes,
    which puts a zero at the center sample.
    """
    if label not in (WINDOW_GAUSSIAN, WINDOW_GAUSSIAN_T2):
        raise ConfigurationError(f"unknown window label {label!r}")
    t = time_coordinates(grid)
    period = np.sqrt(grid.n)
    samples = np.zeros(grid.n)
    for p in range(-PERIODIZATION_TERMS, PERIODIZATION_TERMS + 1):
        samples += 2.0**0.25 * np.exp(-np.pi * (t + p * period) ** 2)
    if label == WINDOW_GAUSSIAN_T2:
        samples = samples * t**2
    samples = samples / np.linalg.norm(samples)
    return Window(samples=samples.astype(np.complex128), label=label)


def custom_window(samples: np.ndarray, normalize: bool = True) -> Window:
    """Wrap user-supplied samples as a window, normalizing by default."""
    samples = np.asarray(samples, dtype=np.complex128)
    if normalize:
        norm = np.linalg.norm(samples)
        if norm == 0:
            raise ConfigurationError("cannot normalize a zero window")
        samples = samples / norm
    return Window(samples=samples, label=WINDOW_CUSTOM)


def tf_shift(f: np.ndarray, z: tuple[int, int], grid: TFGrid) -> np.ndarray:
    """Time-frequency shift pi(z)f(t) = e^{2 pi i xi t / n} f((t - x) mod n)."""
    x, xi = z
    f = np.asarray(f, dtype=np.complex128)
    if f.shape[-1] != grid.n:
        raise DimensionError(f"signal length {f.shape[-1]} != grid size {grid.n}")
    t = np.arange(grid.n)
    phase = np.exp(2j * np.pi * xi * t / grid.n)
    return phase * np.roll(f, x, axis=-1)


def _check_pair(f: np.ndarray, g: Window) -> np.ndarray:
    f = np.asarray(f, dtype=np.complex128)
    if f.shape[-1] != g.n:
        raise DimensionError(
            f"signal length {f.shape[-1]} does not match window length {g.n}"
        )
    return f


def stft_stack(signals: np.ndarray, g: Window) -> np.ndarray:
    """Full-lattice transform of a stack of signals.

    ``signals`` has shape (..., n); the result has shape (..., n, n) with
    the time index x before the frequency index xi.
    """
    signals = _check_pair(signals, g)
    n = g.n
    out = np.empty(signals.shape[:-1] + (n, n), dtype=np.complex128)
    for x in range(n):
        out[..., x, :] = np.fft.fft(signals * np.conj(np.roll(g.samples, x)), axis=-1)
    out /= np.sqrt(n)
    return out


def stft(f: np.ndarray, g: Window) -> TFMatrix:
    """Analyze a single signal with window ``g``; an exact isometry."""
    f = _check_pair(f, g)
    if f.ndim != 1:
        raise DimensionError("stft expects a 1-D signal; use stft_stack for batches")
    return TFMatrix(values=stft_stack(f, g), grid=g.grid)


def istft(F: TFMatrix, g: Window) -> np.ndarray:
    """Adjoint of :func:`stft`; inverts it on the range for a unit window."""
    if F.grid.n != g.n:
        raise DimensionError(f"grid size {F.grid.n} != window length {g.n}")
    n = g.n
    f = np.zeros(n, dtype=np.complex128)
    for x in range(n):
        f += np.roll(g.samples, x) * np.fft.ifft(F.values[x]) * n
    return f / np.sqrt(n)


def spectrogram(F: TFMatrix) -> np.ndarray:
    """Squared modulus of the transform in plane-density units.

    Summing the result against the cell measure gives ``||f||^2 ||g||^2``,
    matching the continuum normalization of the energy density.
    """
    return F.grid.n * np.abs(F.values) ** 2


def reproducing_kernel(g: Window, z: tuple[int, int], w: tuple[int, int]) -> complex:
    """Kernel K_g(z, w) = <pi(w)g, pi(z)g> of the transform's range.

    ``K(z, z) = 1`` for the unit-norm window, and the lattice reproducing
    identity holds with the cell measure as the integration weight:
    ``V(z) = sum_w V(w) K_g(z, w) / n``.
    """
    n = g.grid.n
    for point in (z, w):
        x, xi = point
        if not (0 <= x < n and 0 <= xi < n):
            raise DimensionError(f"grid point {point} outside the {n} x {n} lattice")
    a = tf_shift(g.samples, w, g.grid)
    b = tf_shift(g.samples, z, g.grid)
    return complex(np.dot(a, np.conj(b)))


def offset_distances(grid: TFGrid) -> np.ndarray:
    """Torus distance |z| of every lattice offset from 0, in continuous units.

    ``|z| = sqrt(min(x, n-x)^2 + min(xi, n-xi)^2) / sqrt(n)``.
    """
    i = np.arange(grid.n)
    d = np.minimum(i, grid.n - i).astype(float)
    return np.sqrt(d[:, None] ** 2 + d[None, :] ** 2) / np.sqrt(grid.n)


def ambiguity_l1(g: Window) -> float:
    """Diagnostic: lattice stand-in for the integral of |V_g g| over the plane.

    The continuum quantity has no canonical discrete unit on this lattice;
    the value returned here (amplitude rescaled to density units, summed
    against the cell measure) is reported for inspection only and feeds no
    estimator.
    """
    values = stft(g.samples, g).values
    return float(np.sum(np.abs(values)) / np.sqrt(g.n))
