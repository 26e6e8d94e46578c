"""Time-frequency localization operators and their spectral diagnostics.

``assemble_locop`` realizes the analyze -> mask -> synthesize map as an
n x n Hermitian matrix.  On the full lattice the analysis map is an
isometry, so the operator is positive semidefinite with eigenvalues in
[0, 1] and trace equal to the mask measure, exactly.

The auxiliary field computed by :func:`theta` is the noise-free profile the
averaged observed spectrogram concentrates around; its normalization is
fixed once by the analytically forced case (full mask -> field identically
1, equivalently a factor n on raw squared transform values) and the same
scale is used everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ModelError, NumericError
from .maskgeom import Mask, distance_field, measure, perimeter
from .tfcore import TFGrid, Window, offset_distances, stft

_EIG_RANGE_TOL = 1e-8
_THETA_CHUNK = 64


def assemble_locop(mask: Mask, g: Window) -> np.ndarray:
    """Matrix of f -> istft(chi * stft(f, g), g); Hermitian and PSD.

    Built from the kernel
    ``H[t, s] = (1/n) sum_{(x, xi) in mask} g(t-x) conj(g(s-x)) e^{2 pi i xi (t-s)/n}``
    by accumulating, for each time column x, the frequency sum as an inverse
    DFT of the mask row.
    """
    if mask.grid.n != g.n:
        raise DimensionError(f"mask grid {mask.grid.n} != window length {g.n}")
    n = g.n
    # E[x, tau] = sum_xi chi(x, xi) e^{2 pi i xi tau / n}
    E = n * np.fft.ifft(mask.cells.astype(np.complex128), axis=1)
    diff = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    H = np.zeros((n, n), dtype=np.complex128)
    for x in range(n):
        gx = np.roll(g.samples, x)
        H += np.outer(gx, np.conj(gx)) * E[x][diff]
    H /= n
    # enforce exact Hermitian symmetry against rounding drift
    return (H + H.conj().T) / 2


@dataclass(frozen=True)
class LocOpSpectrum:
    """Full eigendecomposition of a localization operator.

    ``eigenvalues`` are descending and clamped to [0, 1]; column m of
    ``eigenvectors`` is the orthonormal eigenvector for eigenvalue m.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    omega_measure: float
    grid: TFGrid


def spectrum(H: np.ndarray, omega_measure: float) -> LocOpSpectrum:
    """Eigendecompose a Hermitian localization operator.

    Eigenvalues outside [-1e-8, 1 + 1e-8] indicate a broken operator and
    raise :class:`ModelError`; smaller excursions are clamped to keep
    downstream squared sums stable.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionError(f"operator must be square, got shape {H.shape}")
    if np.max(np.abs(H - H.conj().T)) > 1e-10:
        raise DimensionError("operator is not Hermitian")
    try:
        vals, vecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    if vals.min() < -_EIG_RANGE_TOL or vals.max() > 1 + _EIG_RANGE_TOL:
        raise ModelError(
            f"eigenvalues outside [0, 1] beyond tolerance: "
            f"min={vals.min()!r} max={vals.max()!r}"
        )
    order = slice(None, None, -1)
    return LocOpSpectrum(
        eigenvalues=np.clip(vals[order], 0.0, 1.0),
        eigenvectors=vecs[:, order],
        omega_measure=float(omega_measure),
        grid=TFGrid(H.shape[0]),
    )


def _eigenfunction_power(
    spec: LocOpSpectrum, phi: Window, weights: np.ndarray
) -> np.ndarray:
    """sum_m weights[m] * n * |stft(f_m, phi)(z)|^2, accumulated in chunks.

    With the transform's normalization, n * |stft|^2 equals the squared
    modulus of the plain DFT of the windowed signal, so the factor n is
    absorbed by skipping the 1/sqrt(n) scaling.
    """
    n = spec.grid.n
    if phi.n != n:
        raise DimensionError("window length does not match the spectrum's grid")
    out = np.zeros((n, n))
    vectors = spec.eigenvectors.T  # rows are eigenvectors
    for start in range(0, n, _THETA_CHUNK):
        stop = min(start + _THETA_CHUNK, n)
        block = vectors[start:stop]
        w = weights[start:stop]
        if not np.any(w):
            continue
        for x in range(n):
            B = np.fft.fft(block * np.conj(np.roll(phi.samples, x)), axis=1)
            out[x] += np.einsum("m,mf->f", w, np.abs(B) ** 2)
    return out


@dataclass(frozen=True)
class ThetaField:
    """Noise-free profile of the averaged observed spectrogram at unit variance."""

    values: np.ndarray
    grid: TFGrid


def theta(spec: LocOpSpectrum, phi: Window) -> ThetaField:
    """Field theta(z) = sum_m lambda_m^2 * n * |stft(f_m, phi)(z)|^2.

    Bounded by 1 everywhere; its plane integral is at most the mask
    measure.  For the full mask it is identically 1.
    """
    values = _eigenfunction_power(spec, phi, spec.eigenvalues**2)
    return ThetaField(values=values, grid=spec.grid)


def theta_first_moment(
    spec: LocOpSpectrum, phi: Window, mask: Mask, g: Window
) -> float:
    """Defect of the first-moment identity, computed by two independent routes.

    ``sum_m lambda_m * n * |stft(f_m, phi)(z)|^2`` must equal the cyclic
    convolution of the mask indicator with ``|stft(g, phi)|^2`` (the latter
    already carries one factor of the cell measure).  Returns the maximum
    absolute difference over the lattice; expected < 1e-8.
    """
    lhs = _eigenfunction_power(spec, phi, spec.eigenvalues)
    q = np.abs(stft(g.samples, phi).values) ** 2
    rhs = np.real(np.fft.ifft2(np.fft.fft2(mask.cells.astype(float)) * np.fft.fft2(q)))
    return float(np.max(np.abs(lhs - rhs)))


def double_orthogonality_defect(
    spec: LocOpSpectrum, mask: Mask, g: Window, m_max: int
) -> float:
    """Defect of sum_{z in mask} stft(f_m)(z) conj(stft(f_n)(z)) = lambda_m delta_mn.

    The lattice sum over the mask (counting norm) carries the cell measure
    through the transform normalization, so it reproduces the eigenvalues
    exactly.  Returns the max absolute defect over m, n <= m_max.
    """
    if m_max > spec.grid.n:
        raise DimensionError(f"m_max {m_max} exceeds grid size {spec.grid.n}")
    n = spec.grid.n
    vectors = spec.eigenvectors.T[:m_max]
    transforms = np.empty((m_max, n, n), dtype=np.complex128)
    for x in range(n):
        transforms[:, x, :] = np.fft.fft(
            vectors * np.conj(np.roll(g.samples, x)), axis=1
        )
    transforms /= np.sqrt(n)
    gram = np.einsum(
        "mxf,nxf->mn", transforms * mask.cells[None], np.conj(transforms)
    )
    return float(np.max(np.abs(gram - np.diag(spec.eigenvalues[:m_max]))))


def ambiguity_moment(f: Window, window: Window) -> float:
    """First absolute moment of the cross-ambiguity density of two windows.

    ``sum_z |stft(f, window)(z)|^2 |z|`` with |z| the torus distance from 0
    in continuous units; the raw squared transform integrates to 1, so this
    matches the continuum moment of the unit-mass density.
    """
    values = np.abs(stft(f.samples, window).values) ** 2
    return float(np.sum(values * offset_distances(window.grid)))


@dataclass(frozen=True)
class LargenessCheck:
    """Outcome of the measure-dominates-perimeter condition."""

    passed: bool
    lhs: float
    rhs: float


def check_largeness(mask: Mask, g: Window) -> LargenessCheck:
    """Check |mask| >= max(2, 8 * moment(g, g) * perimeter)."""
    lhs = measure(mask)
    rhs = float(max(2.0, 8.0 * ambiguity_moment(g, g) * perimeter(mask)))
    return LargenessCheck(passed=bool(lhs >= rhs), lhs=lhs, rhs=rhs)


def plateau_violations(spec: LocOpSpectrum) -> int:
    """Count of m <= |mask|/2 with lambda_m < 3/4 (expected 0 under largeness)."""
    m_half = int(np.floor(spec.omega_measure / 2))
    if m_half < 1:
        return 0
    m_half = min(m_half, spec.eigenvalues.size)
    return int(np.count_nonzero(spec.eigenvalues[:m_half] < 0.75))


def far_field_defect(
    spec: LocOpSpectrum, mask: Mask, g: Window, phi: Window
) -> float:
    """Max violation of the pointwise tail bound on |chi - theta|.

    For each cell z let R_z be the torus distance to the nearest
    opposite-value cell; then ``|chi(z) - theta(z)|`` is bounded by four
    times the mass of |stft(g, phi)|^2 outside radius R_z.  Returns the
    maximum of (left side - right side); values <= 0 mean the bound holds.
    """
    th = theta(spec, phi).values
    chi = mask.cells.astype(float)
    inside = distance_field(~mask.cells, mask.grid)
    outside = distance_field(mask.cells, mask.grid)
    radius = np.where(mask.cells, inside, outside)

    q = np.abs(stft(g.samples, phi).values) ** 2
    dist = offset_distances(mask.grid)
    order = np.argsort(dist.ravel(), kind="stable")
    sorted_dist = dist.ravel()[order]
    # tail(R) = mass at offsets with |z| >= R
    suffix = np.concatenate([np.cumsum(q.ravel()[order][::-1])[::-1], [0.0]])

    idx = np.searchsorted(sorted_dist, radius.ravel(), side="left")
    tails = suffix[idx].reshape(radius.shape)
    return float(np.max(np.abs(chi - th) - 4.0 * tails))


def regularization_defect(mask: Mask, g: Window, phi: Window) -> tuple[float, float]:
    """L1 distance between the smoothed and raw indicators, with its bound.

    Returns ``(lhs, rhs)`` where lhs = ||chi * psi - chi||_1 for the
    unit-mass smoothing kernel psi = |stft(g, phi)|^2 and
    rhs = moment(g, phi) * perimeter.  The bound holds exactly on the
    lattice; callers compare with a small slack for grid effects.
    """
    q = np.abs(stft(g.samples, phi).values) ** 2
    chi = mask.cells.astype(float)
    conv = np.real(np.fft.ifft2(np.fft.fft2(chi) * np.fft.fft2(q)))
    lhs = float(np.sum(np.abs(conv - q.sum() * chi)) * mask.grid.cell_measure)
    rhs = ambiguity_moment(g, phi) * perimeter(mask)
    return lhs, rhs
