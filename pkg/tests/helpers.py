"""Brute-force oracles, independent of the package's FFT/EDT code paths."""

import numpy as np


def brute_stft(f, g):
    """Triple-sum evaluation of the lattice transform definition."""
    n = len(f)
    out = np.zeros((n, n), dtype=complex)
    for x in range(n):
        for xi in range(n):
            acc = 0.0j
            for t in range(n):
                acc += f[t] * np.conj(g[(t - x) % n]) * np.exp(-2j * np.pi * xi * t / n)
            out[x, xi] = acc
    return out / np.sqrt(n)


def brute_istft(V, g):
    """Direct adjoint summation."""
    n = V.shape[0]
    f = np.zeros(n, dtype=complex)
    for t in range(n):
        acc = 0.0j
        for x in range(n):
            for xi in range(n):
                acc += V[x, xi] * g[(t - x) % n] * np.exp(2j * np.pi * xi * t / n)
        f[t] = acc
    return f / np.sqrt(n)


def brute_locop(cells, g):
    """Direct kernel sum H[t, s] = (1/n) sum_{z in mask} pi(z)g (pi(z)g)^*."""
    n = cells.shape[0]
    t = np.arange(n)
    H = np.zeros((n, n), dtype=complex)
    for x in range(n):
        for xi in range(n):
            if not cells[x, xi]:
                continue
            pzg = np.exp(2j * np.pi * xi * t / n) * np.roll(g, x)
            H += np.outer(pzg, np.conj(pzg))
    return H / n


def brute_torus_distance(source, n):
    """Min-image Euclidean distance (in continuous units) to a source set."""
    coords = np.argwhere(source)
    out = np.full((n, n), np.inf)
    if coords.size == 0:
        return out
    for i in range(n):
        for j in range(n):
            di = np.minimum(np.abs(coords[:, 0] - i), n - np.abs(coords[:, 0] - i))
            dj = np.minimum(np.abs(coords[:, 1] - j), n - np.abs(coords[:, 1] - j))
            out[i, j] = np.sqrt(float(np.min(di**2 + dj**2))) / np.sqrt(n)
    return out


def random_cells(n, rng, fill=0.3):
    return rng.random((n, n)) < fill
