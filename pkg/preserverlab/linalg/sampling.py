"""Seeded random matrices: unitaries, frames, projections and involutions."""

from typing import Union

import numpy as np

from preserverlab.models.matrices import ComplexMatrix

Seed = Union[int, np.random.Generator, None]


def make_rng(seed: Seed) -> np.random.Generator:
    """Return a generator for ``seed`` (a Generator is passed through)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> ComplexMatrix:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_frame(rng: np.random.Generator, n: int, k: int) -> ComplexMatrix:
    """Haar-random n×k orthonormal frame (QR of a complex Gaussian, phases fixed)."""
    if k == 0:
        return np.zeros((n, 0), dtype=np.complex128)
    q, r = np.linalg.qr(complex_gaussian(rng, n, k))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_unitary(rng: np.random.Generator, n: int) -> ComplexMatrix:
    """Haar-random n×n unitary."""
    return random_frame(rng, n, n)


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> ComplexMatrix:
    """Random isometry C^cols → C^rows."""
    return random_frame(rng, rows, cols)


def random_projection(rng: np.random.Generator, n: int, k: int) -> ComplexMatrix:
    """Haar-random rank-k projection Q·Q* in H_n."""
    q = random_frame(rng, n, k)
    return q @ q.conj().T


def random_involution(rng: np.random.Generator, k: int) -> ComplexMatrix:
    """Random trace-zero hermitian unitary 2P − I of size 2k."""
    return 2.0 * random_projection(rng, 2 * k, k) - np.eye(2 * k)


def random_hermitian(rng: np.random.Generator, n: int, traceless: bool = False) -> ComplexMatrix:
    g = complex_gaussian(rng, n, n)
    h = (g + g.conj().T) / 2.0
    if traceless:
        h = h - np.trace(h).real / n * np.eye(n)
    return h


def random_unit_vector(rng: np.random.Generator, n: int) -> ComplexMatrix:
    v = complex_gaussian(rng, n, 1)[:, 0]
    return v / np.linalg.norm(v)
