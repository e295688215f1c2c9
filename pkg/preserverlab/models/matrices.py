"""Results of the dense decompositions."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

ComplexMatrix = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class EigDecomposition:
    """Spectral decomposition of a hermitian matrix, values ascending."""

    values: RealArray
    vectors: ComplexMatrix
    sweeps: int = 0

    def reconstruct(self) -> ComplexMatrix:
        """Return vectors · diag(values) · vectors*."""
        return (self.vectors * self.values) @ self.vectors.conj().T


@dataclass(frozen=True)
class Svd:
    """Singular value decomposition a = u · diag(sigma) · v*.

    sigma has r = min(rows, cols) entries. Thin form: ``u`` is rows × r and
    ``v`` is cols × r with orthonormal columns. Full form: both are square
    unitaries whose leading r columns are the thin factors.
    """

    u: ComplexMatrix
    sigma: RealArray
    v: ComplexMatrix
    sweeps: int = 0

    def reconstruct(self) -> ComplexMatrix:
        r = self.sigma.size
        return (self.u[:, :r] * self.sigma) @ self.v[:, :r].conj().T

    def rank(self, tol_rank: float) -> int:
        """Count singular values above ``tol_rank`` times the largest one."""
        if self.sigma.size == 0 or self.sigma[0] == 0.0:
            return 0
        return int(np.sum(self.sigma > tol_rank * self.sigma[0]))
