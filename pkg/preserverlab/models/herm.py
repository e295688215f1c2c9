"""Coordinate representations of hermitian spaces and real-linear maps."""

from dataclasses import dataclass, field

from preserverlab.models.enums import DomainKind
from preserverlab.models.matrices import ComplexMatrix, RealArray


@dataclass(frozen=True)
class HermBasis:
    """Frobenius-orthonormal basis of H_n (or of its traceless part).

    ``elements`` is a (count, n, n) stack in canonical order.
    """

    n: int
    traceless: bool
    elements: ComplexMatrix = field(repr=False)

    @property
    def count(self) -> int:
        return int(self.elements.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermBasis):
            return NotImplemented
        return self.n == other.n and self.traceless == other.traceless

    def __hash__(self) -> int:
        return hash((self.n, self.traceless))


@dataclass(frozen=True)
class HermVec:
    """Real coordinates of a hermitian matrix in a HermBasis."""

    basis: HermBasis
    coords: RealArray


@dataclass(frozen=True)
class HermMap:
    """Real-linear map between hermitian spaces, as a real matrix.

    ``matrix`` has shape (codomain.count, domain.count).
    """

    domain: HermBasis
    codomain: HermBasis
    matrix: RealArray = field(repr=False)

    @property
    def n_in(self) -> int:
        return self.domain.n

    @property
    def n_out(self) -> int:
        return self.codomain.n


@dataclass(frozen=True)
class RealLinearMatMap:
    """Real-linear map from H_n, H_n^0, M_n or C^n into M_m.

    Codomain coordinates are the entries of an m×m complex matrix in row-major
    order with real and imaginary parts adjacent; ``matrix`` has shape
    (2·m², domain dimension).
    """

    domain_kind: DomainKind
    n_in: int
    n_out: int
    matrix: RealArray = field(repr=False)
