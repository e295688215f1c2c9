"""Real coordinates for M_n and C^n, and real-linear maps into M_m."""

from typing import Callable

import numpy as np
import numpy.typing as npt

from preserverlab.core.exceptions import DimensionMismatch
from preserverlab.linalg.complex_linalg import as_complex
from preserverlab.linalg.herm_space import apply_map, canonical_basis, coordinates
from preserverlab.models.enums import DomainKind
from preserverlab.models.herm import HermMap, RealLinearMatMap
from preserverlab.models.matrices import ComplexMatrix, RealArray


def to_real(z: npt.ArrayLike) -> RealArray:
    """Row-major entries with real and imaginary parts adjacent."""
    arr = as_complex(z)
    return np.stack([arr.real, arr.imag], axis=-1).ravel()


def from_real(v: npt.ArrayLike, shape: tuple[int, ...]) -> ComplexMatrix:
    pairs = np.asarray(v, dtype=np.float64).reshape(*shape, 2)
    return pairs[..., 0] + 1j * pairs[..., 1]


def domain_dimension(kind: DomainKind, n: int) -> int:
    return {
        DomainKind.HERM: n * n,
        DomainKind.HERM0: n * n - 1,
        DomainKind.MATRIX: 2 * n * n,
        DomainKind.VECTOR: 2 * n,
    }[kind]


def domain_elements(kind: DomainKind, n: int) -> list[ComplexMatrix]:
    """Inputs whose images form the columns of a map's real matrix."""
    if kind in (DomainKind.HERM, DomainKind.HERM0):
        return list(canonical_basis(n, kind == DomainKind.HERM0).elements)
    shape = (n, n) if kind == DomainKind.MATRIX else (n,)
    dim = domain_dimension(kind, n)
    return [from_real(np.eye(dim)[i], shape) for i in range(dim)]


def encode_domain(kind: DomainKind, n: int, x: npt.ArrayLike) -> RealArray:
    """Real coordinates of a domain element (validated for hermitian domains)."""
    if kind in (DomainKind.HERM, DomainKind.HERM0):
        return coordinates(x, canonical_basis(n, kind == DomainKind.HERM0))
    arr = as_complex(x)
    expected = (n, n) if kind == DomainKind.MATRIX else (n,)
    if arr.shape != expected:
        raise DimensionMismatch(
            f"Expected domain element of shape {expected}, got {arr.shape}",
            details={"expected": list(expected), "shape": list(arr.shape)},
        )
    return to_real(arr)


def tabulate(
    kind: DomainKind,
    n_in: int,
    n_out: int,
    fn: Callable[[ComplexMatrix], npt.ArrayLike],
) -> RealLinearMatMap:
    """Build a RealLinearMatMap from a real-linear function by evaluating it on a basis."""
    columns = []
    for element in domain_elements(kind, n_in):
        image = as_complex(fn(element))
        if image.shape != (n_out, n_out):
            raise DimensionMismatch(
                f"Image has shape {image.shape}, expected ({n_out}, {n_out})",
            )
        columns.append(to_real(image))
    return RealLinearMatMap(
        domain_kind=kind,
        n_in=n_in,
        n_out=n_out,
        matrix=np.column_stack(columns),
    )


def apply_real(f: RealLinearMatMap, x: npt.ArrayLike) -> ComplexMatrix:
    """Evaluate a RealLinearMatMap."""
    coords = encode_domain(f.domain_kind, f.n_in, x)
    return from_real(f.matrix @ coords, (f.n_out, f.n_out))


def herm_to_real(f: HermMap) -> RealLinearMatMap:
    """View a HermMap as a real-linear map into M_m."""
    kind = DomainKind.HERM0 if f.domain.traceless else DomainKind.HERM
    return tabulate(kind, f.n_in, f.n_out, lambda a: apply_map(f, a))
