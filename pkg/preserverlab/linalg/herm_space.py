"""Real coordinates on H_n and H_n^0, and real-linear maps between them."""

from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
import numpy.typing as npt

from preserverlab.core.config import settings
from preserverlab.core.exceptions import DimensionMismatch, NotHermitian, NotTraceless
from preserverlab.linalg.complex_linalg import as_complex, hermitian_deviation, svd
from preserverlab.models.herm import HermBasis, HermMap, HermVec
from preserverlab.models.matrices import ComplexMatrix, RealArray


@lru_cache(maxsize=64)
def canonical_basis(n: int, traceless: bool = False) -> HermBasis:
    """
    Frobenius-orthonormal basis of H_n (or H_n^0) in the fixed order.

    Diagonal part first: E_jj, or for the traceless space the generalized
    Gell-Mann elements (Σ_{j≤l} E_jj − l·E_{l+1,l+1}) / √(l(l+1)). Then, for
    each pair j < k in lexicographic order, S_jk = (E_jk + E_kj)/√2 followed
    by A_jk with entries −i/√2 at (j, k) and i/√2 at (k, j).
    """
    if n < 1:
        raise DimensionMismatch(f"Hermitian space dimension must be >= 1, got {n}")
    elements: list[ComplexMatrix] = []
    if traceless:
        for level in range(1, n):
            g = np.zeros((n, n), dtype=np.complex128)
            g[np.arange(level), np.arange(level)] = 1.0
            g[level, level] = -float(level)
            elements.append(g / np.sqrt(level * (level + 1)))
    else:
        for j in range(n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[j, j] = 1.0
            elements.append(e)
    r = 1.0 / np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=np.complex128)
            s[j, k] = s[k, j] = r
            a = np.zeros((n, n), dtype=np.complex128)
            a[j, k] = -1j * r
            a[k, j] = 1j * r
            elements.extend([s, a])
    stack = np.array(elements, dtype=np.complex128).reshape(len(elements), n, n)
    stack.setflags(write=False)
    return HermBasis(n=n, traceless=traceless, elements=stack)


def _check_member(a: ComplexMatrix, basis: HermBasis, tol: Optional[float]) -> None:
    if a.shape != (basis.n, basis.n):
        raise DimensionMismatch(
            f"Expected a {basis.n}x{basis.n} matrix, got shape {a.shape}",
            details={"expected": basis.n, "shape": list(a.shape)},
        )
    limit = settings.tol_sym(a) if tol is None else tol
    deviation = hermitian_deviation(a)
    if deviation > limit:
        raise NotHermitian(deviation, limit)
    if basis.traceless:
        trace = abs(complex(np.trace(a)))
        if trace > limit:
            raise NotTraceless(trace, limit)


def coordinates(a: npt.ArrayLike, basis: HermBasis, tol: Optional[float] = None) -> RealArray:
    """Coordinates tr(e_i · a) of a hermitian matrix (validated)."""
    a = as_complex(a)
    _check_member(a, basis, tol)
    return np.einsum("kij,ji->k", basis.elements, a).real


def encode(a: npt.ArrayLike, basis: HermBasis, tol: Optional[float] = None) -> HermVec:
    """
    Encode a hermitian matrix in ``basis``.

    Raises:
        NotHermitian: If a deviates from a* by more than tol_sym
        NotTraceless: If the basis is traceless and |tr a| > tol_sym
    """
    return HermVec(basis=basis, coords=coordinates(a, basis, tol))


def decode(v: HermVec) -> ComplexMatrix:
    """Σ coords_i · basis_i."""
    return combine(v.basis, v.coords)


def combine(basis: HermBasis, coords: npt.ArrayLike) -> ComplexMatrix:
    return np.einsum("k,kij->ij", np.asarray(coords, dtype=np.float64), basis.elements)


def map_from_images(
    domain: HermBasis,
    images: Sequence[npt.ArrayLike],
    codomain: HermBasis,
    tol: Optional[float] = None,
) -> HermMap:
    """
    Build the HermMap sending basis element i to images[i].

    Raises:
        DimensionMismatch: If the image count or sizes do not fit
        NotHermitian: If an image is not hermitian
    """
    if len(images) != domain.count:
        raise DimensionMismatch(
            f"Expected {domain.count} images, got {len(images)}",
            details={"expected": domain.count, "received": len(images)},
        )
    columns = [coordinates(img, codomain, tol) for img in images]
    matrix = np.column_stack(columns) if columns else np.zeros((codomain.count, 0))
    return HermMap(domain=domain, codomain=codomain, matrix=matrix)


def map_from_function(
    domain: HermBasis,
    codomain: HermBasis,
    fn: Callable[[ComplexMatrix], npt.ArrayLike],
    tol: Optional[float] = None,
) -> HermMap:
    """Tabulate a linear matrix function on the domain basis."""
    return map_from_images(domain, [fn(e) for e in domain.elements], codomain, tol)


def apply_map(f: HermMap, a: npt.ArrayLike, tol: Optional[float] = None) -> ComplexMatrix:
    """decode(f.matrix · encode(a))."""
    return combine(f.codomain, f.matrix @ coordinates(a, f.domain, tol))


def identity_map(basis: HermBasis) -> HermMap:
    return HermMap(domain=basis, codomain=basis, matrix=np.eye(basis.count))


def compose(f: HermMap, g: HermMap) -> HermMap:
    """Return f ∘ g."""
    if g.codomain != f.domain:
        raise DimensionMismatch(
            "Cannot compose: codomain of the inner map differs from domain of the outer map",
            details={"inner_codomain": g.codomain.n, "outer_domain": f.domain.n},
        )
    return HermMap(domain=g.domain, codomain=f.codomain, matrix=f.matrix @ g.matrix)


def scale_map(f: HermMap, alpha: float) -> HermMap:
    return HermMap(domain=f.domain, codomain=f.codomain, matrix=alpha * f.matrix)


def add_maps(f: HermMap, g: HermMap, alpha: float = 1.0, beta: float = 1.0) -> HermMap:
    """Return α·f + β·g."""
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DimensionMismatch("Cannot add maps with different domains or codomains")
    return HermMap(domain=f.domain, codomain=f.codomain, matrix=alpha * f.matrix + beta * g.matrix)


def restrict_to_traceless(f: HermMap) -> HermMap:
    """Restrict a map on H_n to H_n^0."""
    if f.domain.traceless:
        return f
    sub = canonical_basis(f.domain.n, traceless=True)
    inclusion = np.column_stack([coordinates(e, f.domain) for e in sub.elements])
    return HermMap(domain=sub, codomain=f.codomain, matrix=f.matrix @ inclusion)


def is_injective(f: HermMap, tol_rank: Optional[float] = None) -> bool:
    """Full column rank of the coordinate matrix (relative cutoff tol_rank)."""
    if f.matrix.shape[1] == 0:
        return True
    cutoff = settings.tol_rank if tol_rank is None else tol_rank
    return svd(f.matrix).rank(cutoff) == f.matrix.shape[1]
