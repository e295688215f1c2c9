"""Dense complex-matrix kernel: Jacobi decompositions, products and predicates."""

import logging
from contextlib import contextmanager
from contextvars import ContextVar
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np
import numpy.typing as npt

from preserverlab.core.config import settings
from preserverlab.core.exceptions import DimensionMismatch, NoConvergence, NotHermitian
from preserverlab.models.matrices import ComplexMatrix, EigDecomposition, RealArray, Svd

logger = logging.getLogger(__name__)

_EPS = float(np.finfo(np.float64).eps)

# Additive perturbation of kron outputs; only the self-test negative control sets it.
_kernel_fault: ContextVar[float] = ContextVar("kernel_fault", default=0.0)


@contextmanager
def kernel_fault(scale: float = 1e-3) -> Iterator[None]:
    """Corrupt every ``kron`` result inside the block by ``scale`` in entry (0, 0)."""
    token = _kernel_fault.set(scale)
    try:
        yield
    finally:
        _kernel_fault.reset(token)


def as_complex(a: npt.ArrayLike) -> ComplexMatrix:
    """Return ``a`` as a complex128 array."""
    return np.asarray(a, dtype=np.complex128)


def _require_square(a: ComplexMatrix, routine: str) -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(
            f"{routine} requires a square matrix, got shape {a.shape}",
            details={"shape": list(a.shape)},
        )
    return int(a.shape[0])


def max_abs(a: npt.ArrayLike) -> float:
    """Largest entry modulus (0 for empty input)."""
    arr = np.asarray(a)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def hermitian_deviation(a: ComplexMatrix) -> float:
    """max |a − a*| entrywise."""
    return max_abs(a - a.conj().T)


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return a.conj().T


# ============================================================================
# Jacobi machinery
# ============================================================================


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[npt.NDArray[np.intp], npt.NDArray[np.intp]], ...]:
    """Disjoint (p, q) index sets; together the rounds visit every pair once."""
    players = list(range(n + n % 2))
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = [(players[i], players[size - 1 - i]) for i in range(size // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        if pairs:
            p = np.array([a for a, _ in pairs], dtype=np.intp)
            q = np.array([b for _, b in pairs], dtype=np.intp)
            p.setflags(write=False)
            q.setflags(write=False)
            rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _rotation_parameters(
    app: RealArray,
    aqq: RealArray,
    apq: ComplexMatrix,
) -> tuple[RealArray, RealArray, ComplexMatrix]:
    """Rotation (c, s, phase) annihilating apq in [[app, apq], [conj(apq), aqq]].

    The 2×2 unitary is [[c, s], [−s·conj(phase), c·conj(phase)]].
    """
    mag = np.abs(apq)
    active = mag > 0.0
    safe = np.where(active, mag, 1.0)
    phase = np.where(active, apq / safe, 1.0 + 0.0j)
    theta = (aqq - app) / (2.0 * safe)
    sign = np.where(theta >= 0.0, 1.0, -1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        t = sign / (np.abs(theta) + np.hypot(theta, 1.0))
    t = np.where(active & np.isfinite(t), t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c, phase


def _rotation_matrix(
    n: int,
    p: npt.NDArray[np.intp],
    q: npt.NDArray[np.intp],
    c: RealArray,
    s: RealArray,
    phase: ComplexMatrix,
) -> ComplexMatrix:
    j = np.eye(n, dtype=np.complex128)
    back = np.conj(phase)
    j[p, p] = c
    j[p, q] = s
    j[q, p] = -s * back
    j[q, q] = c * back
    return j


def _off_norm(a: ComplexMatrix) -> float:
    """Frobenius norm of the off-diagonal part, summed directly."""
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _leading_indices(vectors: ComplexMatrix) -> npt.NDArray[np.intp]:
    mags = np.abs(vectors)
    peak = mags.max(axis=0, initial=0.0)
    return np.argmax(mags > 1e-8 * peak, axis=0)


def _normalize_phases(vectors: ComplexMatrix) -> ComplexMatrix:
    """Rotate each column so its first significant component is real positive."""
    if vectors.size == 0:
        return vectors
    leads = _leading_indices(vectors)
    cols = np.arange(vectors.shape[1])
    pivots = vectors[leads, cols]
    mags = np.abs(pivots)
    phases = np.where(mags > 0.0, np.conj(pivots) / np.where(mags > 0.0, mags, 1.0), 1.0)
    return vectors * phases


# ============================================================================
# Decompositions
# ============================================================================


def herm_eig(
    a: npt.ArrayLike,
    tol_sym: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> EigDecomposition:
    """
    Cyclic two-sided Jacobi eigendecomposition of a hermitian matrix.

    Rotations are applied a round at a time (disjoint index pairs), so one
    sweep costs n − 1 dense products.

    Returns:
        EigDecomposition with ascending values; equal values ordered by the
        position of the leading component of their (phase-normalized) vectors

    Raises:
        NotHermitian: If ``a`` deviates from a* by more than tol_sym
        NoConvergence: If the sweep cap is exceeded
    """
    a = as_complex(a)
    n = _require_square(a, "herm_eig")
    tol = settings.tol_sym(a) if tol_sym is None else tol_sym
    deviation = hermitian_deviation(a)
    if deviation > tol:
        raise NotHermitian(deviation, tol)
    cap = settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps

    work = (a + a.conj().T) / 2.0
    vectors = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(work))
    threshold = 4.0 * _EPS * max(n, 1) * scale
    # Rounding in the dense products can hold the off-norm a little above threshold
    floor = 0.01 * settings.tol_eig(n) * scale
    sweeps = 0
    off = _off_norm(work)
    while off > threshold:
        if sweeps >= cap:
            raise NoConvergence("herm_eig", sweeps, off)
        for p, q in _round_robin(n):
            c, s, phase = _rotation_parameters(work[p, p].real, work[q, q].real, work[p, q])
            j = _rotation_matrix(n, p, q, c, s, phase)
            work = j.conj().T @ work @ j
            vectors = vectors @ j
        work = (work + work.conj().T) / 2.0
        sweeps += 1
        previous, off = off, _off_norm(work)
        if off <= floor and off > 0.5 * previous:
            break
    logger.debug(f"herm_eig n={n} converged in {sweeps} sweeps")

    values = np.real(np.diag(work)).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = _normalize_phases(vectors[:, order])

    # Equal eigenvalues: order by leading component position
    tie_tol = settings.tol_eig(n) * max(1.0, scale)
    leads = _leading_indices(vectors)
    perm = np.arange(n)
    start = 0
    for end in range(1, n + 1):
        if end == n or values[end] - values[end - 1] > tie_tol:
            block = perm[start:end]
            perm[start:end] = block[np.argsort(leads[block], kind="stable")]
            start = end
    return EigDecomposition(values=values[perm], vectors=vectors[:, perm], sweeps=sweeps)


def orthonormal_completion(frame: npt.ArrayLike, rows: int) -> ComplexMatrix:
    """
    Extend orthonormal columns to a unitary ``rows``×``rows`` matrix.

    New columns are built deterministically from the coordinate vectors
    with the largest component outside the current span.
    """
    q = as_complex(frame)
    if q.ndim == 1:
        q = q.reshape(rows, 1)
    while q.shape[1] < rows:
        residual = np.eye(rows, dtype=np.complex128) - q @ q.conj().T
        norms = np.linalg.norm(residual, axis=0)
        pick = int(np.argmax(norms))
        vec = residual[:, pick] / norms[pick]
        vec = vec - q @ (q.conj().T @ vec)
        vec = vec / np.linalg.norm(vec)
        q = np.column_stack([q, vec])
    return q


def _orthonormalize(columns: ComplexMatrix) -> ComplexMatrix:
    """Gram–Schmidt cleanup of nearly orthonormal columns, keeping their phases."""
    if columns.shape[1] == 0:
        return columns
    qmat, rmat = np.linalg.qr(columns)
    diag = np.diag(rmat)
    mags = np.abs(diag)
    return qmat * np.where(mags > 0.0, diag / np.where(mags > 0.0, mags, 1.0), 1.0)


def _one_sided_jacobi(a: ComplexMatrix, cap: int) -> Svd:
    rows, cols = a.shape
    if cols == 0:
        return Svd(
            u=np.zeros((rows, 0), dtype=np.complex128),
            sigma=np.zeros(0),
            v=np.zeros((0, 0), dtype=np.complex128),
        )
    w = a.copy()
    v = np.eye(cols, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    floor = (_EPS * scale) ** 2
    converge = 4.0 * _EPS * max(rows, 1)
    sweeps = 0
    while True:
        worst = 0.0
        for p, q in _round_robin(cols):
            wp, wq = w[:, p], w[:, q]
            alpha = np.sum(np.abs(wp) ** 2, axis=0)
            beta = np.sum(np.abs(wq) ** 2, axis=0)
            gamma = np.sum(wp.conj() * wq, axis=0)
            live = (alpha > floor) & (beta > floor)
            coupling = np.where(live, np.abs(gamma) / np.sqrt(np.where(live, alpha * beta, 1.0)), 0.0)
            worst = max(worst, float(coupling.max(initial=0.0)))
            active = coupling > converge
            if not active.any():
                continue
            c, s, phase = _rotation_parameters(alpha, beta, np.where(active, gamma, 0.0))
            j = _rotation_matrix(cols, p, q, c, s, phase)
            w = w @ j
            v = v @ j
        sweeps += 1
        if worst <= converge:
            break
        if sweeps >= cap:
            raise NoConvergence("svd", sweeps, worst)

    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, w, v = sigma[order], w[:, order], v[:, order]
    keep = int(np.sum(sigma > 64.0 * _EPS * max(rows, 1) * sigma[0])) if sigma[0] > 0.0 else 0
    u_kept = _orthonormalize(w[:, :keep] / sigma[:keep])
    u = orthonormal_completion(u_kept, rows)[:, :cols]
    return Svd(u=u, sigma=sigma, v=v, sweeps=sweeps)


def svd(a: npt.ArrayLike, max_sweeps: Optional[int] = None, full_matrices: bool = False) -> Svd:
    """
    One-sided (Hestenes) complex Jacobi SVD.

    Args:
        a: Matrix to factor
        max_sweeps: Sweep cap, defaults to settings.jacobi_max_sweeps
        full_matrices: Complete u and v to square unitaries

    Returns:
        Svd with r = min(rows, cols) singular values in descending order;
        columns of u belonging to zero singular values are a deterministic
        orthonormal completion. Thin factors unless ``full_matrices``.

    Raises:
        NoConvergence: If the sweep cap is exceeded
    """
    a = as_complex(a)
    if a.ndim != 2:
        raise DimensionMismatch(f"svd requires a matrix, got shape {a.shape}")
    cap = settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps
    rows, cols = a.shape
    if rows < cols:
        flipped = _one_sided_jacobi(a.conj().T, cap)
        dec = Svd(u=flipped.v, sigma=flipped.sigma, v=flipped.u, sweeps=flipped.sweeps)
    else:
        dec = _one_sided_jacobi(a, cap)
    if not full_matrices:
        return dec
    return Svd(
        u=orthonormal_completion(dec.u, rows),
        sigma=dec.sigma,
        v=orthonormal_completion(dec.v, cols),
        sweeps=dec.sweeps,
    )


def polar(a: npt.ArrayLike) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Polar decomposition a = unitary · positive with positive = (a*a)^{1/2}."""
    a = as_complex(a)
    _require_square(a, "polar")
    dec = svd(a)
    unitary = dec.u @ dec.v.conj().T
    positive = (dec.v * dec.sigma) @ dec.v.conj().T
    return unitary, (positive + positive.conj().T) / 2.0


# ============================================================================
# Products
# ============================================================================


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product with the standard block layout a_ij · b."""
    out = np.kron(as_complex(a), as_complex(b))
    fault = _kernel_fault.get()
    if fault and out.size:
        out.flat[0] += fault
    return out


def direct_sum(blocks: Sequence[npt.ArrayLike]) -> ComplexMatrix:
    """Block-diagonal assembly of (possibly rectangular) blocks."""
    mats = [np.atleast_2d(as_complex(b)) for b in blocks]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


# ============================================================================
# Predicates
# ============================================================================


def projection_defect(a: npt.ArrayLike) -> float:
    """max(|a − a*|, |a² − a|) entrywise; inf for non-square input."""
    a = as_complex(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return float("inf")
    return max(hermitian_deviation(a), max_abs(a @ a - a))


def is_projection(a: npt.ArrayLike, tol: float) -> tuple[bool, Optional[int]]:
    """Return (is projection within tol, rank = number of eigenvalues > 1/2)."""
    a = as_complex(a)
    if projection_defect(a) > tol:
        return False, None
    values = herm_eig((a + a.conj().T) / 2.0).values
    return True, int(np.sum(values > 0.5))


def unitary_defect(a: npt.ArrayLike) -> float:
    """max |a*a − I| entrywise; inf for non-square input."""
    a = as_complex(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return float("inf")
    return max_abs(a.conj().T @ a - np.eye(a.shape[0]))


def is_unitary(a: npt.ArrayLike, tol: float) -> bool:
    """True iff ‖a*a − I‖_∞ ≤ tol."""
    return unitary_defect(a) <= tol


def isometry_defect(u: npt.ArrayLike) -> float:
    """max |u*u − I| entrywise for a tall matrix."""
    u = as_complex(u)
    if u.ndim != 2 or u.shape[0] < u.shape[1]:
        return float("inf")
    return max_abs(u.conj().T @ u - np.eye(u.shape[1]))


def range_frame(p: npt.ArrayLike) -> ComplexMatrix:
    """Orthonormal frame of the eigenvectors of a projection with eigenvalue > 1/2."""
    dec = herm_eig(as_complex(p))
    return dec.vectors[:, dec.values > 0.5]
