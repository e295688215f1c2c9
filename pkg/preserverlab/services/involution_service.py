"""Trace-zero hermitian unitaries (involutions) and maps defined on them."""

import logging
from typing import Callable, Optional, Union

import numpy as np
import numpy.typing as npt

from preserverlab.core.config import settings
from preserverlab.core.exceptions import (
    DimensionMismatch,
    NoConvergence,
    NotHalfRankProjection,
    NotHermitian,
    NotInvolution,
    NotUnitaryPair,
)
from preserverlab.linalg.complex_linalg import (
    as_complex,
    direct_sum,
    hermitian_deviation,
    herm_eig,
    is_projection,
    kron,
    max_abs,
    svd,
    unitary_defect,
)
from preserverlab.linalg.herm_space import apply_map, canonical_basis, restrict_to_traceless
from preserverlab.linalg.real_coords import apply_real, herm_to_real, tabulate
from preserverlab.linalg.sampling import Seed, make_rng, random_hermitian, random_involution
from preserverlab.models.classification import (
    PreserverClass,
    UnitaryPairDecomposition,
    VerificationReport,
)
from preserverlab.models.enums import DomainKind
from preserverlab.models.herm import HermMap, RealLinearMatMap
from preserverlab.models.matrices import ComplexMatrix

logger = logging.getLogger(__name__)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


# ============================================================================
# Involutions and half-rank projections
# ============================================================================


def involution_to_projection(a: npt.ArrayLike, tol: Optional[float] = None) -> ComplexMatrix:
    """
    (I + A)/2 for a trace-zero hermitian unitary A of size 2k.

    Raises:
        NotInvolution: If A is not hermitian, traceless and squaring to I
    """
    a = np.atleast_2d(as_complex(a))
    n = a.shape[0]
    if a.shape != (n, n) or n % 2:
        raise NotInvolution(f"Expected a square matrix of even size, got shape {a.shape}")
    limit = settings.tol_eig(n) if tol is None else tol
    if hermitian_deviation(a) > limit:
        raise NotInvolution("Matrix is not hermitian")
    if abs(complex(np.trace(a))) > limit:
        raise NotInvolution("Matrix is not traceless")
    if max_abs(a @ a - np.eye(n)) > limit:
        raise NotInvolution("Matrix does not square to the identity")
    return (np.eye(n) + a) / 2.0


def projection_to_involution(p: npt.ArrayLike, tol: Optional[float] = None) -> ComplexMatrix:
    """
    2P − I for a rank-k projection P of size 2k.

    Raises:
        NotHalfRankProjection: If P is not a projection of half rank
    """
    p = np.atleast_2d(as_complex(p))
    n = p.shape[0]
    if p.shape != (n, n) or n % 2:
        raise NotHalfRankProjection(f"Expected a square matrix of even size, got shape {p.shape}")
    limit = settings.tol_eig(n) if tol is None else tol
    ok, rank = is_projection(p, limit)
    if not ok or rank != n // 2:
        raise NotHalfRankProjection(f"Expected a projection of rank {n // 2}, got rank {rank}")
    return 2.0 * p - np.eye(n)


def verify_involution_images(
    f: HermMap,
    samples: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> VerificationReport:
    """Check that f maps sampled trace-zero involutions of H_{2k} to involutions."""
    if f.n_in % 2:
        raise DimensionMismatch("Involutions of trace zero need an even dimension")
    count = settings.involution_samples if samples is None else samples
    rng = make_rng(settings.default_seed if seed is None else seed)
    limit = settings.tol_classify(f.n_out) if tol is None else tol
    eye = np.eye(f.n_out)
    worst = 0.0
    for _ in range(count):
        image = apply_map(f, random_involution(rng, f.n_in // 2))
        worst = max(worst, max_abs(image @ image - eye))
    ok = worst <= limit
    return VerificationReport(
        ok=ok,
        m=f.n_out if ok else None,
        worst_residual=worst,
        samples=count,
        reason=None if ok else f"involution defect {worst:.3e} exceeds {limit:.3e}",
    )


def bracket_defect(f: HermMap, a: npt.ArrayLike, b: npt.ArrayLike, sign: int = 1) -> float:
    """max |i[f(a), f(b)] − sign·f(i[a, b])|; zero for A ↦ UAU* (sign +1) or UĀU* (sign −1)."""
    a, b = as_complex(a), as_complex(b)
    fa, fb = apply_map(f, a), apply_map(f, b)
    inner = 1j * (a @ b - b @ a)
    return max_abs(1j * (fa @ fb - fb @ fa) - sign * apply_map(f, inner))


# ============================================================================
# Pairs X, Y with X ± Y unitary
# ============================================================================


def _group_values(values: npt.ArrayLike, tol: float) -> list[list[int]]:
    """Consecutive indices of a sorted sequence whose neighbours differ by at most tol."""
    groups: list[list[int]] = []
    for index, value in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - value) <= tol:
            groups[-1].append(index)
        else:
            groups.append([index])
    return groups


def unitary_pair_decompose(
    x: npt.ArrayLike,
    y: npt.ArrayLike,
    tol: Optional[float] = None,
) -> UnitaryPairDecomposition:
    """
    Simultaneous form of X, Y when X + Y and X − Y are unitary.

    Returns U, V unitary with X = U (I_p ⊕ 0_q ⊕ ⊕ s_j I_{m_j}) V and
    Y = U (0_p ⊕ W ⊕ ⊕ i√(1−s_j²) H_j) V, where 1 > s_1 > … > s_r > 0,
    W is unitary and each H_j is a hermitian unitary.

    Raises:
        NotUnitaryPair: If X ± Y is not unitary within tol_eig
    """
    x, y = np.atleast_2d(as_complex(x)), np.atleast_2d(as_complex(y))
    if x.shape != y.shape or x.shape[0] != x.shape[1]:
        raise DimensionMismatch("X and Y must be square matrices of one size")
    n = x.shape[0]
    limit = settings.tol_eig(n) * 10.0 if tol is None else tol
    deviation = max(unitary_defect(x + y), unitary_defect(x - y))
    if deviation > limit:
        raise NotUnitaryPair(deviation, limit)

    ctol = settings.cluster_tol
    dec = svd(x)
    sigma = np.clip(dec.sigma, 0.0, 1.0)
    ones = [i for i in range(n) if sigma[i] >= 1.0 - ctol]
    zeros = [i for i in range(n) if sigma[i] <= ctol]
    middle = [i for i in range(n) if ctol < sigma[i] < 1.0 - ctol]
    groups = [[middle[i] for i in g] for g in _group_values(sigma[middle], ctol)]
    order = ones + zeros + [i for g in groups for i in g]
    u = dec.u[:, order]
    v = dec.v[:, order].conj().T
    inner = u.conj().T @ y @ v.conj().T

    p, q = len(ones), len(zeros)
    w = inner[p : p + q, p : p + q]
    blocks: list[tuple[float, int]] = []
    hs: list[ComplexMatrix] = []
    x_core = [np.eye(p), np.zeros((q, q))]
    y_core = [np.zeros((p, p)), w]
    offset = p + q
    for group in groups:
        size = len(group)
        s = float(np.mean(sigma[group]))
        c = float(np.sqrt(1.0 - s * s))
        block = inner[offset : offset + size, offset : offset + size]
        h = block / (1j * c)
        h = (h + h.conj().T) / 2.0
        blocks.append((s, size))
        hs.append(h)
        x_core.append(s * np.eye(size))
        y_core.append(1j * c * h)
        offset += size

    residual = max(
        max_abs(u @ direct_sum(x_core) @ v - x),
        max_abs(u @ direct_sum(y_core) @ v - y),
    )
    return UnitaryPairDecomposition(
        u=u, v=v, p=p, q=q, blocks=tuple(blocks), w=w, h=tuple(hs), residual=residual
    )


# ============================================================================
# Maps on H^0_2
# ============================================================================

_MapInput = Union[HermMap, RealLinearMatMap]


def _as_real_map(f: _MapInput) -> RealLinearMatMap:
    if isinstance(f, HermMap):
        f = herm_to_real(restrict_to_traceless(f))
    if f.domain_kind == DomainKind.HERM:
        full = f
        f = tabulate(DomainKind.HERM0, full.n_in, full.n_out, lambda a: apply_real(full, a))
    if f.domain_kind != DomainKind.HERM0 or f.n_in != 2:
        raise DimensionMismatch(
            "Expected a map on the traceless hermitian 2x2 matrices",
            details={"domain_kind": f.domain_kind.value, "n_in": f.n_in},
        )
    return f


def factor_unitary_valued(f: _MapInput, tol: Optional[float] = None) -> PreserverClass:
    """
    Factor a real-linear f: H^0_2 → M_m sending involutions to unitaries.

    Returns a unitary_tensor_form result with f(A) = U (A ⊗ I_n) V, m = 2n,
    or not_a_preserver when no such factorization reproduces f.
    """
    f = _as_real_map(f)
    m = f.n_out
    limit = settings.tol_classify(m) if tol is None else tol
    if m % 2:
        return PreserverClass.not_a_preserver(f"codomain size {m} is odd")
    n = m // 2

    u0 = apply_real(f, SIGMA_Z)
    if unitary_defect(u0) > limit:
        return PreserverClass.not_a_preserver("image of diag(1, -1) is not unitary")
    h = -1j * u0.conj().T @ apply_real(f, SIGMA_X)
    k = 1j * u0.conj().T @ apply_real(f, SIGMA_Y)
    dz = 1j * h @ k
    try:
        dec = herm_eig(dz, tol_sym=limit)
    except (NotHermitian, NoConvergence) as exc:
        return PreserverClass.not_a_preserver(f"generator algebra is not an involution pair: {exc.message}")
    if int(np.sum(dec.values > 0.0)) != n:
        return PreserverClass.not_a_preserver("unbalanced spectrum of the diagonal generator")
    plus = dec.vectors[:, n:]
    w = np.column_stack([plus, k @ plus])
    u = u0 @ w @ np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    v = w.conj().T

    eye = np.eye(n)
    residual = max(
        max_abs(apply_real(f, e) - u @ kron(e, eye) @ v)
        for e in canonical_basis(2, traceless=True).elements
    )
    if residual > limit:
        return PreserverClass.not_a_preserver("factorization does not reproduce the map", residual)
    logger.debug(f"factor_unitary_valued: n={n} residual={residual:.3e}")
    return PreserverClass.unitary_tensor(u=u, v=v, n=n, residual=residual)


def factor_hermitian_valued(f: HermMap, tol: Optional[float] = None) -> PreserverClass:
    """
    Factor f: H^0_2 → H_m sending involutions to involutions.

    Returns a signed_tensor_form result with f(A) = U ((A ⊗ I_p) ⊕ (−A ⊗ I_q)) U*,
    m = 2(p + q), or not_a_preserver.
    """
    f = restrict_to_traceless(f)
    if f.n_in != 2:
        raise DimensionMismatch("Expected a map on the 2x2 hermitian matrices")
    m = f.n_out
    limit = settings.tol_classify(m) if tol is None else tol
    eye = np.eye(m)
    x, y, z = (apply_map(f, s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    if max(max_abs(g @ g - eye) for g in (x, y, z)) > limit:
        return PreserverClass.not_a_preserver("Pauli images are not involutions")

    signature = -1j * x @ y @ z
    try:
        dec = herm_eig(signature, tol_sym=limit)
    except (NotHermitian, NoConvergence) as exc:
        return PreserverClass.not_a_preserver(f"Pauli images do not generate a spin pair: {exc.message}")
    plus_count = int(np.sum(dec.values > 0.0))
    if plus_count % 2 or (m - plus_count) % 2:
        return PreserverClass.not_a_preserver("signature eigenspaces have odd dimension")

    columns: list[ComplexMatrix] = []
    firsts: list[ComplexMatrix] = []
    seconds: list[ComplexMatrix] = []
    for frame, sign in ((dec.vectors[:, m - plus_count :], 1.0), (dec.vectors[:, : m - plus_count], -1.0)):
        size = frame.shape[1] // 2
        if size == 0:
            continue
        local = herm_eig(sign * frame.conj().T @ z @ frame, tol_sym=limit)
        top = frame @ local.vectors[:, size:]
        firsts.append(top)
        seconds.append(sign * x @ top)
    for first, second in zip(firsts, seconds):
        columns.extend([first, second])
    u = np.column_stack(columns) if columns else np.zeros((m, 0), dtype=np.complex128)
    p, q = plus_count // 2, (m - plus_count) // 2

    def model(a: ComplexMatrix) -> ComplexMatrix:
        return u @ direct_sum([kron(a, np.eye(p)), kron(-a, np.eye(q))]) @ u.conj().T

    residual = max(
        max_abs(apply_map(f, e) - model(e)) for e in canonical_basis(2, traceless=True).elements
    )
    if residual > limit:
        return PreserverClass.not_a_preserver("factorization does not reproduce the map", residual)
    return PreserverClass.signed_tensor(u=u, p=p, q=q, residual=residual)


# ============================================================================
# Maps H^0_{2k} → H^0_{2k}
# ============================================================================


def _test_spectrum(n: int) -> np.ndarray:
    """Distinct, increasing, trace-zero values whose negatives form another set (n >= 3)."""
    squares = np.arange(1, n + 1, dtype=np.float64) ** 2
    return squares - squares.mean()


def classify_involution_map(
    f: HermMap,
    samples: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> PreserverClass:
    """
    Recover f(A) = s U A U* or s U Ā U* for f: H^0_{2k} → H^0_{2k} preserving involutions.

    s comes from the spectrum of f on a fixed diagonal test matrix (for k = 1
    from the orientation of f as a 3×3 real matrix, where the conjugate case
    coincides with a linear one), the conjugation flag from the bracket test,
    and U from the eigenvectors of the test image with phases fixed on the
    all-ones off-diagonal matrix.
    """
    f = restrict_to_traceless(f)
    n = f.n_in
    if n % 2 or f.n_out != n:
        raise DimensionMismatch(
            "Expected a map from H0_2k to H0_2k", details={"n_in": n, "n_out": f.n_out}
        )
    limit = settings.tol_classify(n) if tol is None else tol
    rng = make_rng(settings.default_seed if seed is None else seed)

    pre = verify_involution_images(f, samples=samples, seed=rng, tol=limit)
    if not pre.ok:
        return PreserverClass.not_a_preserver(pre.reason or "involutions not preserved", pre.worst_residual)

    if n == 2:
        det = float(np.linalg.det(f.matrix))
        s = 1 if det > 0 else -1
    else:
        values = _test_spectrum(n)
        image_values = herm_eig(apply_map(f, np.diag(values))).values
        plus = float(np.max(np.abs(image_values - np.sort(values))))
        minus = float(np.max(np.abs(image_values - np.sort(-values))))
        s = 1 if plus <= minus else -1

    def g(a: ComplexMatrix) -> ComplexMatrix:
        return s * apply_map(f, a)

    a = random_hermitian(rng, n, traceless=True)
    b = random_hermitian(rng, n, traceless=True)
    scaled = HermMap(domain=f.domain, codomain=f.codomain, matrix=s * f.matrix)
    linear = bracket_defect(scaled, a, b, 1)
    antilinear = bracket_defect(scaled, a, b, -1)
    conj = n > 2 and antilinear < linear
    logger.debug(f"classify_involution_map: s={s} bracket(+)={linear:.3e} bracket(-)={antilinear:.3e}")

    def h(a: ComplexMatrix) -> ComplexMatrix:
        return g(a.conj() if conj else a)

    u = _recover_adjoint_unitary(h, n)

    def model(e: ComplexMatrix) -> ComplexMatrix:
        return s * u @ (e.conj() if conj else e) @ u.conj().T

    residual = max(max_abs(apply_map(f, e) - model(e)) for e in f.domain.elements)
    if residual > limit:
        return PreserverClass.not_a_preserver("recovered form does not reproduce the map", residual)
    return PreserverClass.trace_zero_unitary(u=u, s=s, conj=bool(conj), residual=residual)


def _recover_adjoint_unitary(h: Callable[[ComplexMatrix], ComplexMatrix], n: int) -> ComplexMatrix:
    """U with h(A) = U A U*, up to a global phase."""
    values = _test_spectrum(n) if n > 2 else np.array([-1.0, 1.0])
    w = herm_eig(h(np.diag(values).astype(np.complex128))).vectors
    ones = np.ones((n, n)) - np.eye(n)
    row = (w.conj().T @ h(ones.astype(np.complex128)) @ w)[0]
    phases = np.ones(n, dtype=np.complex128)
    mags = np.abs(row[1:])
    phases[1:] = np.where(mags > 0.0, row[1:] / np.where(mags > 0.0, mags, 1.0), 1.0)
    return w * phases.conj()
