"""Generators for the example preserver maps and their verification hooks."""

import itertools
import logging
import math
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from preserverlab.core.config import settings
from preserverlab.core.exceptions import (
    BadParameter,
    DimensionMismatch,
    NotIsometry,
    NotProjection,
    SizeMismatch,
    TauNotAdmissible,
)
from preserverlab.linalg.complex_linalg import (
    as_complex,
    is_projection,
    isometry_defect,
    kron,
    max_abs,
    svd,
    unitary_defect,
)
from preserverlab.linalg.herm_space import apply_map, canonical_basis, map_from_function
from preserverlab.linalg.real_coords import apply_real, tabulate
from preserverlab.linalg.sampling import (
    Seed,
    make_rng,
    random_hermitian,
    random_involution,
    random_projection,
    random_unit_vector,
    random_unitary,
)
from preserverlab.models.classification import CollisionWitness, VerificationReport
from preserverlab.models.enums import DomainKind
from preserverlab.models.herm import HermMap, RealLinearMatMap
from preserverlab.models.matrices import ComplexMatrix

logger = logging.getLogger(__name__)


def _require_projection(p0: npt.ArrayLike, name: str = "p0") -> ComplexMatrix:
    p0 = np.atleast_2d(as_complex(p0))
    if not is_projection(p0, settings.tol_canon(p0.shape[0]))[0]:
        raise NotProjection(f"{name} is not an orthogonal projection")
    return p0


# ============================================================================
# Congruences and trace complements
# ============================================================================


def make_congruence(u: npt.ArrayLike, conj: bool = False, n: Optional[int] = None) -> HermMap:
    """
    A ↦ U A U* (or U Ā U* when ``conj``) for an isometry U : C^n → C^N.

    Raises:
        NotIsometry: If u*u deviates from I_n by more than tol_eig
        DimensionMismatch: If ``n`` disagrees with the column count of u
    """
    u = np.atleast_2d(as_complex(u))
    if n is not None and u.shape[1] != n:
        raise DimensionMismatch(
            f"Isometry has {u.shape[1]} columns, expected {n}",
            details={"expected": n, "columns": u.shape[1]},
        )
    tol = settings.tol_eig(u.shape[0])
    deviation = isometry_defect(u)
    if deviation > tol:
        raise NotIsometry(deviation, tol)
    u_adj = u.conj().T

    def congruence(a: ComplexMatrix) -> ComplexMatrix:
        return u @ (a.conj() if conj else a) @ u_adj

    return map_from_function(canonical_basis(u.shape[1]), canonical_basis(u.shape[0]), congruence)


def make_trace_complement(k: int, m: int) -> HermMap:
    """
    L_k(A) = (tr A / k) I_m − A on H_m; sends rank-k projections to rank m − k.

    Raises:
        BadParameter: Unless 1 <= k < m
    """
    if not 1 <= k < m:
        raise BadParameter("k", k, f"1 <= k < m = {m}")
    eye = np.eye(m)
    basis = canonical_basis(m)
    return map_from_function(basis, basis, lambda a: np.trace(a) / k * eye - a)


# ============================================================================
# Clifford-type embeddings
# ============================================================================


def clifford_embed(v: npt.ArrayLike) -> ComplexMatrix:
    """
    ρ_k(v) for v ∈ C^k, a 2^{k−1} square matrix with ρ(v)*ρ(v) = ‖v‖² I.

    ρ_1(z) = z and ρ_k([z; w]) = [[z I, ρ_{k−1}(w)], [−ρ_{k−1}(w)*, z̄ I]].
    """
    v = as_complex(v).ravel()
    if v.size == 0:
        raise BadParameter("k", 0, "k >= 1")
    if v.size == 1:
        return v.reshape(1, 1).copy()
    z = v[0]
    inner = clifford_embed(v[1:])
    eye = np.eye(inner.shape[0])
    return np.block([[z * eye, inner], [-inner.conj().T, np.conj(z) * eye]])


def make_clifford_embedding(k: int) -> RealLinearMatMap:
    """ρ_k as a real-linear map C^k → M_{2^{k−1}}."""
    if k < 1:
        raise BadParameter("k", k, "k >= 1")
    return tabulate(DomainKind.VECTOR, k, 2 ** (k - 1), clifford_embed)


def make_clifford_block_map(n: int, k: int) -> HermMap:
    """
    H_n → H_{2^{n−1}}, [[A, v], [v*, b]] ↦ [[((tr A + b)/k − b) I, ρ_{n−1}(v)], [ρ_{n−1}(v)*, b I]].

    Sends rank-k projections to rank 2^{n−2} projections; not injective on them
    for n >= 3.

    Raises:
        BadParameter: Unless n >= 2 and 1 <= k < n
    """
    if n < 2:
        raise BadParameter("n", n, "n >= 2")
    if not 1 <= k < n:
        raise BadParameter("k", k, f"1 <= k < n = {n}")
    half = 2 ** (n - 2)
    eye = np.eye(half)

    def block_map(a: ComplexMatrix) -> ComplexMatrix:
        b = a[n - 1, n - 1].real
        corner = clifford_embed(a[: n - 1, n - 1])
        scalar = (np.trace(a).real / k) - b
        return np.block([[scalar * eye, corner], [corner.conj().T, b * eye]])

    return map_from_function(canonical_basis(n), canonical_basis(2 ** (n - 1)), block_map)


def make_vector_eval(
    v0: npt.ArrayLike,
    kind: DomainKind = DomainKind.MATRIX,
) -> RealLinearMatMap:
    """
    A ↦ ρ_m(A v0) on M_m (or H_m); unitaries go to unitaries of size 2^{m−1}.

    Raises:
        BadParameter: If ‖v0‖ != 1 or the domain kind is not a matrix space
    """
    v0 = as_complex(v0).ravel()
    m = int(v0.size)
    norm = float(np.linalg.norm(v0))
    if m == 0 or abs(norm - 1.0) > settings.tol_eig(max(m, 1)) * 10.0:
        raise BadParameter("v0", norm, "unit vector")
    if kind not in (DomainKind.MATRIX, DomainKind.HERM):
        raise BadParameter("kind", kind.value, "matrix or herm")
    return tabulate(kind, m, 2 ** (m - 1), lambda a: clifford_embed(a @ v0))


# ============================================================================
# Dilations of admissible unitary-valued maps
# ============================================================================


def make_rotation_unitary_map(k: int, phi: float) -> RealLinearMatMap:
    """
    τ(A) = cos φ·A ⊗ I_{2k} + i sin φ·I_{2k} ⊗ A on H^0_{2k}, valued in M_{4k²}.

    Involutions go to unitaries since A⊗I and I⊗A commute and square to I.
    """
    if k < 1:
        raise BadParameter("k", k, "k >= 1")
    eye = np.eye(2 * k)
    c, s = math.cos(phi), math.sin(phi)
    return tabulate(
        DomainKind.HERM0,
        2 * k,
        4 * k * k,
        lambda a: c * kron(a, eye) + 1j * s * kron(eye, a),
    )


def _require_herm0(tau: RealLinearMatMap, k: Optional[int] = None) -> int:
    if tau.domain_kind != DomainKind.HERM0 or tau.n_in % 2:
        raise DimensionMismatch(
            "Expected a map on the traceless hermitian matrices of even size",
            details={"domain_kind": tau.domain_kind.value, "n_in": tau.n_in},
        )
    if k is not None and tau.n_in != 2 * k:
        raise DimensionMismatch(
            f"Map acts on H0_{tau.n_in}, expected H0_{2 * k}",
            details={"expected": 2 * k, "n_in": tau.n_in},
        )
    return tau.n_in // 2


def verify_admissible(
    tau: RealLinearMatMap,
    samples: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> VerificationReport:
    """
    Randomized check that τ sends trace-zero hermitian unitaries to unitaries.

    Sound for rejection only; acceptance means every sample passed.
    """
    k = _require_herm0(tau)
    count = settings.admissibility_samples if samples is None else samples
    rng = make_rng(settings.default_seed if seed is None else seed)
    limit = settings.tol_eig(tau.n_out) if tol is None else tol
    worst = 0.0
    for index in range(count):
        defect = unitary_defect(apply_real(tau, random_involution(rng, k)))
        worst = max(worst, defect)
        if defect > limit:
            logger.debug(f"verify_admissible: sample {index} has unitarity defect {defect:.3e}")
            return VerificationReport(
                ok=False,
                m=None,
                worst_residual=worst,
                samples=index + 1,
                reason=f"sample {index} maps to a non-unitary matrix",
            )
    return VerificationReport(ok=True, m=tau.n_out, worst_residual=worst, samples=count)


def make_dilation(
    k: int,
    t: float,
    tau: RealLinearMatMap,
    verify: bool = True,
    samples: Optional[int] = None,
    seed: Seed = None,
) -> HermMap:
    """
    H_{2k} → H_{2m} with c = tr A / k and B = 2A − c I:

        A ↦ [[t c I_m, √(t(1−t)) τ(B)], [√(t(1−t)) τ(B)*, (1−t) c I_m]]

    Raises:
        BadParameter: If t is outside [0, 1]
        DimensionMismatch: If τ does not act on H^0_{2k}
        TauNotAdmissible: If sampling finds an involution with non-unitary image
    """
    if not 0.0 <= t <= 1.0:
        raise BadParameter("t", t, "0 <= t <= 1")
    _require_herm0(tau, k)
    if verify:
        report = verify_admissible(tau, samples=samples, seed=seed)
        if not report.ok:
            raise TauNotAdmissible(
                report.worst_residual, settings.tol_eig(tau.n_out), report.samples - 1
            )
    m = tau.n_out
    eye_m = np.eye(m)
    eye_2k = np.eye(2 * k)
    weight = math.sqrt(t * (1.0 - t))

    def dilation(a: ComplexMatrix) -> ComplexMatrix:
        c = np.trace(a).real / k
        off = weight * apply_real(tau, 2.0 * a - c * eye_2k)
        return np.block([[t * c * eye_m, off], [off.conj().T, (1.0 - t) * c * eye_m]])

    return map_from_function(canonical_basis(2 * k), canonical_basis(2 * m), dilation)


# ============================================================================
# Tensor-type and constant maps
# ============================================================================


def make_tensor(p0: npt.ArrayLike, n: int) -> HermMap:
    """A ↦ A ⊗ P0 on H_n."""
    p0 = _require_projection(p0)
    return map_from_function(
        canonical_basis(n), canonical_basis(n * p0.shape[0]), lambda a: kron(a, p0)
    )


def make_tensor_pair(p0: npt.ArrayLike, q0: npt.ArrayLike, n: int, k: int) -> HermMap:
    """
    ψ(A) = A ⊗ P0 + ((tr A / k) I − A) ⊗ Q0 on H_n.

    Rank-k projections go to projections of rank k·rk P0 + (n − k)·rk Q0.

    Raises:
        NotProjection: If p0 or q0 is not a projection
        SizeMismatch: If p0 and q0 differ in size
        BadParameter: Unless 1 <= k < n
    """
    p0 = _require_projection(p0, "p0")
    q0 = _require_projection(q0, "q0")
    if p0.shape != q0.shape:
        raise SizeMismatch(
            "P0 and Q0 must have the same size",
            details={"p0": list(p0.shape), "q0": list(q0.shape)},
        )
    if not 1 <= k < n:
        raise BadParameter("k", k, f"1 <= k < n = {n}")
    eye = np.eye(n)

    def pair(a: ComplexMatrix) -> ComplexMatrix:
        return kron(a, p0) + kron(np.trace(a) / k * eye - a, q0)

    return map_from_function(canonical_basis(n), canonical_basis(n * p0.shape[0]), pair)


def make_constant(p0: npt.ArrayLike, n: int, k: int) -> HermMap:
    """A ↦ (tr A / k) P0; every rank-k projection goes to P0."""
    p0 = _require_projection(p0)
    if k < 1:
        raise BadParameter("k", k, "k >= 1")
    return map_from_function(
        canonical_basis(n), canonical_basis(p0.shape[0]), lambda a: np.trace(a) / k * p0
    )


# ============================================================================
# Unitary-image checks
# ============================================================================


def _unitary_sample(rng: np.random.Generator, kind: DomainKind, n: int) -> ComplexMatrix:
    if kind == DomainKind.VECTOR:
        return random_unit_vector(rng, n)
    if kind == DomainKind.MATRIX:
        return random_unitary(rng, n)
    if kind == DomainKind.HERM0:
        return random_involution(rng, n // 2)
    return 2.0 * random_projection(rng, n, int(rng.integers(0, n + 1))) - np.eye(n)


def verify_unitary_images(
    f: RealLinearMatMap,
    samples: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> VerificationReport:
    """
    Check that sampled unit inputs have unitary images.

    Inputs are unit vectors, Haar unitaries or hermitian unitaries, according
    to the map's domain.
    """
    if f.domain_kind == DomainKind.HERM0 and f.n_in % 2:
        raise DimensionMismatch("Traceless involutions need an even dimension")
    count = settings.default_samples if samples is None else samples
    rng = make_rng(settings.default_seed if seed is None else seed)
    limit = settings.tol_eig(f.n_out) * 10.0 if tol is None else tol
    worst = 0.0
    for _ in range(count):
        worst = max(worst, unitary_defect(apply_real(f, _unitary_sample(rng, f.domain_kind, f.n_in))))
    ok = worst <= limit
    return VerificationReport(
        ok=ok,
        m=f.n_out if ok else None,
        worst_residual=worst,
        samples=count,
        reason=None if ok else f"unitarity defect {worst:.3e} exceeds {limit:.3e}",
    )


def preserves_singular_values(
    tau: RealLinearMatMap,
    samples: Optional[int] = None,
    seed: Seed = None,
) -> float:
    """
    Largest deviation between the singular values of τ(A) and those of A.

    Each singular value of A ∈ H^0_{2k} is expected with multiplicity m/(2k);
    returns inf when 2k does not divide m.
    """
    k = _require_herm0(tau)
    if tau.n_out % (2 * k):
        return float("inf")
    repeat = tau.n_out // (2 * k)
    count = settings.default_samples if samples is None else samples
    rng = make_rng(settings.default_seed if seed is None else seed)
    worst = 0.0
    for _ in range(count):
        a = random_hermitian(rng, 2 * k, traceless=True)
        expected = np.sort(np.repeat(svd(a).sigma, repeat))[::-1]
        actual = svd(apply_real(tau, a)).sigma
        worst = max(worst, float(np.max(np.abs(actual - expected))))
    return worst


# ============================================================================
# Rotation families cos φ X + sin φ Y + Z
# ============================================================================


def _real_part(a: ComplexMatrix) -> ComplexMatrix:
    return (a + a.conj().T) / 2.0


def rotation_unitarity_defect(
    x: npt.ArrayLike, y: npt.ArrayLike, z: npt.ArrayLike
) -> float:
    """
    Largest violation of |X|² = |Y|² = I − |Z|² and re(X*Y) = re(X*Z) = re(Y*Z) = 0.

    These conditions hold exactly when cos φ X + sin φ Y + Z is unitary for all φ.
    """
    x, y, z = as_complex(x), as_complex(y), as_complex(z)
    if not x.shape == y.shape == z.shape or x.shape[0] != x.shape[1]:
        raise DimensionMismatch("X, Y, Z must be square matrices of one size")
    eye = np.eye(x.shape[0])
    xx, yy, zz = x.conj().T @ x, y.conj().T @ y, z.conj().T @ z
    return max(
        max_abs(xx - yy),
        max_abs(xx - (eye - zz)),
        max_abs(_real_part(x.conj().T @ y)),
        max_abs(_real_part(x.conj().T @ z)),
        max_abs(_real_part(y.conj().T @ z)),
    )


def rotation_family_defect(
    x: npt.ArrayLike,
    y: npt.ArrayLike,
    z: npt.ArrayLike,
    angles: Optional[Sequence[float]] = None,
) -> float:
    """Largest non-unitarity of cos φ X + sin φ Y + Z over the sampled angles."""
    x, y, z = as_complex(x), as_complex(y), as_complex(z)
    if angles is None:
        angles = 2.0 * math.pi * np.arange(32) / 32
    return max(unitary_defect(math.cos(p) * x + math.sin(p) * y + z) for p in angles)


def make_rotation_triple(
    m_log2: int,
    seed: Seed = None,
    beta: Optional[float] = None,
) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """
    X, Y, Z of size 2^m_log2 with cos φ X + sin φ Y + Z unitary for every φ.

    Built from ρ of three mutually real-orthogonal vectors with norms
    cos β, cos β, sin β, then conjugated by random unitaries.
    """
    if m_log2 < 1:
        raise BadParameter("m_log2", m_log2, "m_log2 >= 1")
    rng = make_rng(settings.default_seed if seed is None else seed)
    k = m_log2 + 1
    angle = float(rng.uniform(0.0, math.pi / 2)) if beta is None else beta
    frame, _ = np.linalg.qr(rng.standard_normal((2 * k, 3)))
    vectors = [frame[0::2, j] + 1j * frame[1::2, j] for j in range(3)]
    scales = (math.cos(angle), math.cos(angle), math.sin(angle))
    left = random_unitary(rng, 2**m_log2)
    right = random_unitary(rng, 2**m_log2)
    x, y, z = (left @ clifford_embed(s * v) @ right for s, v in zip(scales, vectors))
    return x, y, z


# ============================================================================
# Non-injectivity
# ============================================================================


def _coordinate_projection(n: int, support: Sequence[int]) -> ComplexMatrix:
    p = np.zeros((n, n), dtype=np.complex128)
    p[list(support), list(support)] = 1.0
    return p


def find_collision(
    f: HermMap,
    k: int,
    trials: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> CollisionWitness:
    """
    Look for distinct rank-k projections P ≠ P' with f(P) = f(P').

    Coordinate projections are compared pairwise first; then random pairs are
    drawn. ``trials`` counts the pairs examined.
    """
    n = f.n_in
    if not 1 <= k < n:
        raise BadParameter("k", k, f"1 <= k < n = {n}")
    limit = settings.tol_classify(f.n_out) if tol is None else tol
    budget = settings.default_samples if trials is None else trials
    examined = 0

    coordinate = [_coordinate_projection(n, s) for s in itertools.combinations(range(n), k)]
    images = [apply_map(f, p) for p in coordinate]
    for i, j in itertools.combinations(range(len(coordinate)), 2):
        examined += 1
        distance = max_abs(images[i] - images[j])
        if distance <= limit:
            return CollisionWitness(
                found=True,
                first=coordinate[i],
                second=coordinate[j],
                image_distance=distance,
                trials=examined,
            )

    rng = make_rng(settings.default_seed if seed is None else seed)
    best = float("inf")
    for _ in range(budget):
        examined += 1
        first, second = random_projection(rng, n, k), random_projection(rng, n, k)
        distance = max_abs(apply_map(f, first) - apply_map(f, second))
        if distance <= limit and max_abs(first - second) > limit:
            return CollisionWitness(
                found=True, first=first, second=second, image_distance=distance, trials=examined
            )
        best = min(best, distance)
    return CollisionWitness(found=False, image_distance=best, trials=examined)
