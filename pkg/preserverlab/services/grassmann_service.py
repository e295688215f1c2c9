"""Two-subspace geometry: principal angles, gap, canonical form and blend sets.

The blend set of X and Y for a weight a is the set of subspaces Z of the same
dimension for which a(P_X + P_Y) + (1 − 2a)P_Z is again a projection.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize

from preserverlab.core.config import settings
from preserverlab.core.exceptions import (
    AmbientMismatch,
    BadParameter,
    DimensionMismatch,
    EmptySet,
    NotIsometry,
    NotProjection,
)
from preserverlab.linalg.complex_linalg import (
    as_complex,
    direct_sum,
    is_projection,
    is_unitary,
    isometry_defect,
    kron,
    orthonormal_completion,
    range_frame,
    svd,
)
from preserverlab.linalg.sampling import random_frame
from preserverlab.models.geometry import (
    AngleBlock,
    BlendDescription,
    BruteForceVerdict,
    Subspace,
    TwoProjectionForm,
)
from preserverlab.models.matrices import ComplexMatrix

logger = logging.getLogger(__name__)

_HALF_PI = math.pi / 2.0
_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


# ============================================================================
# Subspaces
# ============================================================================


def make_subspace(frame: npt.ArrayLike, tol: Optional[float] = None) -> Subspace:
    """
    Wrap an orthonormal frame.

    Raises:
        NotIsometry: If the columns are not orthonormal within tol_eig
    """
    frame = as_complex(frame)
    if frame.ndim == 1:
        frame = frame.reshape(-1, 1)
    limit = settings.tol_eig(frame.shape[0]) * 10.0 if tol is None else tol
    deviation = isometry_defect(frame)
    if deviation > limit:
        raise NotIsometry(deviation, limit)
    return Subspace(ambient=int(frame.shape[0]), frame=frame)


def span(vectors: npt.ArrayLike, tol_rank: Optional[float] = None) -> Subspace:
    """Orthonormal frame of the column span of ``vectors``."""
    vectors = as_complex(vectors)
    if vectors.ndim == 1:
        vectors = vectors.reshape(-1, 1)
    dec = svd(vectors)
    rank = dec.rank(settings.tol_rank if tol_rank is None else tol_rank)
    return Subspace(ambient=int(vectors.shape[0]), frame=dec.u[:, :rank])


def random_subspace(rng: np.random.Generator, ambient: int, dim: int) -> Subspace:
    return Subspace(ambient=ambient, frame=random_frame(rng, ambient, dim))


def projector(x: Subspace) -> ComplexMatrix:
    """P_X = frame · frame*."""
    return x.frame @ x.frame.conj().T


def _check_ambient(x: Subspace, y: Subspace) -> None:
    if x.ambient != y.ambient:
        raise AmbientMismatch(x.ambient, y.ambient)


# ============================================================================
# Angles and gap
# ============================================================================


def principal_angles(x: Subspace, y: Subspace) -> list[float]:
    """
    Principal angles, ascending in [0, π/2], min(dim x, dim y) of them.

    Angles whose cosine squared is at least 1/2 are recomputed from the sines
    of the residual Y − P_X Y, which keeps small angles accurate.
    """
    _check_ambient(x, y)
    qf, qg = (x.frame, y.frame) if x.dim >= y.dim else (y.frame, x.frame)
    if qg.shape[1] == 0:
        return []
    dec = svd(qf.conj().T @ qg)
    s = np.clip(dec.sigma, 0.0, 1.0)
    n_small = int(np.sum(s**2 >= 0.5))
    theta = list(np.arccos(s[n_small:]))
    if n_small:
        rg = qg @ dec.v[:, :n_small]
        residual = rg - qf @ (qf.conj().T @ rg)
        sines = np.clip(svd(residual).sigma, 0.0, 1.0)
        theta = list(np.arcsin(sines[::-1][:n_small])) + theta
    return [float(np.clip(t, 0.0, _HALF_PI)) for t in theta]


def gap(x: Subspace, y: Subspace) -> float:
    """Operator norm ‖P_X − P_Y‖."""
    _check_ambient(x, y)
    sigma = svd(projector(x) - projector(y)).sigma
    return float(sigma[0]) if sigma.size else 0.0


# ============================================================================
# Canonical form of two projections
# ============================================================================


def two_projection_form(
    x: Subspace,
    y: Subspace,
    cluster_tol: Optional[float] = None,
) -> TwoProjectionForm:
    """
    Orthonormal basis of X + Y in which P_X, P_Y take their canonical block form.

    On the block of angle φ the basis is obtained from the principal pair
    (u, (v − cos φ·u)/sin φ) by the transition [[cos φ/2, sin φ/2],
    [sin φ/2, −cos φ/2]], giving P_X = [[(1+cos φ)/2, sin φ/2],
    [sin φ/2, (1−cos φ)/2]] and P_Y the same with −sin φ/2.

    Raises:
        AmbientMismatch: If the subspaces live in different spaces
    """
    _check_ambient(x, y)
    ctol = settings.cluster_tol if cluster_tol is None else cluster_tol
    n = x.ambient
    dx, dy = x.dim, y.dim
    dec = svd(x.frame.conj().T @ y.frame)
    r = min(dx, dy)
    ux = x.frame @ dec.u if dx else np.zeros((n, 0), dtype=np.complex128)
    uy = y.frame @ dec.v if dy else np.zeros((n, 0), dtype=np.complex128)

    zero_cols: list[ComplexMatrix] = []
    p_cols: list[ComplexMatrix] = []
    q_cols: list[ComplexMatrix] = []
    middle: list[tuple[float, ComplexMatrix, ComplexMatrix]] = []
    for i in range(r):
        c = float(np.clip(dec.sigma[i], 0.0, 1.0))
        d = uy[:, i] - c * ux[:, i]
        s = float(np.linalg.norm(d))
        theta = math.atan2(s, c)
        if theta < ctol:
            zero_cols.append(ux[:, i])
        elif theta > _HALF_PI - ctol:
            p_cols.append(ux[:, i])
            q_cols.append(uy[:, i])
        else:
            middle.append((theta, ux[:, i], d / s))

    # Directions of X (resp. Y) not paired by the cross-Gram SVD are orthogonal to Y (resp. X)
    if dx > r:
        p_cols.extend((x.frame @ orthonormal_completion(dec.u, dx)[:, r:]).T)
    if dy > r:
        q_cols.extend((y.frame @ orthonormal_completion(dec.v, dy)[:, r:]).T)

    middle.sort(key=lambda item: -item[0])
    groups: list[list[tuple[float, ComplexMatrix, ComplexMatrix]]] = []
    for item in middle:
        if groups and groups[-1][-1][0] - item[0] <= ctol:
            groups[-1].append(item)
        else:
            groups.append([item])

    block_cols: list[ComplexMatrix] = []
    blocks: list[AngleBlock] = []
    for group in groups:
        firsts = [math.cos(t / 2) * e1 + math.sin(t / 2) * e2 for t, e1, e2 in group]
        seconds = [math.sin(t / 2) * e1 - math.cos(t / 2) * e2 for t, e1, e2 in group]
        block_cols.extend(firsts + seconds)
        blocks.append(
            AngleBlock(angle=float(np.mean([t for t, _, _ in group])), multiplicity=len(group))
        )

    columns = zero_cols + p_cols + q_cols + block_cols
    basis = np.column_stack(columns) if columns else np.zeros((n, 0), dtype=np.complex128)
    form = TwoProjectionForm(
        ambient=n,
        basis=basis,
        m=len(zero_cols),
        p=len(p_cols),
        q=len(q_cols),
        blocks=tuple(blocks),
    )
    logger.debug(
        f"two_projection_form: m={form.m} p={form.p} q={form.q} "
        f"blocks={[(round(b.angle, 6), b.multiplicity) for b in blocks]}"
    )
    return form


def _angle_block(angle: float, multiplicity: int, sign: float) -> ComplexMatrix:
    c, s = math.cos(angle), math.sin(angle)
    core = np.array([[(1 + c) / 2, sign * s / 2], [sign * s / 2, (1 - c) / 2]])
    return kron(core, np.eye(multiplicity))


def form_blocks(form: TwoProjectionForm) -> tuple[ComplexMatrix, ComplexMatrix]:
    """P_X and P_Y restricted to X + Y in the canonical basis."""
    zeros_q = np.zeros((form.q, form.q))
    zeros_p = np.zeros((form.p, form.p))
    bx = direct_sum(
        [np.eye(form.m), np.eye(form.p), zeros_q]
        + [_angle_block(b.angle, b.multiplicity, 1.0) for b in form.blocks]
    )
    by = direct_sum(
        [np.eye(form.m), zeros_p, np.eye(form.q)]
        + [_angle_block(b.angle, b.multiplicity, -1.0) for b in form.blocks]
    )
    return bx, by


def reconstruct_projections(form: TwoProjectionForm) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Ambient P_X and P_Y rebuilt from the canonical form (zero off X + Y)."""
    bx, by = form_blocks(form)
    b = form.basis
    return b @ bx @ b.conj().T, b @ by @ b.conj().T


# ============================================================================
# Blend sets
# ============================================================================


def blend_bound(a: float) -> float:
    """Largest gap √(2a − 1)/a for which the blend set is nonempty."""
    return math.sqrt(2.0 * a - 1.0) / a


def _require_weight(a: float) -> None:
    if not a > 0.5:
        raise BadParameter("a", a, "a > 1/2")


def _t_value(angle: float, a: float) -> float:
    c = math.cos(angle)
    if a == 1.0:
        return (1.0 + c) / 2.0
    return (1.0 + c) * (a * (1.0 + c) - 1.0) / (2.0 * (2.0 * a - 1.0) * c)


def blend_weights(
    form: TwoProjectionForm,
    a: float,
    tol: Optional[float] = None,
) -> BlendDescription:
    """
    Per-block weights t_j = (1+cos φ)(a(1+cos φ)−1) / (2(2a−1) cos φ).

    Values within tol of [0, 1] are clamped; values further out are flagged
    and make the description inadmissible.

    Raises:
        BadParameter: If a <= 1/2
    """
    _require_weight(a)
    limit = settings.tol_eig(form.ambient) if tol is None else tol
    values: list[float] = []
    flagged: list[int] = []
    for j, block in enumerate(form.blocks):
        t = _t_value(block.angle, a)
        if -limit <= t < 0.0 or 1.0 < t <= 1.0 + limit:
            logger.debug(f"blend_weights: clamping t_{j}={t!r} into [0, 1]")
            t = min(max(t, 0.0), 1.0)
        elif t < -limit or t > 1.0 + limit:
            flagged.append(j)
        values.append(t)
    admissible = not flagged and (form.p + form.q == 0 or abs(a - 1.0) <= limit)
    return BlendDescription(
        form=form, a=a, t=tuple(values), admissible=admissible, flagged=tuple(flagged)
    )


def blend_exists(
    x: Subspace,
    y: Subspace,
    a: float,
    tol: Optional[float] = None,
) -> bool:
    """
    Decide whether the blend set of X and Y for weight a is nonempty.

    The gap criterion d(X, Y) ≤ √(2a−1)/a decides; the block-weight criterion
    (p + q > 0 forces a = 1, all t_j in [0, 1]) is evaluated as a cross-check.

    Raises:
        BadParameter: If a <= 1/2
        DimensionMismatch: If dim X != dim Y
    """
    _require_weight(a)
    _check_ambient(x, y)
    if x.dim != y.dim:
        raise DimensionMismatch(
            "Blend sets are defined for subspaces of equal dimension",
            details={"dim_x": x.dim, "dim_y": y.dim},
        )
    limit = settings.tol_eig(x.ambient) if tol is None else tol
    distance = gap(x, y)
    verdict = distance <= blend_bound(a) + limit
    cross = blend_weights(two_projection_form(x, y), a, tol=limit).admissible
    if cross != verdict:
        logger.warning(
            f"blend_exists: gap criterion ({verdict}) and block criterion ({cross}) disagree "
            f"at gap={distance:.12f}, bound={blend_bound(a):.12f}"
        )
    return verdict


def is_blend_member(
    x: Subspace,
    y: Subspace,
    z: Subspace,
    a: float,
    tol: Optional[float] = None,
) -> bool:
    """True iff a(P_X + P_Y) + (1 − 2a)P_Z is a projection (any real a)."""
    _check_ambient(x, y)
    _check_ambient(x, z)
    limit = settings.tol_canon(x.ambient) if tol is None else tol
    combo = a * (projector(x) + projector(y)) + (1.0 - 2.0 * a) * projector(z)
    return is_projection(combo, limit)[0]


def sample_blend(
    x: Subspace,
    y: Subspace,
    a: float,
    q_choice: Optional[npt.ArrayLike] = None,
    unitaries: Optional[Sequence[npt.ArrayLike]] = None,
) -> Subspace:
    """
    Build a member Z of the blend set from a free choice of parameters.

    In the canonical basis P_Z = I_m ⊕ Q ⊕ ⊕_j [[t_j I, √(t_j(1−t_j)) U_j*],
    [√(t_j(1−t_j)) U_j, (1−t_j) I]], where Q is a projection of size p + q
    (only possible for a = 1) and U_j are unitaries of size m_j. Defaults:
    Q = I_p ⊕ 0_q and U_j = I.

    Raises:
        EmptySet: If the blend set is empty
        DimensionMismatch: If Q or some U_j has the wrong size
        NotProjection: If Q is not a projection
    """
    if not blend_exists(x, y, a):
        raise EmptySet(gap(x, y), blend_bound(a))
    form = two_projection_form(x, y)
    weights = blend_weights(form, a)
    size = form.p + form.q
    tol = settings.tol_canon(x.ambient)

    if q_choice is None:
        q_mat = direct_sum([np.eye(form.p), np.zeros((form.q, form.q))])
    else:
        q_mat = as_complex(q_choice).reshape(size, -1) if size else np.zeros((0, 0))
        if q_mat.shape != (size, size):
            raise DimensionMismatch(
                f"Q must be {size}x{size}", details={"expected": size, "shape": list(q_mat.shape)}
            )
        if size and not is_projection(q_mat, tol)[0]:
            raise NotProjection("Q must be a projection")

    mults = [b.multiplicity for b in form.blocks]
    if unitaries is None:
        u_list = [np.eye(mj, dtype=np.complex128) for mj in mults]
    else:
        u_list = [as_complex(u) for u in unitaries]
        if len(u_list) != len(mults) or any(u.shape != (mj, mj) for u, mj in zip(u_list, mults)):
            raise DimensionMismatch(
                "Unitaries must match the block multiplicities",
                details={"expected": mults, "received": [list(u.shape) for u in u_list]},
            )
        if not all(is_unitary(u, tol) for u in u_list):
            raise DimensionMismatch("Every block parameter must be unitary")

    parts: list[ComplexMatrix] = [np.eye(form.m), q_mat]
    for t, u in zip(weights.t, u_list):
        mj = u.shape[0]
        off = math.sqrt(max(t * (1.0 - t), 0.0))
        parts.append(
            np.block([[t * np.eye(mj), off * u.conj().T], [off * u, (1.0 - t) * np.eye(mj)]])
        )
    pz = form.basis @ direct_sum(parts) @ form.basis.conj().T
    z = Subspace(ambient=x.ambient, frame=range_frame((pz + pz.conj().T) / 2.0))
    if z.dim != x.dim:
        # At a = 1 the free projection Q may have any rank
        level = logging.DEBUG if a == 1.0 else logging.WARNING
        logger.log(level, f"sample_blend: dim Z = {z.dim} differs from dim X = {x.dim}")
    return z


def blend_brute_force(
    x: Subspace,
    y: Subspace,
    a: float,
    grid: Optional[int] = None,
    threshold: float = 1e-6,
) -> BruteForceVerdict:
    """
    Search all rank-one Z inside X + Y for lines X and Y.

    Evaluates ‖R² − R‖_F with R = a(P_X+P_Y) + (1−2a)P_Z on a grid of the
    Bloch sphere of X + Y (vectorized over grid points), then refines the
    best point with Nelder–Mead.
    """
    _check_ambient(x, y)
    if x.dim != 1 or y.dim != 1:
        raise DimensionMismatch("Brute force is defined for lines", details={"dim_x": x.dim, "dim_y": y.dim})
    side = settings.bloch_grid if grid is None else grid
    plane = span(np.column_stack([x.frame, y.frame]))
    w = plane.frame
    if w.shape[1] == 1:
        return BruteForceVerdict(exists=True, min_residual=0.0, grid_points=1)
    base = a * (w.conj().T @ (projector(x) + projector(y)) @ w)

    def residuals(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        bloch = np.stack(
            [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
        )
        pz = (np.eye(2) + np.einsum("...k,kij->...ij", bloch, _PAULI)) / 2.0
        r = base + (1.0 - 2.0 * a) * pz
        defect = r @ r - r
        return np.sum(np.abs(defect) ** 2, axis=(-2, -1))

    thetas = math.pi * (np.arange(side) + 0.5) / side
    phis = 2.0 * math.pi * np.arange(side) / side
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = residuals(tt, pp)
    best = np.unravel_index(int(np.argmin(values)), values.shape)
    start = np.array([tt[best], pp[best]])
    refined = minimize(
        lambda v: float(residuals(np.array(v[0]), np.array(v[1]))),
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 4000},
    )
    min_residual = math.sqrt(max(float(min(refined.fun, values[best])), 0.0))
    return BruteForceVerdict(
        exists=min_residual <= threshold,
        min_residual=min_residual,
        grid_points=side * side,
        best_point=(float(refined.x[0]), float(refined.x[1])),
    )
