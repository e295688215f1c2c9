"""Block decomposition of rank-k preservers on H_{2k} and the two-dimensional classification."""

import logging
import math
from dataclasses import replace
from typing import Optional

import numpy as np
import numpy.typing as npt

from preserverlab.core.config import settings
from preserverlab.core.exceptions import BadParameter, BlockExtractionFailure, NotAPreserver
from preserverlab.linalg.complex_linalg import (
    as_complex,
    direct_sum,
    kron,
    max_abs,
    range_frame,
    unitary_defect,
)
from preserverlab.linalg.herm_space import (
    apply_map,
    canonical_basis,
    map_from_images,
    restrict_to_traceless,
)
from preserverlab.linalg.real_coords import apply_real, tabulate
from preserverlab.linalg.sampling import Seed, make_rng, random_involution
from preserverlab.models.classification import (
    DecompositionCheck,
    HalfRankDecomposition,
    PreserverClass,
)
from preserverlab.models.enums import DomainKind
from preserverlab.models.geometry import Subspace
from preserverlab.models.herm import HermMap
from preserverlab.models.matrices import ComplexMatrix
from preserverlab.services.grassmann_service import two_projection_form
from preserverlab.services.involution_service import (
    factor_hermitian_valued,
    factor_unitary_valued,
)
from preserverlab.services.rank_k_service import probe_residual, verify_preserves

logger = logging.getLogger(__name__)


def decompose_half_rank(
    f: HermMap,
    k: int,
    samples: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> HalfRankDecomposition:
    """
    Split a rank-k projection preserver f: H_{2k} → H_N into its blocks.

    With P = I_k ⊕ 0_k and Q = 0_k ⊕ I_k, the space Z = ran f(P) + ran f(Q)
    carries a basis in which

        f(A)|_Z = (tr A/k) I_m ⊕ φ0(A) ⊕ ⊕_j [[t_j c I, √(t_j(1−t_j)) φ_j(B)*],
                                              [√(t_j(1−t_j)) φ_j(B), (1−t_j) c I]]

    where c = tr A / k, B = 2A − c I and 1/2 < t_1 < … < t_r < 1.

    Raises:
        NotAPreserver: If randomized verification rejects f
        BlockExtractionFailure: If the block formula does not reproduce f
    """
    if f.domain.traceless or f.n_in != 2 * k:
        raise BadParameter("k", k, f"domain H_{f.n_in} = H_2k")
    report = verify_preserves(f, k, samples=samples, seed=seed)
    if not report.ok:
        raise NotAPreserver(report.reason or "rank-k projections are not preserved")
    big = f.n_out
    limit = settings.tol_classify(big) if tol is None else tol

    p_half = direct_sum([np.eye(k), np.zeros((k, k))])
    q_half = direct_sum([np.zeros((k, k)), np.eye(k)])
    x = Subspace(ambient=big, frame=range_frame(apply_map(f, p_half)))
    y = Subspace(ambient=big, frame=range_frame(apply_map(f, q_half)))
    form = two_projection_form(x, y)
    if form.p != form.q:
        raise NotAPreserver(
            "images of complementary projections have unequal exclusive parts",
            details={"p": form.p, "q": form.q},
        )
    basis = form.basis
    basis_adj = basis.conj().T

    def compressed(a: ComplexMatrix) -> ComplexMatrix:
        return basis_adj @ apply_map(f, a) @ basis

    m, p = form.m, form.p
    inner = slice(m, m + 2 * p)
    domain = f.domain
    phi0 = None
    if p:
        phi0 = map_from_images(
            domain,
            [compressed(e)[inner, inner] for e in domain.elements],
            canonical_basis(2 * p),
            tol=limit,
        )

    ts: list[float] = []
    phij = []
    for block, (first, second) in zip(form.blocks, form.block_slices()):
        t = (1.0 + math.cos(block.angle)) / 2.0
        weight = 2.0 * math.sqrt(t * (1.0 - t))
        ts.append(t)
        phij.append(
            tabulate(
                DomainKind.HERM0,
                2 * k,
                block.multiplicity,
                lambda g, first=first, second=second, weight=weight: (
                    compressed(g)[second, first] / weight
                ),
            )
        )

    dec = HalfRankDecomposition(
        k=k,
        n_out=big,
        m=m,
        p=p,
        t=tuple(ts),
        mult=tuple(b.multiplicity for b in form.blocks),
        basis=basis,
        phi0=phi0,
        phij=tuple(phij),
    )
    residual = max(max_abs(apply_map(f, e) - reassemble(dec, e)) for e in domain.elements)
    if residual > limit:
        raise BlockExtractionFailure(residual, limit, "reassembly")
    if any(size < 2 * k for size in dec.mult):
        logger.warning(f"decompose_half_rank: block sizes {dec.mult} violate m_j >= 2k = {2 * k}")
    logger.debug(f"decompose_half_rank: m={m} p={p} t={ts} mult={dec.mult} residual={residual:.3e}")
    return replace(dec, residual=residual)


def reassemble(dec: HalfRankDecomposition, a: npt.ArrayLike) -> ComplexMatrix:
    """Evaluate the block formula of ``dec`` at A ∈ H_{2k}."""
    a = as_complex(a)
    c = float(np.trace(a).real) / dec.k
    traceless = 2.0 * a - c * np.eye(2 * dec.k)
    parts: list[ComplexMatrix] = [c * np.eye(dec.m)]
    if dec.phi0 is not None:
        parts.append(apply_map(dec.phi0, a))
    for t, size, phi in zip(dec.t, dec.mult, dec.phij):
        off = math.sqrt(t * (1.0 - t)) * apply_real(phi, traceless)
        eye = np.eye(size)
        parts.append(np.block([[t * c * eye, off.conj().T], [off, (1.0 - t) * c * eye]]))
    return dec.basis @ direct_sum(parts) @ dec.basis.conj().T


def check_decomposition(
    dec: HalfRankDecomposition,
    samples: Optional[int] = None,
    seed: Seed = None,
) -> DecompositionCheck:
    """
    Structural diagnostics: φ0 should send involutions to involutions, each
    φ_j involutions to unitaries, every m_j >= 2k, and p = 0 or p >= k.
    """
    count = settings.involution_samples if samples is None else samples
    rng = make_rng(settings.default_seed if seed is None else seed)
    phi0_defect = 0.0
    unitary = [0.0] * dec.r
    for _ in range(count):
        h = random_involution(rng, dec.k)
        if dec.phi0 is not None:
            image = apply_map(dec.phi0, h)
            phi0_defect = max(phi0_defect, max_abs(image @ image - np.eye(2 * dec.p)))
        for j, phi in enumerate(dec.phij):
            unitary[j] = max(unitary[j], unitary_defect(apply_real(phi, h)))
    return DecompositionCheck(
        phi0_involution_defect=phi0_defect,
        phij_unitary_defects=tuple(unitary),
        block_bound_ok=all(size >= 2 * dec.k for size in dec.mult),
        p_bound_ok=dec.p == 0 or dec.p >= dec.k,
    )


# ============================================================================
# Preservers of rank-one projections on H_2
# ============================================================================


def classify_two_dimensional(
    f: HermMap,
    samples: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> PreserverClass:
    """
    Classify a rank-one projection preserver f: H_2 → H_N.

    Returns constant (tr A) P0 when the decomposition has no exclusive or
    mixed blocks, otherwise the tensor form U (A ⊗ P0 + ((tr A) I − A) ⊗ Q0) U*
    with U an isometry; an odd leftover of the scalar block is reported as the
    extra term (tr A) R0 in ``constant_part``.
    """
    if f.n_in != 2 or f.domain.traceless:
        raise BadParameter("n", f.n_in, "a map on H_2")
    big = f.n_out
    limit = settings.tol_classify(big) if tol is None else tol
    rng = make_rng(settings.default_seed if seed is None else seed)
    try:
        dec = decompose_half_rank(f, 1, samples=samples, seed=rng, tol=limit)
    except NotAPreserver as exc:
        return PreserverClass.not_a_preserver(exc.message)
    probe_seed = int(rng.integers(0, 2**63))
    b = dec.basis

    if dec.p == 0 and dec.r == 0:
        p0 = b[:, : dec.m] @ b[:, : dec.m].conj().T
        residual = probe_residual(f, lambda a: np.trace(a) * p0, 1, seed=probe_seed)
        if residual > limit:
            return PreserverClass.not_a_preserver("constant form does not reproduce the map", residual)
        return PreserverClass.constant(p0=p0, residual=residual)

    # Each coordinate of P0/Q0 owns two columns of U: (a = 0, a = 1)
    firsts: list[ComplexMatrix] = []
    seconds: list[ComplexMatrix] = []
    p_diag: list[ComplexMatrix] = []
    q_diag: list[ComplexMatrix] = []

    pairs = dec.m // 2
    if pairs:
        firsts.append(b[:, 0 : 2 * pairs : 2])
        seconds.append(b[:, 1 : 2 * pairs : 2])
        p_diag.append(np.eye(pairs))
        q_diag.append(np.eye(pairs))
    constant_part = None
    if dec.m % 2:
        v = b[:, dec.m - 1 : dec.m]
        constant_part = v @ v.conj().T

    if dec.phi0 is not None:
        signed = factor_hermitian_valued(restrict_to_traceless(dec.phi0), tol=limit)
        if not signed.is_preserver:
            return PreserverClass.not_a_preserver(f"exclusive block: {signed.reason}", signed.residual)
        frame = b[:, dec.m : dec.m + 2 * dec.p] @ signed.u
        for size, p_val, q_val, offset in (
            (signed.p, 1.0, 0.0, 0),
            (signed.q, 0.0, 1.0, 2 * signed.p),
        ):
            if size:
                firsts.append(frame[:, offset : offset + size])
                seconds.append(frame[:, offset + size : offset + 2 * size])
                p_diag.append(p_val * np.eye(size))
                q_diag.append(q_val * np.eye(size))

    offset = dec.m + 2 * dec.p
    for t, size, phi in zip(dec.t, dec.mult, dec.phij):
        factored = factor_unitary_valued(phi, tol=limit)
        if not factored.is_preserver:
            return PreserverClass.not_a_preserver(f"mixed block: {factored.reason}", factored.residual)
        n = int(factored.n or 0)
        left = b[:, offset : offset + size] @ factored.v.conj().T
        right = b[:, offset + size : offset + 2 * size] @ factored.u
        # coordinates (s, i): s = 0 from the first group, s = 1 from the second
        firsts.append(np.column_stack([left[:, :n], right[:, :n]]))
        seconds.append(np.column_stack([left[:, n:], right[:, n:]]))
        w = math.sqrt(t * (1.0 - t))
        p_diag.append(kron(np.array([[t, w], [w, 1.0 - t]]), np.eye(n)))
        q_diag.append(kron(np.array([[t, -w], [-w, 1.0 - t]]), np.eye(n)))
        offset += 2 * size

    u = np.column_stack([np.column_stack(firsts), np.column_stack(seconds)])
    p0 = direct_sum(p_diag)
    q0 = direct_sum(q_diag)
    extra = constant_part if constant_part is not None else np.zeros((big, big))
    u_adj = u.conj().T

    def model(a: ComplexMatrix) -> ComplexMatrix:
        trace = np.trace(a)
        core = kron(a, p0) + kron(trace * np.eye(2) - a, q0)
        return u @ core @ u_adj + trace * extra

    residual = probe_residual(f, model, 1, seed=probe_seed)
    if residual > limit:
        return PreserverClass.not_a_preserver("tensor form does not reproduce the map", residual)
    return PreserverClass.dim2_tensor(
        u=u, p0=p0, q0=q0, residual=residual, constant_part=constant_part
    )
