"""Verification of rank-k projection preservers and their classification."""

import logging
from typing import Callable, Optional

import numpy as np

from preserverlab.core.config import settings
from preserverlab.core.exceptions import BadParameter
from preserverlab.linalg.complex_linalg import herm_eig, is_projection, max_abs, projection_defect
from preserverlab.linalg.herm_space import apply_map, compose
from preserverlab.linalg.sampling import Seed, make_rng, random_projection
from preserverlab.models.classification import PreserverClass, VerificationReport
from preserverlab.models.herm import HermMap
from preserverlab.models.matrices import ComplexMatrix
from preserverlab.services.construction_service import make_trace_complement

logger = logging.getLogger(__name__)

MatrixFunction = Callable[[ComplexMatrix], ComplexMatrix]


def _require_rank(f: HermMap, k: int) -> None:
    if f.domain.traceless:
        raise BadParameter("domain", "herm0", "a map on the full hermitian space")
    if not 1 <= k < f.n_in:
        raise BadParameter("k", k, f"1 <= k < n = {f.n_in}")


def verify_preserves(
    f: HermMap,
    k: int,
    samples: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> VerificationReport:
    """
    Randomized check that f maps rank-k projections to projections of one rank.

    Differing ranks are reported as ok=False with the observed ranks, since a
    genuine preserver has a common image rank.
    """
    _require_rank(f, k)
    count = settings.default_samples if samples is None else samples
    rng = make_rng(settings.default_seed if seed is None else seed)
    limit = settings.tol_canon(f.n_out) if tol is None else tol
    worst = 0.0
    ranks: list[int] = []
    for index in range(count):
        image = apply_map(f, random_projection(rng, f.n_in, k))
        worst = max(worst, projection_defect(image))
        ok, rank = is_projection(image, limit)
        if not ok:
            return VerificationReport(
                ok=False,
                m=None,
                worst_residual=worst,
                samples=index + 1,
                reason=f"sample {index} has a non-projection image (defect {worst:.3e})",
            )
        ranks.append(int(rank))
    distinct = sorted(set(ranks))
    if len(distinct) > 1:
        logger.debug(f"verify_preserves: image ranks {distinct}")
        return VerificationReport(
            ok=False,
            m=None,
            worst_residual=worst,
            samples=count,
            ranks=tuple(distinct),
            reason=f"image rank is not constant: {distinct}",
        )
    return VerificationReport(
        ok=True,
        m=distinct[0] if distinct else None,
        worst_residual=worst,
        samples=count,
        ranks=tuple(distinct),
    )


def probe_residual(
    f: HermMap,
    model: MatrixFunction,
    k: int,
    samples: Optional[int] = None,
    seed: Seed = None,
) -> float:
    """Largest |f(A) − model(A)| over the canonical basis and random rank-k projections."""
    count = settings.probe_projections if samples is None else samples
    rng = make_rng(settings.default_seed if seed is None else seed)
    probes = list(f.domain.elements) + [random_projection(rng, f.n_in, k) for _ in range(count)]
    return max(max_abs(apply_map(f, a) - model(a)) for a in probes)


def recover_congruence(f: HermMap) -> tuple[ComplexMatrix, bool]:
    """
    Isometry U and conjugation flag with f(A) ≈ U A U* (or U Ā U*).

    Probes f on the rank-one projections e_i e_i* and (e_1 + e_j)(e_1 + e_j)*;
    the flag is decided on (e_1 + i e_2)(e_1 + i e_2)*.
    """
    n = f.n_in
    columns = []
    for i in range(n):
        e = np.zeros((n, n), dtype=np.complex128)
        e[i, i] = 1.0
        dec = herm_eig(apply_map(f, e))
        columns.append(dec.vectors[:, -1] * np.sqrt(max(dec.values[-1], 0.0)))
    u = np.column_stack(columns)
    for j in range(1, n):
        x = np.zeros(n, dtype=np.complex128)
        x[0] = x[j] = 1.0
        link = u[:, 0].conj() @ apply_map(f, np.outer(x, x.conj())) @ u[:, j]
        if abs(link) > 0.0:
            u[:, j] = u[:, j] * np.conj(link / abs(link))
    if n < 2:
        return u, False
    x = np.zeros(n, dtype=np.complex128)
    x[0], x[1] = 1.0, 1j
    probe = np.outer(x, x.conj())
    image = apply_map(f, probe)
    linear = max_abs(image - u @ probe @ u.conj().T)
    antilinear = max_abs(image - u @ probe.conj() @ u.conj().T)
    return u, bool(antilinear < linear)


def _congruence_model(u: ComplexMatrix, conj: bool) -> MatrixFunction:
    u_adj = u.conj().T

    def model(a: ComplexMatrix) -> ComplexMatrix:
        return u @ (a.conj() if conj else a) @ u_adj

    return model


def classify_rank_k(
    f: HermMap,
    k: int,
    m: Optional[int] = None,
    samples: Optional[int] = None,
    seed: Seed = None,
    tol: Optional[float] = None,
) -> PreserverClass:
    """
    Decide which form a rank-k projection preserver f: H_n → H_N takes.

    Branches are tried in order: constant (tr A / k) P0; congruence
    U A U* or U Ā U* when the image rank equals k; complemented congruence
    U ((tr A / k) I − A) U* (or with Ā) when k >= 2 and n = k + m.
    """
    _require_rank(f, k)
    n, big = f.n_in, f.n_out
    limit = settings.tol_classify(big) if tol is None else tol
    rng = make_rng(settings.default_seed if seed is None else seed)

    report = verify_preserves(f, k, samples=samples, seed=rng)
    if not report.ok:
        return PreserverClass.not_a_preserver(report.reason or "not a preserver", report.worst_residual)
    if m is not None and report.m != m:
        return PreserverClass.not_a_preserver(f"image rank is {report.m}, expected {m}")
    rank = int(report.m or 0)
    probe_seed = int(rng.integers(0, 2**63))

    p0 = apply_map(f, np.eye(n)) * (k / n)
    residual = probe_residual(f, lambda a: np.trace(a) / k * p0, k, seed=probe_seed)
    if residual <= limit:
        return PreserverClass.constant(p0=p0, residual=residual)
    best = residual

    if rank == k:
        u, conj = recover_congruence(f)
        residual = probe_residual(f, _congruence_model(u, conj), k, seed=probe_seed)
        if residual <= limit:
            logger.debug(f"classify_rank_k: congruence branch, conj={conj}")
            return PreserverClass.congruence(u=u, conj=conj, residual=residual)
        best = min(best, residual)

    if k >= 2 and n == k + rank:
        if rank > k:
            logger.info(f"classify_rank_k: complemented branch with image rank {rank} > k={k}")
        u, conj = recover_congruence(compose(f, make_trace_complement(rank, n)))
        inner = _congruence_model(u, conj)
        eye = np.eye(n)
        residual = probe_residual(
            f, lambda a: inner(np.trace(a) / k * eye - a), k, seed=probe_seed
        )
        if residual <= limit:
            logger.debug(f"classify_rank_k: complemented congruence branch, conj={conj}")
            return PreserverClass.congruence(u=u, conj=conj, residual=residual, complemented=True)
        best = min(best, residual)

    return PreserverClass.not_a_preserver("no branch reproduces the map", best)
