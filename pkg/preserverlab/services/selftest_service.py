"""Seeded invariant suite behind ``preserverlab selftest``."""

import logging
import math
from contextlib import nullcontext
from typing import Callable, Optional

import numpy as np

from preserverlab.core.config import settings
from preserverlab.core.exceptions import PreserverLabError
from preserverlab.generators.factory import get_generator, get_registered_generators
from preserverlab.linalg.complex_linalg import (
    herm_eig,
    kernel_fault,
    kron,
    max_abs,
    range_frame,
    svd,
    unitary_defect,
)
from preserverlab.linalg.herm_space import (
    add_maps,
    canonical_basis,
    compose,
    decode,
    encode,
    identity_map,
    map_from_function,
)
from preserverlab.linalg.sampling import (
    complex_gaussian,
    random_hermitian,
    random_isometry,
    random_projection,
    random_unitary,
)
from preserverlab.models.enums import PreserverTag
from preserverlab.models.geometry import Subspace
from preserverlab.models.herm import HermMap
from preserverlab.models.report import PropertyCheck, SelfTestReport
from preserverlab.services.construction_service import (
    clifford_embed,
    make_congruence,
    make_constant,
    make_dilation,
    make_rotation_triple,
    make_rotation_unitary_map,
    make_tensor_pair,
    make_trace_complement,
    rotation_family_defect,
    rotation_unitarity_defect,
)
from preserverlab.services.grassmann_service import (
    blend_bound,
    blend_brute_force,
    blend_exists,
    blend_weights,
    gap,
    is_blend_member,
    principal_angles,
    projector,
    random_subspace,
    reconstruct_projections,
    sample_blend,
    two_projection_form,
)
from preserverlab.services.half_rank_service import classify_two_dimensional, decompose_half_rank
from preserverlab.services.involution_service import bracket_defect, classify_involution_map
from preserverlab.services.rank_k_service import classify_rank_k, verify_preserves
from preserverlab.services.search_service import search_unitary_to_involution

logger = logging.getLogger(__name__)

CheckFunction = Callable[[np.random.Generator, bool], PropertyCheck]

# Ordered registry of property checks
_checks: list[tuple[str, CheckFunction]] = []


def _check(name: str) -> Callable[[CheckFunction], CheckFunction]:
    """Decorator to register a property check."""

    def decorator(fn: CheckFunction) -> CheckFunction:
        _checks.append((name, fn))
        return fn

    return decorator


def _count(full: bool, desk: int, acceptance: int) -> int:
    return acceptance if full else desk


def _angles_of_form(x: Subspace, y: Subspace) -> list[float]:
    form = two_projection_form(x, y)
    angles = [0.0] * form.m + [math.pi / 2] * min(form.p, form.q)
    for block in form.blocks:
        angles.extend([block.angle] * block.multiplicity)
    return sorted(angles)


def _herm_map(n: int, big: int, fn: Callable[[np.ndarray], np.ndarray], traceless: bool = False) -> HermMap:
    return map_from_function(canonical_basis(n, traceless), canonical_basis(big, traceless), fn)


# ============================================================================
# Kernel
# ============================================================================


@_check("complex_linalg.herm_eig")
def _herm_eig(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 20, 200)
    worst = 0.0
    for _ in range(cases):
        a = random_hermitian(rng, int(rng.integers(1, 9)))
        dec = herm_eig(a)
        worst = max(worst, max_abs(dec.reconstruct() - a), unitary_defect(dec.vectors))
    return PropertyCheck.measure("complex_linalg.herm_eig", worst, 1e-10, cases)


@_check("complex_linalg.svd")
def _svd(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 20, 200)
    worst = 0.0
    for _ in range(cases):
        a = complex_gaussian(rng, int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        dec = svd(a)
        worst = max(worst, max_abs(dec.reconstruct() - a))
    return PropertyCheck.measure("complex_linalg.svd", worst, 1e-10, cases)


@_check("herm_space.round_trip")
def _herm_round_trip(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 20, 200)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(1, 6))
        traceless = bool(rng.integers(0, 2)) and n > 1
        a = random_hermitian(rng, n, traceless=traceless)
        worst = max(worst, max_abs(decode(encode(a, canonical_basis(n, traceless))) - a))
    return PropertyCheck.measure("herm_space.round_trip", worst, 1e-12, cases)


# ============================================================================
# Two-subspace geometry
# ============================================================================


def _random_pair(rng: np.random.Generator, equal: bool = False) -> tuple[Subspace, Subspace]:
    dx = int(rng.integers(1, 5))
    dy = dx if equal else int(rng.integers(1, 5))
    return random_subspace(rng, 8, dx), random_subspace(rng, 8, dy)


@_check("grassmann.canonical_form")
def _canonical(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 20, 200)
    worst = 0.0
    angle_error = 0.0
    for _ in range(cases):
        x, y = _random_pair(rng)
        px, py = reconstruct_projections(two_projection_form(x, y))
        worst = max(worst, max_abs(px - projector(x)), max_abs(py - projector(y)))
        expected = principal_angles(x, y)
        recovered = _angles_of_form(x, y)
        if len(expected) != len(recovered):
            return PropertyCheck.verdict("grassmann.canonical_form", False, cases, "angle count differs")
        angle_error = max(angle_error, max_abs(np.array(expected) - np.array(recovered)))
    detail = f"worst angle error {angle_error:.3e}"
    if angle_error > 1e-7:
        return PropertyCheck.verdict("grassmann.canonical_form", False, cases, detail)
    return PropertyCheck.measure("grassmann.canonical_form", worst, 1e-8, cases, detail)


@_check("grassmann.gap_identity")
def _gap_identity(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 20, 200)
    worst = 0.0
    for _ in range(cases):
        x, y = _random_pair(rng, equal=True)
        worst = max(worst, abs(gap(x, y) - math.sin(max(principal_angles(x, y)))))
    return PropertyCheck.measure("grassmann.gap_identity", worst, 1e-9, cases)


@_check("grassmann.blend_law")
def _blend_law(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 10, 100)
    failures = 0
    for _ in range(cases):
        x, y = _random_pair(rng, equal=True)
        distance = gap(x, y)
        for a in (0.6, 1.0, 1.5, 2.0, 5.0):
            if abs(distance - blend_bound(a)) < 1e-6:
                continue
            exists = blend_exists(x, y, a)
            if exists != blend_weights(two_projection_form(x, y), a).admissible:
                failures += 1
            elif exists and not is_blend_member(x, y, sample_blend(x, y, a), a):
                failures += 1
    return PropertyCheck.verdict("grassmann.blend_law", failures == 0, cases, f"{failures} disagreements")


@_check("grassmann.blend_brute_force")
def _blend_brute(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 3, 20)
    failures = 0
    for _ in range(cases):
        x, y = random_subspace(rng, 3, 1), random_subspace(rng, 3, 1)
        a = float(rng.choice([0.6, 1.0, 1.5, 2.0, 5.0]))
        if abs(gap(x, y) - blend_bound(a)) < 1e-3:
            continue
        if blend_brute_force(x, y, a).exists != blend_exists(x, y, a):
            failures += 1
    return PropertyCheck.verdict("grassmann.blend_brute_force", failures == 0, cases, f"{failures} disagreements")


# ============================================================================
# Constructions
# ============================================================================


@_check("constructions.clifford_identity")
def _clifford_identity(rng: np.random.Generator, full: bool) -> PropertyCheck:
    per_k = _count(full, 10, 100)
    worst = 0.0
    for k in range(1, 7):
        for _ in range(per_k):
            v = complex_gaussian(rng, k, 1)[:, 0]
            r = clifford_embed(v)
            norm = float(np.vdot(v, v).real)
            eye = np.eye(r.shape[0])
            worst = max(worst, max_abs(r.conj().T @ r - norm * eye), max_abs(r @ r.conj().T - norm * eye))
    return PropertyCheck.measure("constructions.clifford_identity", worst, 1e-12, 6 * per_k)


@_check("constructions.generators")
def _generators(rng: np.random.Generator, full: bool) -> PropertyCheck:
    samples = _count(full, 20, 1000)
    worst = 0.0
    failed: list[str] = []
    names = get_registered_generators()
    for name in names:
        generator = get_generator(name)
        instance = generator.build(generator.random_params(rng))
        report = generator.verify(instance, samples=samples, seed=rng)
        worst = max(worst, report.worst_residual)
        if not report.ok:
            failed.append(name)
    passed = not failed and worst <= 1e-9
    return PropertyCheck(
        name="constructions.generators",
        passed=passed,
        worst_residual=float(f"{worst:.3e}"),
        threshold=1e-9,
        cases=len(names) * samples,
        detail=f"failed: {','.join(failed)}" if failed else None,
    )


@_check("constructions.rotation_identity")
def _rotation_identity(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 3, 30)
    worst = 0.0
    for index in range(cases):
        x, y, z = make_rotation_triple(1 + index % 3, seed=rng)
        worst = max(worst, rotation_unitarity_defect(x, y, z), rotation_family_defect(x, y, z))
    return PropertyCheck.measure("constructions.rotation_identity", worst, 1e-10, cases)


# ============================================================================
# Classification
# ============================================================================


@_check("preserver.bracket_identity")
def _bracket(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 5, 50)
    worst = 0.0
    for _ in range(cases):
        n = 2 * int(rng.integers(1, 4))
        u = random_unitary(rng, n)
        a, b = random_hermitian(rng, n, True), random_hermitian(rng, n, True)
        linear = _herm_map(n, n, lambda e: u @ e @ u.conj().T, traceless=True)
        antilinear = _herm_map(n, n, lambda e: u @ e.conj() @ u.conj().T, traceless=True)
        worst = max(worst, bracket_defect(linear, a, b, 1), bracket_defect(antilinear, a, b, -1))
    return PropertyCheck.measure("preserver.bracket_identity", worst, 1e-10, cases)


@_check("preserver.involution_round_trip")
def _involution_round_trip(rng: np.random.Generator, full: bool) -> PropertyCheck:
    per_k = _count(full, 2, 100)
    worst = 0.0
    wrong = 0
    for k in (1, 2, 3):
        for _ in range(per_k):
            n = 2 * k
            u = random_unitary(rng, n)
            s = int(rng.choice([-1, 1]))
            conj = bool(rng.integers(0, 2))
            f = _herm_map(n, n, lambda e: s * u @ (e.conj() if conj else e) @ u.conj().T, traceless=True)
            result = classify_involution_map(f, samples=20, seed=rng)
            worst = max(worst, result.residual)
            if result.tag != PreserverTag.TRACE_ZERO_UNITARY_FORM:
                wrong += 1
            elif k > 1 and (result.s != s or result.conj != conj):
                wrong += 1
    check = PropertyCheck.measure("preserver.involution_round_trip", worst, settings.tol_classify(6), 3 * per_k)
    return check if not wrong else PropertyCheck.verdict(check.name, False, check.cases, f"{wrong} wrong tags")


@_check("preserver.rank_k_round_trip")
def _rank_k_round_trip(rng: np.random.Generator, full: bool) -> PropertyCheck:
    per_branch = _count(full, 1, 50)
    cases: list[tuple[HermMap, int, PreserverTag]] = []
    for _ in range(per_branch):
        n, k = 4, int(rng.integers(1, 4))
        cases.append((make_constant(random_projection(rng, 3, 2), n, k), k, PreserverTag.CONSTANT))
        for n in (3, 4, 6):
            f = make_congruence(random_isometry(rng, n + 2, n), bool(rng.integers(0, 2)))
            cases.append((f, int(rng.integers(1, n)), PreserverTag.CONGRUENCE))
        for k, m in ((2, 1), (2, 2), (3, 2)):
            inner = make_congruence(random_unitary(rng, k + m), bool(rng.integers(0, 2)))
            f = compose(inner, make_trace_complement(k, k + m))
            cases.append((f, k, PreserverTag.COMPLEMENTED_CONGRUENCE))
    worst = 0.0
    wrong = 0
    for f, k, tag in cases:
        result = classify_rank_k(f, k, samples=20, seed=rng)
        worst = max(worst, result.residual)
        wrong += result.tag != tag
    check = PropertyCheck.measure("preserver.rank_k_round_trip", worst, 1e-8, len(cases))
    return check if not wrong else PropertyCheck.verdict(check.name, False, check.cases, f"{wrong} wrong tags")


@_check("preserver.dim2_round_trip")
def _dim2_round_trip(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 3, 100)
    worst = 0.0
    wrong = 0
    for _ in range(cases):
        d = int(rng.integers(1, 4))
        p0 = random_projection(rng, d, int(rng.integers(1, d + 1)))
        rank_p, rank_q = int(p0.trace().real.round()), int(rng.integers(0, d + 1))
        if rank_p == d and rank_q == d:
            rank_q = 0
        q0 = random_projection(rng, d, rank_q)
        v = random_unitary(rng, 2 * d)
        eye = np.eye(2)
        f = _herm_map(
            2,
            2 * d,
            lambda a: v @ (kron(a, p0) + kron(np.trace(a) * eye - a, q0)) @ v.conj().T,
        )
        result = classify_two_dimensional(f, samples=20, seed=rng)
        if result.tag != PreserverTag.DIM2_TENSOR:
            wrong += 1
            continue
        worst = max(worst, result.residual)
        recovered = principal_angles(
            Subspace(ambient=result.p0.shape[0], frame=range_frame(result.p0)),
            Subspace(ambient=result.q0.shape[0], frame=range_frame(result.q0)),
        )
        expected = principal_angles(
            Subspace(ambient=d, frame=range_frame(p0)), Subspace(ambient=d, frame=range_frame(q0))
        )
        if len(recovered) != len(expected) or (
            recovered and max_abs(np.array(recovered) - np.array(expected)) > 1e-7
        ):
            wrong += 1
    check = PropertyCheck.measure("preserver.dim2_round_trip", worst, 1e-8, cases)
    return check if not wrong else PropertyCheck.verdict(check.name, False, cases, f"{wrong} mismatches")


@_check("preserver.half_rank_round_trip")
def _half_rank(rng: np.random.Generator, full: bool) -> PropertyCheck:
    worst = 0.0
    wrong = 0
    rounds = _count(full, 1, 5)
    count = 0
    for _ in range(rounds):
        for k in (1, 2):
            n = 2 * k
            t = float(rng.uniform(0.55, 0.95))
            tau = make_rotation_unitary_map(k, float(rng.uniform(0.1, 1.4)))
            maps = [
                (make_congruence(random_unitary(rng, n)), None),
                (make_constant(random_projection(rng, 3, 2), n, k), None),
                (make_trace_complement(k, n), None),
                (make_tensor_pair(random_projection(rng, 2, 1), random_projection(rng, 2, 1), n, k), None),
                (make_dilation(k, t, tau, samples=10, seed=rng), t),
            ]
            for f, expected_t in maps:
                count += 1
                dec = decompose_half_rank(f, k, samples=10, seed=rng)
                worst = max(worst, dec.residual)
                if any(size < 2 * k for size in dec.mult):
                    wrong += 1
                if expected_t is not None and (dec.r != 1 or abs(dec.t[0] - expected_t) > 1e-7):
                    wrong += 1
    check = PropertyCheck.measure("preserver.half_rank_round_trip", worst, 1e-8, count)
    return check if not wrong else PropertyCheck.verdict(check.name, False, count, f"{wrong} mismatches")


@_check("preserver.negative_control")
def _negative(rng: np.random.Generator, full: bool) -> PropertyCheck:
    cases = _count(full, 3, 20)
    accepted = 0
    for _ in range(cases):
        n = int(rng.integers(3, 5))
        base = identity_map(canonical_basis(n))
        noise = HermMap(domain=base.domain, codomain=base.codomain, matrix=rng.standard_normal(base.matrix.shape))
        report = verify_preserves(add_maps(base, noise, 1.0, 0.01), 1, samples=20, seed=rng)
        accepted += report.ok
    return PropertyCheck.verdict("preserver.negative_control", accepted == 0, cases, f"{accepted} accepted")


@_check("preserver.nonexistence_search")
def _search(rng: np.random.Generator, full: bool) -> PropertyCheck:
    restarts = _count(full, 5, 500)
    report = search_unitary_to_involution(
        restarts=restarts,
        unitaries=_count(full, 64, 200),
        seed=int(rng.integers(0, 2**32)),
    )
    return PropertyCheck(
        name="preserver.nonexistence_search",
        passed=report.best_residual >= 0.1,
        worst_residual=float(f"{report.best_residual:.3e}"),
        threshold=0.1,
        cases=restarts,
        detail="best residual must stay above threshold",
    )


def run_selftest(
    seed: Optional[int] = None,
    full: bool = False,
    inject_fault: bool = False,
    only: Optional[list[str]] = None,
) -> SelfTestReport:
    """
    Run every registered property check with its own seeded generator.

    Args:
        seed: Base seed; check i draws from default_rng([seed, i])
        full: Use the acceptance sample counts instead of the desk-scale ones
        inject_fault: Run under a corrupted Kronecker kernel (negative control)
        only: Restrict to checks whose name starts with one of these prefixes
    """
    used_seed = settings.default_seed if seed is None else seed
    results: list[PropertyCheck] = []
    guard = kernel_fault() if inject_fault else nullcontext()
    with guard:
        for index, (name, fn) in enumerate(_checks):
            if only and not any(name.startswith(prefix) for prefix in only):
                continue
            rng = np.random.default_rng([used_seed, index])
            try:
                results.append(fn(rng, full))
            except PreserverLabError as exc:
                logger.debug(f"selftest: {name} raised {exc.error_code}")
                results.append(PropertyCheck.verdict(name, False, 0, f"{exc.error_code}: {exc.message}"))
    report = SelfTestReport(seed=used_seed, full=full, fault_injected=inject_fault, checks=tuple(results))
    logger.info(f"selftest: {len(results) - len(report.failures)}/{len(results)} checks passed")
    return report


def check_names() -> list[str]:
    return [name for name, _ in _checks]
