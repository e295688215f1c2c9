"""Least-squares search for real-linear maps M_2 → H_2 sending unitaries to involutions.

No such map exists; a residual close to zero would point at a kernel bug.
"""

import logging
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from preserverlab.core.config import settings
from preserverlab.core.exceptions import BadParameter
from preserverlab.linalg.herm_space import canonical_basis
from preserverlab.linalg.real_coords import to_real
from preserverlab.linalg.sampling import make_rng, random_unitary
from preserverlab.models.classification import SearchReport

logger = logging.getLogger(__name__)

_IN = 8
_OUT = 4

# Fewer samples than this let the 32 real parameters interpolate them
MIN_UNITARIES = 2 * _OUT * _IN


def _images(params: np.ndarray, inputs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    coeffs = inputs @ params.reshape(_OUT, _IN).T
    return np.einsum("sk,kij->sij", coeffs, basis)


def _residual_vector(params: np.ndarray, inputs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    h = _images(params, inputs, basis)
    defect = h @ h - np.eye(2)
    return np.concatenate([defect.real.ravel(), defect.imag.ravel()])


def _jacobian(params: np.ndarray, inputs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    h = _images(params, inputs, basis)
    # d(H²)/dΦ_kl = x_l (E_k H + H E_k)
    sym = np.einsum("kij,sjl->skil", basis, h) + np.einsum("sij,kjl->skil", h, basis)
    full = np.einsum("skil,sm->silkm", sym, inputs).reshape(inputs.shape[0], 2, 2, _OUT * _IN)
    return np.concatenate(
        [full.real.reshape(-1, _OUT * _IN), full.imag.reshape(-1, _OUT * _IN)], axis=0
    )


def _rms(params: np.ndarray, inputs: np.ndarray, basis: np.ndarray) -> float:
    h = _images(params, inputs, basis)
    defect = h @ h - np.eye(2)
    return float(np.sqrt(np.mean(np.sum(np.abs(defect) ** 2, axis=(-2, -1)))))


def search_unitary_to_involution(
    restarts: Optional[int] = None,
    unitaries: Optional[int] = None,
    seed: Optional[int] = None,
    max_nfev: int = 200,
) -> SearchReport:
    """
    Minimize the RMS of ‖φ(U)² − I‖_F over real-linear φ: M_2 → H_2.

    Each restart draws a Gaussian starting map and runs a trust-region
    least-squares solve with an analytic Jacobian over the sampled
    unitaries. Every fitted map is then scored on a second, independent set
    of the same size, so a fit that only interpolates the samples does not
    count as a solution. Reports the best and median held-out residuals.

    Raises:
        BadParameter: If fewer than MIN_UNITARIES unitaries are requested
    """
    count = settings.search_restarts if restarts is None else restarts
    size = settings.search_unitaries if unitaries is None else unitaries
    if size < MIN_UNITARIES:
        raise BadParameter("unitaries", size, f">= {MIN_UNITARIES} (twice the real parameter count)")
    used_seed = settings.default_seed if seed is None else seed
    rng = make_rng(used_seed)
    basis = np.asarray(canonical_basis(2).elements)
    inputs = np.stack([to_real(random_unitary(rng, 2)) for _ in range(size)])
    held_out = np.stack([to_real(random_unitary(rng, 2)) for _ in range(size)])

    fits: list[float] = []
    finals: list[float] = []
    for _ in range(count):
        start = rng.standard_normal(_OUT * _IN)
        result = least_squares(
            _residual_vector,
            start,
            jac=_jacobian,
            args=(inputs, basis),
            max_nfev=max_nfev,
        )
        fits.append(_rms(result.x, inputs, basis))
        finals.append(_rms(result.x, held_out, basis))
    best = float(min(finals))
    logger.debug(
        f"search_unitary_to_involution: best held-out residual {best:.6f} "
        f"(best fit {min(fits):.6f}) over {count} restarts"
    )
    return SearchReport(
        best_residual=best,
        median_residual=float(np.median(finals)),
        restarts=count,
        unitaries=size,
        seed=int(used_seed),
        fit_residual=float(min(fits)),
    )
