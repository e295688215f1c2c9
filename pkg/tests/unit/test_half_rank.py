"""Unit tests for the half-rank block decomposition and the H_2 classification."""

import numpy as np
import pytest

from preserverlab.core.exceptions import BadParameter, NotAPreserver
from preserverlab.linalg.complex_linalg import max_abs
from preserverlab.linalg.herm_space import apply_map, canonical_basis
from preserverlab.linalg.sampling import random_hermitian, random_isometry, random_projection
from preserverlab.models.enums import PreserverTag
from preserverlab.models.herm import HermMap
from preserverlab.services.construction_service import (
    make_congruence,
    make_constant,
    make_dilation,
    make_rotation_unitary_map,
    make_tensor_pair,
)
from preserverlab.services.half_rank_service import (
    check_decomposition,
    classify_two_dimensional,
    decompose_half_rank,
    reassemble,
)


def _dilation(k: int, t: float, phi: float = 0.3):
    return make_dilation(k, t, make_rotation_unitary_map(k, phi), samples=20, seed=1)


# ============================================================================
# Decomposition Tests
# ============================================================================


class TestDecomposeHalfRank:
    """Tests for decompose_half_rank, reassemble and check_decomposition."""

    def test_congruence_is_exclusive(self, rng):
        """Test a congruence on H_2 has p = 1 and no mixed blocks."""
        dec = decompose_half_rank(make_congruence(random_isometry(rng, 3, 2)), 1, samples=20, seed=1)

        assert (dec.m, dec.p, dec.r) == (0, 1, 0)
        assert dec.phi0 is not None
        assert dec.residual <= 1e-8

    def test_constant_is_scalar_block(self, rng):
        """Test a constant map has only the scalar block."""
        dec = decompose_half_rank(make_constant(random_projection(rng, 3, 2), 2, 1), 1, samples=20, seed=1)

        assert (dec.m, dec.p, dec.r) == (2, 0, 0)
        assert dec.phi0 is None

    @pytest.mark.parametrize("t", [0.7, 0.3])
    def test_dilation_weight_convention(self, t):
        """Test the recovered weight is max(t, 1 - t) with one block of size m."""
        dec = decompose_half_rank(_dilation(1, t), 1, samples=20, seed=1)

        assert dec.r == 1
        assert dec.t[0] == pytest.approx(max(t, 1.0 - t), abs=1e-8)
        assert dec.mult == (4,)

    def test_dilation_k_two(self):
        """Test a dilation on H_4 has block size 4k^2 >= 2k."""
        dec = decompose_half_rank(_dilation(2, 0.8), 2, samples=20, seed=1)

        assert dec.mult == (16,)
        assert dec.t[0] == pytest.approx(0.8, abs=1e-8)

    def test_reassemble_matches_map(self, rng):
        """Test the block formula reproduces the map off the basis."""
        f = _dilation(1, 0.65)
        dec = decompose_half_rank(f, 1, samples=20, seed=1)
        a = random_hermitian(rng, 2)

        assert max_abs(reassemble(dec, a) - apply_map(f, a)) <= 1e-8

    def test_check_decomposition(self):
        """Test the diagnostics of a dilation are clean."""
        dec = decompose_half_rank(_dilation(1, 0.75), 1, samples=20, seed=1)
        check = check_decomposition(dec, samples=10, seed=2)

        assert check.phij_unitary_defects[0] <= 1e-8
        assert check.block_bound_ok is True
        assert check.p_bound_ok is True

    def test_rejects_non_preserver(self):
        """Test a perturbed identity raises NotAPreserver."""
        basis = canonical_basis(2)
        noise = np.random.default_rng(4).standard_normal((4, 4))
        f = HermMap(domain=basis, codomain=basis, matrix=np.eye(4) + 0.01 * noise)

        with pytest.raises(NotAPreserver):
            decompose_half_rank(f, 1, samples=20, seed=1)

    def test_rejects_wrong_domain(self, complement_map):
        """Test a map on H_5 has no half-rank decomposition for k = 2."""
        with pytest.raises(BadParameter):
            decompose_half_rank(complement_map, 2)


# ============================================================================
# Two-Dimensional Classification Tests
# ============================================================================


class TestClassifyTwoDimensional:
    """Tests for classify_two_dimensional."""

    def test_tensor_pair(self, rng):
        """Test A (x) P0 + (tr A I - A) (x) Q0 is recovered up to a joint unitary."""
        p0, q0 = random_projection(rng, 3, 1), random_projection(rng, 3, 2)
        result = classify_two_dimensional(make_tensor_pair(p0, q0, 2, 1), samples=20, seed=1)

        assert result.tag == PreserverTag.DIM2_TENSOR
        assert result.residual <= 1e-8
        assert np.trace(result.p0).real == pytest.approx(1.0, abs=1e-8)
        assert np.trace(result.q0).real == pytest.approx(2.0, abs=1e-8)

    def test_congruence(self, rng):
        """Test a congruence on H_2 is a tensor form with P0 = 1, Q0 = 0."""
        result = classify_two_dimensional(make_congruence(random_isometry(rng, 4, 2)), samples=20, seed=1)

        assert result.tag == PreserverTag.DIM2_TENSOR
        assert result.residual <= 1e-8

    def test_dilation(self):
        """Test a dilation factors through the mixed-block tensor form."""
        result = classify_two_dimensional(_dilation(1, 0.6), samples=20, seed=1)

        assert result.tag == PreserverTag.DIM2_TENSOR
        assert result.residual <= 1e-8

    def test_constant(self, rng):
        """Test a constant map is reported as constant."""
        p0 = random_projection(rng, 3, 1)
        result = classify_two_dimensional(make_constant(p0, 2, 1), samples=20, seed=1)

        assert result.tag == PreserverTag.CONSTANT
        assert max_abs(result.p0 - p0) <= 1e-8

    def test_non_preserver(self):
        """Test a perturbed identity is rejected."""
        basis = canonical_basis(2)
        noise = np.random.default_rng(4).standard_normal((4, 4))
        f = HermMap(domain=basis, codomain=basis, matrix=np.eye(4) + 0.01 * noise)

        assert classify_two_dimensional(f, samples=20, seed=1).tag == PreserverTag.NOT_A_PRESERVER

    def test_rejects_larger_domain(self, complement_map):
        """Test a map on H_5 raises BadParameter."""
        with pytest.raises(BadParameter):
            classify_two_dimensional(complement_map)
