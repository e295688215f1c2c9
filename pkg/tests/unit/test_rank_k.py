"""Unit tests for rank-k preserver verification and classification."""

import numpy as np
import pytest

from preserverlab.core.exceptions import BadParameter
from preserverlab.linalg.complex_linalg import max_abs
from preserverlab.linalg.herm_space import apply_map, canonical_basis, compose, map_from_function
from preserverlab.linalg.sampling import random_isometry, random_projection, random_unitary
from preserverlab.models.enums import PreserverTag
from preserverlab.models.herm import HermMap
from preserverlab.services.construction_service import (
    make_congruence,
    make_constant,
    make_trace_complement,
)
from preserverlab.services.rank_k_service import (
    classify_rank_k,
    probe_residual,
    recover_congruence,
    verify_preserves,
)


def _noisy_identity(n: int, scale: float, seed: int) -> HermMap:
    basis = canonical_basis(n)
    noise = np.random.default_rng(seed).standard_normal((basis.count, basis.count))
    return HermMap(domain=basis, codomain=basis, matrix=np.eye(basis.count) + scale * noise)


# ============================================================================
# Verification Tests
# ============================================================================


class TestVerifyPreserves:
    """Tests for verify_preserves."""

    def test_congruence_accepted(self, congruence_map):
        """Test a congruence preserves rank-1 projections with image rank 1."""
        report = verify_preserves(congruence_map, 1, samples=20, seed=1)

        assert report.ok is True
        assert report.m == 1
        assert report.ranks == (1,)
        assert report.samples == 20

    def test_noise_rejected_early(self):
        """Test a perturbed identity fails on the first sample."""
        report = verify_preserves(_noisy_identity(3, 0.01, 5), 1, samples=20, seed=1)

        assert report.ok is False
        assert report.m is None
        assert report.samples == 1
        assert report.ranks == ()

    def test_deterministic(self, complement_map):
        """Test the same seed gives the same residual."""
        first = verify_preserves(complement_map, 2, samples=10, seed=42)
        second = verify_preserves(complement_map, 2, samples=10, seed=42)

        assert first == second

    @pytest.mark.parametrize("k", [0, 3])
    def test_rank_out_of_range(self, congruence_map, k):
        """Test k outside 1 <= k < n raises BadParameter."""
        with pytest.raises(BadParameter):
            verify_preserves(congruence_map, k)

    def test_rejects_traceless_domain(self):
        """Test a map on traceless matrices is not a rank-k preserver candidate."""
        basis = canonical_basis(2, traceless=True)
        f = map_from_function(basis, basis, lambda a: a)

        with pytest.raises(BadParameter):
            verify_preserves(f, 1)


# ============================================================================
# Congruence Recovery Tests
# ============================================================================


class TestRecoverCongruence:
    """Tests for recover_congruence and probe_residual."""

    @pytest.mark.parametrize("conj", [False, True])
    def test_recovers_flag_and_map(self, rng, conj):
        """Test U and the conjugation flag reproduce the congruence."""
        u = random_isometry(rng, 4, 3)
        f = make_congruence(u, conj=conj)
        recovered, flag = recover_congruence(f)
        a = random_projection(rng, 3, 1)

        assert flag is conj
        model = recovered @ (a.conj() if conj else a) @ recovered.conj().T
        assert max_abs(apply_map(f, a) - model) <= 1e-10

    def test_probe_residual_zero_for_exact_model(self, congruence_map):
        """Test the probe residual vanishes for the map itself."""
        residual = probe_residual(congruence_map, lambda a: apply_map(congruence_map, a), 1, samples=5, seed=1)

        assert residual == 0.0


# ============================================================================
# Classification Tests
# ============================================================================


class TestClassifyRankK:
    """Tests for classify_rank_k."""

    @pytest.mark.parametrize("conj", [False, True])
    def test_congruence(self, rng, conj):
        """Test a congruence is classified with its conjugation flag."""
        u = random_isometry(rng, 6, 4)
        result = classify_rank_k(make_congruence(u, conj=conj), 2, samples=20, seed=3)

        assert result.tag == PreserverTag.CONGRUENCE
        assert result.conj is conj
        assert result.residual <= 1e-8

    def test_complemented_congruence(self, complement_map):
        """Test L_2 on H_5 is a complemented congruence."""
        result = classify_rank_k(complement_map, 2, samples=20, seed=3)

        assert result.tag == PreserverTag.COMPLEMENTED_CONGRUENCE
        assert result.residual <= 1e-8

    def test_complemented_with_unitary(self, rng):
        """Test U L_2(A) U* on H_4 (image rank equal to k) is complemented."""
        f = compose(make_congruence(random_unitary(rng, 4)), make_trace_complement(2, 4))
        result = classify_rank_k(f, 2, samples=20, seed=3)

        assert result.tag == PreserverTag.COMPLEMENTED_CONGRUENCE

    def test_constant(self, rng):
        """Test (tr A / k) P0 is classified as constant with P0 recovered."""
        p0 = random_projection(rng, 3, 2)
        result = classify_rank_k(make_constant(p0, 4, 2), 2, samples=20, seed=3)

        assert result.tag == PreserverTag.CONSTANT
        assert max_abs(result.p0 - p0) <= 1e-10

    def test_expected_rank_mismatch(self, complement_map):
        """Test a declared image rank that disagrees gives not_a_preserver."""
        result = classify_rank_k(complement_map, 2, m=2, samples=10, seed=3)

        assert result.tag == PreserverTag.NOT_A_PRESERVER
        assert "expected 2" in result.reason

    def test_negative_control(self):
        """Test a perturbed identity is rejected."""
        result = classify_rank_k(_noisy_identity(3, 0.01, 9), 1, samples=20, seed=3)

        assert result.tag == PreserverTag.NOT_A_PRESERVER
        assert result.is_preserver is False
