"""Unit tests for the example preserver maps and unitary-valued maps."""

import math

import numpy as np
import pytest

from preserverlab.core.exceptions import (
    BadParameter,
    DimensionMismatch,
    NotIsometry,
    NotProjection,
    SizeMismatch,
    TauNotAdmissible,
)
from preserverlab.linalg.complex_linalg import is_projection, max_abs, unitary_defect
from preserverlab.linalg.herm_space import apply_map
from preserverlab.linalg.real_coords import apply_real, tabulate
from preserverlab.linalg.sampling import (
    complex_gaussian,
    random_isometry,
    random_projection,
    random_unit_vector,
)
from preserverlab.models.enums import DomainKind
from preserverlab.services.construction_service import (
    clifford_embed,
    find_collision,
    make_clifford_block_map,
    make_clifford_embedding,
    make_congruence,
    make_constant,
    make_dilation,
    make_rotation_triple,
    make_rotation_unitary_map,
    make_tensor,
    make_tensor_pair,
    make_trace_complement,
    make_vector_eval,
    preserves_singular_values,
    rotation_family_defect,
    rotation_unitarity_defect,
    verify_admissible,
    verify_unitary_images,
)
from preserverlab.services.rank_k_service import verify_preserves


# ============================================================================
# Congruence and Trace Complement Tests
# ============================================================================


class TestCongruence:
    """Tests for make_congruence."""

    def test_applies_isometry(self, rng):
        """Test A -> U A U* on a random hermitian input."""
        u = random_isometry(rng, 4, 2)
        f = make_congruence(u)
        a = np.array([[1.0, 2j], [-2j, 3.0]])

        assert f.n_in == 2 and f.n_out == 4
        assert max_abs(apply_map(f, a) - u @ a @ u.conj().T) <= 1e-13

    def test_conjugate_variant(self, rng):
        """Test the conjugate congruence applies U A-bar U*."""
        u = random_isometry(rng, 3, 2)
        a = np.array([[0.0, 1j], [-1j, 0.0]])

        assert max_abs(apply_map(make_congruence(u, conj=True), a) - u @ a.conj() @ u.conj().T) <= 1e-13

    def test_rejects_non_isometry(self):
        """Test a non-isometry raises NotIsometry."""
        with pytest.raises(NotIsometry):
            make_congruence(2.0 * np.eye(2))

    def test_rejects_wrong_column_count(self, rng):
        """Test a declared domain size must match the columns."""
        with pytest.raises(DimensionMismatch):
            make_congruence(random_isometry(rng, 3, 2), n=3)


class TestTraceComplement:
    """Tests for make_trace_complement."""

    def test_rank_k_to_rank_m_minus_k(self, complement_map, rng):
        """Test L_2 sends rank-2 projections in H_5 to rank-3 projections."""
        image = apply_map(complement_map, random_projection(rng, 5, 2))

        assert is_projection(image, 1e-10) == (True, 3)

    def test_verify_reports_image_rank(self, complement_map):
        """Test randomized verification accepts with m = 3."""
        report = verify_preserves(complement_map, 2, samples=20, seed=7)

        assert report.ok is True
        assert report.m == 3

    @pytest.mark.parametrize("k,m", [(0, 3), (3, 3), (4, 3)])
    def test_rejects_bad_rank(self, k, m):
        """Test k outside 1 <= k < m raises BadParameter."""
        with pytest.raises(BadParameter):
            make_trace_complement(k, m)


# ============================================================================
# Clifford Embedding Tests
# ============================================================================


class TestClifford:
    """Tests for clifford_embed and the maps built on it."""

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_norm_identity(self, rng, k):
        """Test rho(v)* rho(v) = |v|^2 I."""
        v = complex_gaussian(rng, k, 1)[:, 0]
        r = clifford_embed(v)
        size = 2 ** (k - 1)

        assert r.shape == (size, size)
        assert max_abs(r.conj().T @ r - np.vdot(v, v).real * np.eye(size)) <= 1e-12

    def test_rho_one_is_scalar(self):
        """Test rho_1(z) is the 1x1 matrix z."""
        assert np.allclose(clifford_embed([2 - 1j]), [[2 - 1j]])

    def test_empty_vector(self):
        """Test an empty vector raises BadParameter."""
        with pytest.raises(BadParameter):
            clifford_embed([])

    def test_embedding_sends_unit_vectors_to_unitaries(self):
        """Test the tabulated embedding of C^3 is unitary-valued."""
        f = make_clifford_embedding(3)
        report = verify_unitary_images(f, samples=20, seed=3)

        assert f.n_out == 4
        assert report.ok is True

    def test_block_map_preserves(self):
        """Test the block map on H_3 sends rank-1 projections to rank-2 projections."""
        report = verify_preserves(make_clifford_block_map(3, 1), 1, samples=20, seed=5)

        assert report.ok is True
        assert report.m == 2

    def test_block_map_not_injective(self):
        """Test the block map on H_3 identifies two distinct rank-1 projections."""
        witness = find_collision(make_clifford_block_map(3, 1), 1, trials=50, seed=11)

        assert witness.found is True
        assert max_abs(witness.first - witness.second) > 1e-6

    def test_block_map_bad_parameters(self):
        """Test n < 2 or k >= n raise BadParameter."""
        with pytest.raises(BadParameter):
            make_clifford_block_map(1, 1)
        with pytest.raises(BadParameter):
            make_clifford_block_map(3, 3)

    def test_vector_eval_unitary_valued(self, rng):
        """Test A -> rho(A v0) sends unitaries to unitaries."""
        f = make_vector_eval(random_unit_vector(rng, 3))

        assert verify_unitary_images(f, samples=20, seed=2).ok is True

    def test_vector_eval_rejects_non_unit(self):
        """Test a non-unit v0 raises BadParameter."""
        with pytest.raises(BadParameter):
            make_vector_eval(np.array([1.0, 1.0]))


# ============================================================================
# Rotation Map and Dilation Tests
# ============================================================================


class TestRotationAndDilation:
    """Tests for the rotation unitary map and the dilation construction."""

    def test_rotation_map_admissible(self):
        """Test traceless involutions go to unitaries of size 4k^2."""
        tau = make_rotation_unitary_map(1, 0.7)
        report = verify_admissible(tau, samples=30, seed=4)

        assert tau.n_out == 4
        assert report.ok is True
        assert report.m == 4

    def test_rotation_map_at_zero_preserves_singular_values(self):
        """Test phi = 0 gives A (x) I whose singular values repeat those of A."""
        assert preserves_singular_values(make_rotation_unitary_map(1, 0.0), samples=10, seed=1) <= 1e-10

    def test_non_admissible_map_rejected(self):
        """Test A -> 2A fails admissibility."""
        tau = tabulate(DomainKind.HERM0, 2, 2, lambda a: 2.0 * a)
        report = verify_admissible(tau, samples=5, seed=1)

        assert report.ok is False
        assert report.samples == 1

    def test_dilation_preserves_with_rank_m(self):
        """Test the dilation sends rank-1 projections in H_2 to rank-4 projections."""
        f = make_dilation(1, 0.7, make_rotation_unitary_map(1, 0.3), samples=20, seed=9)
        report = verify_preserves(f, 1, samples=20, seed=9)

        assert f.n_out == 8
        assert report.ok is True
        assert report.m == 4

    def test_dilation_block_formula(self):
        """Test the (1,1) block is t (tr A / k) I."""
        tau = make_rotation_unitary_map(1, 0.3)
        f = make_dilation(1, 0.25, tau, verify=False)
        image = apply_map(f, np.eye(2))

        assert np.allclose(image[:4, :4], 0.25 * 2.0 * np.eye(4))
        assert np.allclose(image[:4, 4:], 0.0)

    def test_dilation_rejects_bad_weight(self):
        """Test t outside [0, 1] raises BadParameter."""
        with pytest.raises(BadParameter):
            make_dilation(1, 1.2, make_rotation_unitary_map(1, 0.0))

    def test_dilation_rejects_non_admissible(self):
        """Test a map sending involutions to non-unitaries raises TauNotAdmissible."""
        tau = tabulate(DomainKind.HERM0, 2, 2, lambda a: 2.0 * a)

        with pytest.raises(TauNotAdmissible):
            make_dilation(1, 0.5, tau, samples=5, seed=1)

    def test_dilation_rejects_wrong_domain(self):
        """Test a map on H0_4 cannot dilate a map on H_2."""
        with pytest.raises(DimensionMismatch):
            make_dilation(1, 0.5, make_rotation_unitary_map(2, 0.0))

    def test_rotation_triple(self):
        """Test cos phi X + sin phi Y + Z is unitary for all phi."""
        x, y, z = make_rotation_triple(2, seed=6)

        assert rotation_unitarity_defect(x, y, z) <= 1e-10
        assert rotation_family_defect(x, y, z) <= 1e-10

    def test_rotation_defect_detects_failure(self):
        """Test X = Y = I, Z = 0 violates the identities."""
        eye = np.eye(2)

        assert rotation_unitarity_defect(eye, eye, 0 * eye) > 0.1
        assert rotation_family_defect(eye, eye, 0 * eye, angles=[math.pi / 4]) > 0.1


# ============================================================================
# Tensor and Constant Tests
# ============================================================================


class TestTensorMaps:
    """Tests for make_tensor, make_tensor_pair and make_constant."""

    def test_tensor_rank(self, rng):
        """Test A (x) P0 multiplies the rank by rk P0."""
        p0 = random_projection(rng, 3, 2)
        image = apply_map(make_tensor(p0, 2), random_projection(rng, 2, 1))

        assert is_projection(image, 1e-10) == (True, 2)

    def test_pair_rank(self, rng):
        """Test psi has image rank k rk P0 + (n - k) rk Q0."""
        p0, q0 = random_projection(rng, 3, 1), random_projection(rng, 3, 2)
        f = make_tensor_pair(p0, q0, 3, 1)
        report = verify_preserves(f, 1, samples=20, seed=8)

        assert report.ok is True
        assert report.m == 1 * 1 + 2 * 2

    def test_pair_size_mismatch(self, rng):
        """Test P0 and Q0 of different sizes raise SizeMismatch."""
        with pytest.raises(SizeMismatch):
            make_tensor_pair(random_projection(rng, 2, 1), random_projection(rng, 3, 1), 3, 1)

    def test_pair_rejects_non_projection(self):
        """Test a non-projection P0 raises NotProjection."""
        with pytest.raises(NotProjection):
            make_tensor_pair(2.0 * np.eye(2), np.eye(2), 3, 1)

    def test_constant(self, rng):
        """Test every rank-k projection goes to P0."""
        p0 = random_projection(rng, 4, 2)
        f = make_constant(p0, 3, 2)

        assert max_abs(apply_map(f, random_projection(rng, 3, 2)) - p0) <= 1e-12


# ============================================================================
# Unitary Image and Collision Tests
# ============================================================================


class TestUnitaryImages:
    """Tests for verify_unitary_images and find_collision."""

    def test_identity_on_matrices(self):
        """Test the identity on M_2 is unitary-valued."""
        report = verify_unitary_images(tabulate(DomainKind.MATRIX, 2, 2, lambda a: a), samples=10, seed=1)

        assert report.ok is True
        assert report.worst_residual <= 1e-12

    def test_transpose_on_hermitian_unitaries(self):
        """Test the transpose on H_3 sends hermitian unitaries to unitaries."""
        report = verify_unitary_images(tabulate(DomainKind.HERM, 3, 3, lambda a: a.T), samples=10, seed=1)

        assert report.ok is True

    def test_scaled_map_rejected(self):
        """Test 2A is not unitary."""
        report = verify_unitary_images(tabulate(DomainKind.MATRIX, 2, 2, lambda a: 2.0 * a), samples=5, seed=1)

        assert report.ok is False
        assert report.reason is not None

    def test_no_collision_for_congruence(self, congruence_map):
        """Test an injective congruence has no colliding projections."""
        witness = find_collision(congruence_map, 1, trials=20, seed=1)

        assert witness.found is False
        assert witness.trials == 3 + 20

    def test_unitary_defect_of_images(self, rng):
        """Test rho of a unit vector has zero unitary defect."""
        f = make_clifford_embedding(2)

        assert unitary_defect(apply_real(f, random_unit_vector(rng, 2))) <= 1e-13
