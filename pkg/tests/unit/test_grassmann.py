"""Unit tests for principal angles, the two-projection form and blend sets."""

import logging
import math

import numpy as np
import pytest

from preserverlab.core.exceptions import (
    AmbientMismatch,
    BadParameter,
    DimensionMismatch,
    EmptySet,
    NotIsometry,
    NotProjection,
)
from preserverlab.linalg.complex_linalg import is_projection, max_abs
from preserverlab.linalg.sampling import random_unitary
from preserverlab.services.grassmann_service import (
    blend_bound,
    blend_brute_force,
    blend_exists,
    blend_weights,
    form_blocks,
    gap,
    is_blend_member,
    make_subspace,
    principal_angles,
    projector,
    random_subspace,
    reconstruct_projections,
    sample_blend,
    span,
    two_projection_form,
)
from tests.conftest import line


# ============================================================================
# Subspace Tests
# ============================================================================


class TestSubspaces:
    """Tests for make_subspace and span."""

    def test_make_subspace_accepts_vector(self):
        """Test a unit vector becomes a line."""
        x = make_subspace(np.array([0.0, 1.0]))

        assert x.ambient == 2
        assert x.dim == 1

    def test_make_subspace_rejects_non_orthonormal(self):
        """Test non-orthonormal columns raise NotIsometry."""
        with pytest.raises(NotIsometry):
            make_subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_span_drops_dependent_columns(self):
        """Test the span of dependent vectors has their rank."""
        x = span(np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]]))

        assert x.dim == 1
        assert max_abs(projector(x) - projector(line(1, 1, 0))) <= 1e-12


# ============================================================================
# Angle and Gap Tests
# ============================================================================


class TestAngles:
    """Tests for principal_angles and gap."""

    def test_orthogonal_lines(self, x_axis, y_axis):
        """Test orthogonal lines are at angle pi/2 with gap 1."""
        assert principal_angles(x_axis, y_axis) == pytest.approx([math.pi / 2])
        assert gap(x_axis, y_axis) == pytest.approx(1.0)

    def test_diagonal_line(self, x_axis, diagonal):
        """Test the diagonal is at angle pi/4 with gap sin(pi/4)."""
        assert principal_angles(x_axis, diagonal) == pytest.approx([math.pi / 4], abs=1e-12)
        assert gap(x_axis, diagonal) == pytest.approx(math.sin(math.pi / 4), abs=1e-12)

    def test_small_angle_accuracy(self):
        """Test a tiny angle is recovered to full relative accuracy."""
        eps = 1e-9
        angles = principal_angles(line(1, 0), line(math.cos(eps), math.sin(eps)))

        assert angles[0] == pytest.approx(eps, rel=1e-6)

    def test_count_is_min_dimension(self, rng):
        """Test there are min(dim X, dim Y) angles, ascending in [0, pi/2]."""
        x, y = random_subspace(rng, 6, 2), random_subspace(rng, 6, 3)
        angles = principal_angles(x, y)

        assert len(angles) == 2
        assert angles == sorted(angles)
        assert all(0.0 <= t <= math.pi / 2 for t in angles)

    def test_gap_for_equal_dimensions_is_largest_sine(self, rng):
        """Test d(X, Y) = sin of the largest principal angle when dims agree."""
        x, y = random_subspace(rng, 5, 2), random_subspace(rng, 5, 2)

        assert gap(x, y) == pytest.approx(math.sin(max(principal_angles(x, y))), abs=1e-10)

    def test_gap_is_one_for_unequal_dimensions(self, rng):
        """Test subspaces of different dimension are at gap 1."""
        assert gap(random_subspace(rng, 4, 1), random_subspace(rng, 4, 2)) == pytest.approx(1.0)

    def test_empty_subspace(self, x_axis):
        """Test the zero subspace has no angles."""
        zero = make_subspace(np.zeros((2, 0)))

        assert principal_angles(zero, x_axis) == []

    def test_ambient_mismatch(self, x_axis):
        """Test subspaces of different spaces raise AmbientMismatch."""
        with pytest.raises(AmbientMismatch):
            gap(x_axis, line(1, 0, 0))


# ============================================================================
# Two-Projection Form Tests
# ============================================================================


class TestTwoProjectionForm:
    """Tests for two_projection_form and its reconstruction."""

    def test_single_block(self, x_axis, diagonal):
        """Test two lines at angle pi/4 give one block and nothing else."""
        form = two_projection_form(x_axis, diagonal)

        assert (form.m, form.p, form.q) == (0, 0, 0)
        assert len(form.blocks) == 1
        assert form.blocks[0].angle == pytest.approx(math.pi / 4)
        assert form.blocks[0].multiplicity == 1

    def test_orthogonal_lines_are_exclusive(self, x_axis, y_axis):
        """Test orthogonal lines land in the p and q parts."""
        form = two_projection_form(x_axis, y_axis)

        assert (form.m, form.p, form.q, form.blocks) == (0, 1, 1, ())

    def test_equal_subspaces(self, rng):
        """Test X = Y is all intersection."""
        x = random_subspace(rng, 4, 2)
        form = two_projection_form(x, x)

        assert form.m == 2
        assert form.dim == 2

    def test_random_reconstruction(self, rng):
        """Test the canonical form rebuilds both projections and has an orthonormal basis."""
        x, y = random_subspace(rng, 7, 3), random_subspace(rng, 7, 3)
        form = two_projection_form(x, y)
        px, py = reconstruct_projections(form)

        assert form.dim == form.basis.shape[1] == 6
        assert max_abs(form.basis.conj().T @ form.basis - np.eye(6)) <= 1e-10
        assert max_abs(px - projector(x)) <= 1e-9
        assert max_abs(py - projector(y)) <= 1e-9

    def test_angles_strictly_decreasing(self, rng):
        """Test block angles are strictly decreasing and inside (0, pi/2)."""
        form = two_projection_form(random_subspace(rng, 8, 3), random_subspace(rng, 8, 3))
        angles = [b.angle for b in form.blocks]

        assert all(a > b for a, b in zip(angles, angles[1:]))
        assert all(0.0 < a < math.pi / 2 for a in angles)

    def test_multiplicity_merges_equal_angles(self, rng):
        """Test two pairs at the same angle form one block of multiplicity 2."""
        c, s = math.cos(0.4), math.sin(0.4)
        basis = random_unitary(rng, 4)
        x = make_subspace(basis[:, [0, 1]])
        y = make_subspace(basis @ np.array([[c, 0], [0, c], [s, 0], [0, s]]))
        form = two_projection_form(x, y)

        assert len(form.blocks) == 1
        assert form.blocks[0].multiplicity == 2
        assert form.blocks[0].angle == pytest.approx(0.4)

    def test_mixed_intersections(self):
        """Test a shared direction and an exclusive direction are both detected."""
        x = make_subspace(np.eye(4)[:, [0, 1]])
        y = make_subspace(np.eye(4)[:, [0, 2]])
        form = two_projection_form(x, y)

        assert (form.m, form.p, form.q) == (1, 1, 1)

    def test_form_blocks_are_projections(self, x_axis, diagonal):
        """Test the block matrices of P_X and P_Y are projections."""
        bx, by = form_blocks(two_projection_form(x_axis, diagonal))

        assert is_projection(bx, 1e-12) == (True, 1)
        assert is_projection(by, 1e-12) == (True, 1)


# ============================================================================
# Blend Set Tests
# ============================================================================


class TestBlendSets:
    """Tests for blend existence, weights, membership and sampling."""

    def test_bound(self):
        """Test the gap bound sqrt(2a - 1)/a."""
        assert blend_bound(1.0) == pytest.approx(1.0)
        assert blend_bound(2.0) == pytest.approx(math.sqrt(3.0) / 2.0)

    def test_orthogonal_lines_need_a_equal_one(self, x_axis, y_axis):
        """Test orthogonal lines admit a blend only for a = 1."""
        assert blend_exists(x_axis, y_axis, 1.0) is True
        assert blend_exists(x_axis, y_axis, 2.0) is False

    def test_diagonal_existence_threshold(self, x_axis, diagonal):
        """Test lines at pi/4 admit a = 2 but not a = 5."""
        assert blend_exists(x_axis, diagonal, 2.0) is True
        assert blend_exists(x_axis, diagonal, 5.0) is False

    def test_weights_agree_with_gap_criterion(self, x_axis, diagonal):
        """Test weights are admissible exactly where the gap criterion holds."""
        form = two_projection_form(x_axis, diagonal)
        inside = blend_weights(form, 2.0)
        outside = blend_weights(form, 5.0)

        assert inside.admissible is True
        assert 0.0 <= inside.t[0] <= 1.0
        assert outside.admissible is False
        assert outside.flagged == (0,)

    def test_weight_for_a_equal_one(self, x_axis, diagonal):
        """Test a = 1 gives t = (1 + cos phi)/2."""
        description = blend_weights(two_projection_form(x_axis, diagonal), 1.0)

        assert description.t[0] == pytest.approx((1.0 + math.cos(math.pi / 4)) / 2.0)

    def test_rejects_small_weight(self, x_axis, diagonal):
        """Test a <= 1/2 raises BadParameter."""
        with pytest.raises(BadParameter):
            blend_exists(x_axis, diagonal, 0.5)

    def test_rejects_unequal_dimensions(self, rng):
        """Test X and Y of different dimension raise DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            blend_exists(random_subspace(rng, 3, 1), random_subspace(rng, 3, 2), 1.0)

    @pytest.mark.parametrize("a", [0.75, 1.0, 2.0])
    def test_sample_is_member(self, rng, a):
        """Test a sampled Z satisfies the membership test."""
        x, y = random_subspace(rng, 6, 2), random_subspace(rng, 6, 2)
        if not blend_exists(x, y, a):
            pytest.skip("blend set empty for this draw")
        z = sample_blend(x, y, a)

        assert z.dim == 2
        assert is_blend_member(x, y, z, a) is True

    def test_sample_with_block_unitaries(self, rng, x_axis, diagonal):
        """Test explicit block unitaries produce a member."""
        z = sample_blend(x_axis, diagonal, 2.0, unitaries=[np.array([[1j]])])

        assert is_blend_member(x_axis, diagonal, z, 2.0) is True

    def test_sample_with_exclusive_projection(self, x_axis, y_axis):
        """Test Q = diag(0, 1) on orthogonal lines gives Z = Y."""
        z = sample_blend(x_axis, y_axis, 1.0, q_choice=np.array([[0.0, 0.0], [0.0, 1.0]]))

        assert is_blend_member(x_axis, y_axis, z, 1.0) is True

    def test_sample_full_q_at_unit_weight_is_quiet(self, caplog, x_axis, y_axis):
        """Test a rank-2 Q at a = 1 gives dim Z = 2 without a warning."""
        with caplog.at_level(logging.DEBUG, logger="preserverlab.services.grassmann_service"):
            z = sample_blend(x_axis, y_axis, 1.0, q_choice=np.eye(2))

        assert z.dim == 2
        assert is_blend_member(x_axis, y_axis, z, 1.0) is True
        assert not [r for r in caplog.records if r.levelno >= logging.WARNING]
        assert any("differs from dim X" in r.getMessage() for r in caplog.records)

    def test_sample_rejects_bad_q(self, x_axis, y_axis):
        """Test a non-projection Q raises NotProjection."""
        with pytest.raises(NotProjection):
            sample_blend(x_axis, y_axis, 1.0, q_choice=np.array([[2.0, 0.0], [0.0, 0.0]]))

    def test_sample_empty_set(self, x_axis, y_axis):
        """Test sampling an empty blend set raises EmptySet."""
        with pytest.raises(EmptySet):
            sample_blend(x_axis, y_axis, 2.0)

    def test_member_rejects_wrong_z(self, x_axis, diagonal, y_axis):
        """Test a Z outside the blend set is rejected."""
        assert is_blend_member(x_axis, diagonal, y_axis, 2.0) is False

    def test_member_any_weight(self, x_axis):
        """Test membership is defined for a = 1/2 too (X = Y = Z)."""
        assert is_blend_member(x_axis, x_axis, x_axis, 0.5) is True


# ============================================================================
# Brute-Force Tests
# ============================================================================


class TestBruteForce:
    """Tests for blend_brute_force on lines."""

    def test_agrees_inside(self, x_axis, diagonal):
        """Test the Bloch search finds a member when the set is nonempty."""
        verdict = blend_brute_force(x_axis, diagonal, 2.0, grid=40)

        assert verdict.exists is True
        assert verdict.min_residual <= 1e-6

    def test_agrees_outside(self, x_axis, diagonal):
        """Test the Bloch search finds nothing when the set is empty."""
        verdict = blend_brute_force(x_axis, diagonal, 5.0, grid=40)

        assert verdict.exists is False
        assert verdict.grid_points == 1600

    def test_equal_lines(self, x_axis):
        """Test X = Y is trivially nonempty."""
        assert blend_brute_force(x_axis, x_axis, 3.0).exists is True

    def test_rejects_planes(self, rng):
        """Test subspaces of dimension 2 raise DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            blend_brute_force(random_subspace(rng, 4, 2), random_subspace(rng, 4, 2), 1.0)
