"""Unit tests for the Jacobi kernels and matrix predicates."""

import numpy as np
import pytest

from preserverlab.core.config import settings
from preserverlab.core.exceptions import DimensionMismatch, NoConvergence, NotHermitian
from preserverlab.linalg.complex_linalg import (
    direct_sum,
    herm_eig,
    is_projection,
    is_unitary,
    isometry_defect,
    kernel_fault,
    kron,
    max_abs,
    orthonormal_completion,
    polar,
    projection_defect,
    range_frame,
    svd,
    unitary_defect,
)
from preserverlab.linalg.sampling import (
    complex_gaussian,
    random_hermitian,
    random_isometry,
    random_projection,
    random_unitary,
)


def _with_spectrum(rng: np.random.Generator, values: list[float]) -> np.ndarray:
    u = random_unitary(rng, len(values))
    a = (u * np.asarray(values)) @ u.conj().T
    return (a + a.conj().T) / 2.0


def _off_diagonal(a: np.ndarray) -> float:
    return max_abs(a - np.diag(np.diag(a)))


# ============================================================================
# Hermitian Eigendecomposition Tests
# ============================================================================


class TestHermEig:
    """Tests for herm_eig."""

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
    def test_reconstructs_random_hermitian(self, rng, n):
        """Test V diag(w) V* reproduces the input."""
        a = random_hermitian(rng, n)
        dec = herm_eig(a)

        assert max_abs(dec.reconstruct() - a) <= 1e-10 * max(1.0, max_abs(a))
        assert max_abs(dec.vectors.conj().T @ dec.vectors - np.eye(n)) <= 1e-10

    def test_values_ascending(self, rng):
        """Test eigenvalues come back in ascending order."""
        dec = herm_eig(random_hermitian(rng, 6))

        assert np.all(np.diff(dec.values) >= 0.0)

    def test_values_match_numpy(self, rng):
        """Test eigenvalues agree with LAPACK."""
        a = random_hermitian(rng, 7)

        assert np.allclose(herm_eig(a).values, np.linalg.eigvalsh(a), atol=1e-10)

    def test_diagonal_input_needs_no_sweep(self):
        """Test an already diagonal matrix converges immediately."""
        dec = herm_eig(np.diag([3.0, 1.0, 2.0]))

        assert dec.sweeps == 0
        assert np.allclose(dec.values, [1.0, 2.0, 3.0])

    def test_ties_ordered_by_leading_component(self):
        """Test equal eigenvalues are ordered by the position of their leading entry."""
        dec = herm_eig(np.eye(3))

        assert np.allclose(np.abs(dec.vectors), np.eye(3))

    def test_rejects_non_hermitian(self):
        """Test a non-hermitian matrix raises NotHermitian."""
        with pytest.raises(NotHermitian):
            herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_rectangular(self):
        """Test a rectangular matrix raises DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            herm_eig(np.zeros((2, 3)))

    def test_sweep_cap(self, rng):
        """Test exceeding the sweep cap raises NoConvergence."""
        with pytest.raises(NoConvergence):
            herm_eig(random_hermitian(rng, 6), max_sweeps=1)

    @pytest.mark.parametrize("n", [4, 8])
    def test_nearly_diagonal_large_entries(self, rng, n):
        """Test tiny couplings next to large diagonal entries are still removed."""
        a = np.diag(np.linspace(-3.0e3, 9.0e3, n)) + 1e-9 * random_hermitian(rng, n)
        dec = herm_eig(a)
        scale = float(np.linalg.norm(a))

        assert _off_diagonal(dec.vectors.conj().T @ a @ dec.vectors) <= settings.tol_eig(n) * scale
        assert max_abs(dec.reconstruct() - a) <= settings.tol_eig(n) * scale

    def test_repeated_eigenvalues(self, rng):
        """Test a spectrum with multiplicities reconstructs with an orthonormal basis."""
        a = _with_spectrum(rng, [2.0, 2.0, 2.0, -1.0, -1.0, 5.0])
        dec = herm_eig(a)

        assert np.allclose(dec.values, [-1.0, -1.0, 2.0, 2.0, 2.0, 5.0], atol=1e-10)
        assert max_abs(dec.reconstruct() - a) <= 1e-10
        assert max_abs(dec.vectors.conj().T @ dec.vectors - np.eye(6)) <= 1e-10

    def test_clustered_eigenvalues(self, rng):
        """Test eigenvalues 1e-9 apart are resolved."""
        values = [1.0, 1.0 + 1e-9, 1.0 + 2e-9, 4.0]
        dec = herm_eig(_with_spectrum(rng, values))

        assert np.allclose(dec.values, values, rtol=0.0, atol=1e-12)

    def test_large_dynamic_range(self, rng):
        """Test eigenvalues spanning twelve orders of magnitude."""
        values = [-1e6, 1e-6, 1.0, 1e6]
        a = _with_spectrum(rng, values)
        dec = herm_eig(a)

        assert np.allclose(dec.values, values, rtol=0.0, atol=1e-7)
        assert max_abs(dec.reconstruct() - a) <= settings.tol_eig(4) * float(np.linalg.norm(a))


# ============================================================================
# Singular Value Decomposition Tests
# ============================================================================


class TestSvd:
    """Tests for svd and polar."""

    @pytest.mark.parametrize("shape", [(4, 4), (6, 3), (3, 6), (5, 1)])
    def test_reconstructs(self, rng, shape):
        """Test U diag(s) V* reproduces the input for square, tall and wide matrices."""
        a = complex_gaussian(rng, *shape)
        dec = svd(a)

        assert max_abs(dec.reconstruct() - a) <= 1e-10
        assert np.all(np.diff(dec.sigma) <= 0.0)
        assert np.allclose(dec.sigma, np.linalg.svd(a, compute_uv=False), atol=1e-10)

    def test_rank_deficient_has_orthonormal_u(self, rng):
        """Test columns for zero singular values still complete an orthonormal set."""
        a = random_projection(rng, 5, 2)
        dec = svd(a)

        assert dec.rank(1e-9) == 2
        assert max_abs(dec.u.conj().T @ dec.u - np.eye(5)) <= 1e-10

    @pytest.mark.parametrize("shape", [(5, 2), (2, 5), (3, 3)])
    def test_full_matrices_are_unitary(self, rng, shape):
        """Test full_matrices completes both factors to square unitaries."""
        a = complex_gaussian(rng, *shape)
        dec = svd(a, full_matrices=True)

        assert dec.u.shape == (shape[0], shape[0])
        assert dec.v.shape == (shape[1], shape[1])
        assert is_unitary(dec.u, 1e-10)
        assert is_unitary(dec.v, 1e-10)
        assert max_abs(dec.reconstruct() - a) <= 1e-10

    def test_zero_matrix(self):
        """Test the zero matrix has rank zero and reconstructs exactly."""
        dec = svd(np.zeros((3, 3)))

        assert dec.rank(1e-9) == 0
        assert max_abs(dec.reconstruct()) == 0.0

    def test_empty_columns(self):
        """Test a matrix without columns yields an empty decomposition."""
        dec = svd(np.zeros((3, 0)))

        assert dec.sigma.size == 0

    def test_polar(self, rng):
        """Test polar factors are unitary and positive semidefinite."""
        a = complex_gaussian(rng, 4, 4)
        unitary, positive = polar(a)

        assert is_unitary(unitary, 1e-10)
        assert np.all(np.linalg.eigvalsh(positive) >= -1e-10)
        assert max_abs(unitary @ positive - a) <= 1e-10


# ============================================================================
# Product Tests
# ============================================================================


class TestProducts:
    """Tests for kron and direct_sum."""

    def test_kron_block_layout(self):
        """Test kron uses the a_ij * b block layout."""
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.eye(2)
        out = kron(a, b)

        assert out.shape == (4, 4)
        assert np.allclose(out[2:, :2], 3.0 * np.eye(2))

    def test_direct_sum_rectangular_blocks(self):
        """Test rectangular blocks are placed along the diagonal."""
        out = direct_sum([np.ones((1, 2)), np.eye(2), np.zeros((0, 0))])

        assert out.shape == (3, 4)
        assert np.allclose(out[0, :2], 1.0)
        assert np.allclose(out[1:, 2:], np.eye(2))

    def test_kernel_fault_corrupts_kron(self):
        """Test the fault context perturbs kron and is undone afterwards."""
        with kernel_fault(1e-3):
            faulty = kron(np.eye(2), np.eye(2))
        clean = kron(np.eye(2), np.eye(2))

        assert abs(faulty[0, 0] - 1.0) == pytest.approx(1e-3)
        assert np.allclose(clean, np.eye(4))


# ============================================================================
# Predicate Tests
# ============================================================================


class TestPredicates:
    """Tests for projection, unitary and isometry predicates."""

    def test_projection_with_rank(self, rank_two_projection):
        """Test a rank-2 projection is recognized with its rank."""
        ok, rank = is_projection(rank_two_projection, 1e-9)

        assert ok is True
        assert rank == 2

    def test_non_projection(self):
        """Test 2I is not a projection and reports no rank."""
        assert is_projection(2.0 * np.eye(2), 1e-9) == (False, None)

    def test_defects_infinite_for_non_square(self):
        """Test non-square input has infinite projection and unitary defect."""
        assert projection_defect(np.zeros((2, 3))) == float("inf")
        assert unitary_defect(np.zeros((2, 3))) == float("inf")

    def test_unitary(self, rng):
        """Test a Haar unitary passes and its double fails."""
        u = random_unitary(rng, 4)

        assert is_unitary(u, 1e-10)
        assert not is_unitary(2.0 * u, 1e-10)

    def test_isometry_defect(self, rng):
        """Test a random isometry has negligible defect and a wide matrix is rejected."""
        assert isometry_defect(random_isometry(rng, 5, 2)) <= 1e-12
        assert isometry_defect(np.zeros((2, 3))) == float("inf")

    def test_range_frame_spans_range(self, rank_two_projection):
        """Test the range frame reproduces the projection."""
        q = range_frame(rank_two_projection)

        assert q.shape == (4, 2)
        assert max_abs(q @ q.conj().T - rank_two_projection) <= 1e-10

    def test_orthonormal_completion(self, rng):
        """Test completing a frame gives a unitary that keeps the frame."""
        frame = random_isometry(rng, 4, 2)
        full = orthonormal_completion(frame, 4)

        assert is_unitary(full, 1e-10)
        assert np.allclose(full[:, :2], frame)
