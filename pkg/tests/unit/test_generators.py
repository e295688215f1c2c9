"""Unit tests for the example-map generator registry."""

import numpy as np
import pytest

from preserverlab.core.exceptions import BadParameter
from preserverlab.generators.base import BaseGenerator, Instance
from preserverlab.generators.builtin import (
    CliffordEmbeddingGenerator,
    ConstantGenerator,
    DilationGenerator,
    TraceComplementGenerator,
)
from preserverlab.generators.factory import get_generator, get_registered_generators
from preserverlab.models.herm import HermMap, RealLinearMatMap

EXPECTED_GENERATORS = [
    "complement",
    "clifford",
    "congruence",
    "tensor",
    "pair",
    "constant",
    "dilation",
    "clifford-block",
    "vector-eval",
    "rotation",
]


# ============================================================================
# Registry Tests
# ============================================================================


class TestGeneratorFactory:
    """Tests for the generator registry."""

    def test_get_registered_generators(self):
        """Test all built-in generators are registered in order."""
        assert get_registered_generators() == EXPECTED_GENERATORS

    def test_get_generator_complement(self):
        """Test getting the trace complement generator."""
        generator = get_generator("complement")

        assert isinstance(generator, TraceComplementGenerator)
        assert generator.name == "complement"

    def test_get_generator_clifford(self):
        """Test getting the Clifford embedding generator."""
        assert isinstance(get_generator("clifford"), CliffordEmbeddingGenerator)

    def test_get_generator_unknown(self):
        """Test an unknown name raises BadParameter listing the choices."""
        with pytest.raises(BadParameter) as exc_info:
            get_generator("unknown")

        assert "complement" in exc_info.value.message

    @pytest.mark.parametrize("name", EXPECTED_GENERATORS)
    def test_generators_have_description(self, name):
        """Test every generator carries a description."""
        generator = get_generator(name)

        assert isinstance(generator, BaseGenerator)
        assert generator.description


# ============================================================================
# Build and Verify Tests
# ============================================================================


class TestGeneratorInstances:
    """Tests for building and verifying generated maps."""

    @pytest.mark.parametrize("name", EXPECTED_GENERATORS)
    def test_random_instance_verifies(self, name):
        """Test a random parameter draw builds a map that passes its own check."""
        generator = get_generator(name)
        rng = np.random.default_rng([17, EXPECTED_GENERATORS.index(name)])
        instance = generator.build(generator.random_params(rng))
        report = generator.verify(instance, samples=15, seed=3)

        assert report.ok is True, report.reason
        assert report.worst_residual <= 1e-9

    def test_complement_instance(self):
        """Test explicit parameters give a preserver with the right image rank."""
        instance = get_generator("complement").build({"k": 2, "m": 5})

        assert isinstance(instance.map, HermMap)
        assert instance.k == 2
        assert instance.image_rank == 3
        assert instance.unitary_valued is False

    def test_rotation_instance_is_unitary_valued(self):
        """Test unitary-valued generators mark their instance accordingly."""
        instance = get_generator("rotation").build({"k": 1, "phi": 0.5})

        assert isinstance(instance.map, RealLinearMatMap)
        assert instance.unitary_valued is True

    def test_constant_rank_from_projection(self):
        """Test the constant generator reads the image rank from P0."""
        p0 = np.diag([1.0, 1.0, 0.0])
        instance = ConstantGenerator().build({"p0": p0, "n": 3, "k": 1})

        assert instance.image_rank == 2

    def test_missing_parameter(self):
        """Test a missing required parameter raises BadParameter."""
        with pytest.raises(BadParameter) as exc_info:
            get_generator("pair").build({"n": 3, "k": 1})

        assert exc_info.value.details["name"] == "p0"

    def test_dilation_rejects_foreign_tau(self):
        """Test a tau that is not a real-linear map table is rejected."""
        with pytest.raises(BadParameter):
            DilationGenerator().build({"k": 1, "t": 0.5, "tau": "rotation"})

    def test_wrong_expected_rank_fails_verification(self):
        """Test verification flags an image rank different from the declared one."""
        instance = get_generator("complement").build({"k": 1, "m": 3})
        wrong = Instance.preserver(instance.map, 1, 1)
        report = get_generator("complement").verify(wrong, samples=5, seed=1)

        assert report.ok is False
        assert "differs" in report.reason
