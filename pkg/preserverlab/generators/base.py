"""Base interface for example-map generators."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Any, Optional, Union

import numpy as np

from preserverlab.linalg.sampling import Seed
from preserverlab.models.classification import VerificationReport
from preserverlab.models.herm import HermMap, RealLinearMatMap
from preserverlab.services.construction_service import verify_unitary_images
from preserverlab.services.rank_k_service import verify_preserves

GeneratedMap = Union[HermMap, RealLinearMatMap]


@dataclass(frozen=True)
class Instance:
    """A generated map and the image property it must satisfy."""

    map: GeneratedMap
    k: Optional[int] = None
    image_rank: Optional[int] = None

    @property
    def unitary_valued(self) -> bool:
        return self.k is None

    @classmethod
    def preserver(cls, f: HermMap, k: int, image_rank: int) -> "Instance":
        """Create a rank-k projection preserver with known image rank."""
        return cls(map=f, k=k, image_rank=image_rank)

    @classmethod
    def unitary(cls, f: RealLinearMatMap) -> "Instance":
        """Create a map sending unit inputs (vectors, unitaries, involutions) to unitaries."""
        return cls(map=f)


class BaseGenerator(ABC):
    """Base class for all registered example maps."""

    name: str = "base"
    description: str = ""

    @abstractmethod
    def build(self, params: dict[str, Any]) -> Instance:
        """
        Build the map from explicit parameters.

        Args:
            params: Generator-specific parameters; matrices as nested lists or arrays

        Returns:
            Instance carrying the map and its expected image property
        """
        pass

    @abstractmethod
    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        """Draw a desk-scale parameter set for randomized checks."""
        pass

    def verify(
        self,
        instance: Instance,
        samples: Optional[int] = None,
        seed: Seed = None,
    ) -> VerificationReport:
        """
        Check the image property on random domain samples.

        Override in subclasses whose maps need a different check.
        """
        if instance.unitary_valued:
            assert isinstance(instance.map, RealLinearMatMap)
            return verify_unitary_images(instance.map, samples=samples, seed=seed)
        assert isinstance(instance.map, HermMap) and instance.k is not None
        report = verify_preserves(instance.map, instance.k, samples=samples, seed=seed)
        if report.ok and instance.image_rank is not None and report.m != instance.image_rank:
            return replace(
                report,
                ok=False,
                reason=f"image rank {report.m} differs from expected {instance.image_rank}",
            )
        return report
