"""Domain types."""

from preserverlab.models.classification import (
    CollisionWitness,
    DecompositionCheck,
    HalfRankDecomposition,
    PreserverClass,
    SearchReport,
    UnitaryPairDecomposition,
    VerificationReport,
)
from preserverlab.models.enums import DomainKind, OutputFormat, PreserverTag
from preserverlab.models.geometry import (
    AngleBlock,
    BlendDescription,
    BruteForceVerdict,
    Subspace,
    TwoProjectionForm,
)
from preserverlab.models.herm import HermBasis, HermMap, HermVec, RealLinearMatMap
from preserverlab.models.matrices import ComplexMatrix, EigDecomposition, Svd
from preserverlab.models.report import PropertyCheck, SelfTestReport

__all__ = [
    "AngleBlock",
    "BlendDescription",
    "BruteForceVerdict",
    "CollisionWitness",
    "ComplexMatrix",
    "DecompositionCheck",
    "DomainKind",
    "EigDecomposition",
    "HalfRankDecomposition",
    "HermBasis",
    "HermMap",
    "HermVec",
    "OutputFormat",
    "PreserverClass",
    "PreserverTag",
    "PropertyCheck",
    "RealLinearMatMap",
    "SearchReport",
    "SelfTestReport",
    "Subspace",
    "Svd",
    "TwoProjectionForm",
    "UnitaryPairDecomposition",
    "VerificationReport",
]
