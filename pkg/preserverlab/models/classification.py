"""Classification and verification results."""

from dataclasses import dataclass, field
from typing import Optional

from preserverlab.models.enums import PreserverTag
from preserverlab.models.herm import HermMap, RealLinearMatMap
from preserverlab.models.matrices import ComplexMatrix


@dataclass(frozen=True)
class PreserverClass:
    """Tagged classification outcome with recovered parameters.

    Only the fields relevant to ``tag`` are set; ``residual`` is the largest
    reconstruction error over the probe set.
    """

    tag: PreserverTag
    residual: float
    u: Optional[ComplexMatrix] = field(default=None, repr=False)
    v: Optional[ComplexMatrix] = field(default=None, repr=False)
    p0: Optional[ComplexMatrix] = field(default=None, repr=False)
    q0: Optional[ComplexMatrix] = field(default=None, repr=False)
    constant_part: Optional[ComplexMatrix] = field(default=None, repr=False)
    s: Optional[int] = None
    conj: Optional[bool] = None
    n: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    reason: Optional[str] = None

    @property
    def is_preserver(self) -> bool:
        return self.tag != PreserverTag.NOT_A_PRESERVER

    @classmethod
    def constant(cls, p0: ComplexMatrix, residual: float) -> "PreserverClass":
        """Create a constant-map result A ↦ (tr A / k) P0."""
        return cls(tag=PreserverTag.CONSTANT, residual=residual, p0=p0)

    @classmethod
    def congruence(
        cls,
        u: ComplexMatrix,
        conj: bool,
        residual: float,
        complemented: bool = False,
    ) -> "PreserverClass":
        """Create a (complemented) congruence result."""
        tag = PreserverTag.COMPLEMENTED_CONGRUENCE if complemented else PreserverTag.CONGRUENCE
        return cls(tag=tag, residual=residual, u=u, conj=conj)

    @classmethod
    def dim2_tensor(
        cls,
        u: ComplexMatrix,
        p0: ComplexMatrix,
        q0: ComplexMatrix,
        residual: float,
        constant_part: Optional[ComplexMatrix] = None,
    ) -> "PreserverClass":
        """Create a result A ↦ U(A⊗P0 + (tr A·I − A)⊗Q0)U* (+ tr A·R0)."""
        return cls(
            tag=PreserverTag.DIM2_TENSOR,
            residual=residual,
            u=u,
            p0=p0,
            q0=q0,
            constant_part=constant_part,
        )

    @classmethod
    def trace_zero_unitary(
        cls, u: ComplexMatrix, s: int, conj: bool, residual: float
    ) -> "PreserverClass":
        """Create a result A ↦ s·U A U* or s·U Ā U*."""
        return cls(tag=PreserverTag.TRACE_ZERO_UNITARY_FORM, residual=residual, u=u, s=s, conj=conj)

    @classmethod
    def unitary_tensor(
        cls, u: ComplexMatrix, v: ComplexMatrix, n: int, residual: float
    ) -> "PreserverClass":
        """Create a result A ↦ U (A ⊗ I_n) V."""
        return cls(tag=PreserverTag.UNITARY_TENSOR_FORM, residual=residual, u=u, v=v, n=n)

    @classmethod
    def signed_tensor(cls, u: ComplexMatrix, p: int, q: int, residual: float) -> "PreserverClass":
        """Create a result A ↦ U ((A ⊗ I_p) ⊕ (−A ⊗ I_q)) U*."""
        return cls(tag=PreserverTag.SIGNED_TENSOR_FORM, residual=residual, u=u, p=p, q=q)

    @classmethod
    def not_a_preserver(cls, reason: str, residual: float = float("inf")) -> "PreserverClass":
        """Create a rejection."""
        return cls(tag=PreserverTag.NOT_A_PRESERVER, residual=residual, reason=reason)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of randomized preserver verification."""

    ok: bool
    m: Optional[int]
    worst_residual: float
    samples: int
    ranks: tuple[int, ...] = ()
    reason: Optional[str] = None


@dataclass(frozen=True)
class UnitaryPairDecomposition:
    """x = U(I_p ⊕ 0_q ⊕ ⊕ s_j I) V and y = U(0_p ⊕ W ⊕ ⊕ i√(1−s_j²) H_j) V."""

    u: ComplexMatrix = field(repr=False)
    v: ComplexMatrix = field(repr=False)
    p: int
    q: int
    blocks: tuple[tuple[float, int], ...]
    w: ComplexMatrix = field(repr=False)
    h: tuple[ComplexMatrix, ...] = field(repr=False)
    residual: float = 0.0


@dataclass(frozen=True)
class HalfRankDecomposition:
    """Block structure of a rank-k projection preserver on H_{2k}.

    In the columns of ``basis`` (spanning Z = ran φ(P) + ran φ(Q)) the map is
    (tr A/k) I_m ⊕ φ0(A) ⊕ ⊕_j [[t_j c I, √(t_j(1−t_j)) φ_j(B)*],
    [√(t_j(1−t_j)) φ_j(B), (1−t_j) c I]] with c = tr A / k and B = 2A − c I.
    """

    k: int
    n_out: int
    m: int
    p: int
    t: tuple[float, ...]
    mult: tuple[int, ...]
    basis: ComplexMatrix = field(repr=False)
    phi0: Optional[HermMap] = field(repr=False)
    phij: tuple[RealLinearMatMap, ...] = field(repr=False)
    residual: float = 0.0

    @property
    def r(self) -> int:
        return len(self.t)


@dataclass(frozen=True)
class DecompositionCheck:
    """Structural diagnostics for a HalfRankDecomposition."""

    phi0_involution_defect: float
    phij_unitary_defects: tuple[float, ...]
    block_bound_ok: bool
    p_bound_ok: bool


@dataclass(frozen=True)
class SearchReport:
    """Best residual of the unitary-to-involution least-squares search."""

    best_residual: float
    median_residual: float
    restarts: int
    unitaries: int
    seed: int
    fit_residual: float = 0.0


@dataclass(frozen=True)
class CollisionWitness:
    """Two distinct rank-k projections with (numerically) equal images."""

    found: bool
    first: Optional[ComplexMatrix] = field(default=None, repr=False)
    second: Optional[ComplexMatrix] = field(default=None, repr=False)
    image_distance: float = float("inf")
    trials: int = 0
