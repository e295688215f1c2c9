"""Registered example maps: trace complements, Clifford-type maps, tensors, dilations."""

import math
from typing import Any

import numpy as np

from preserverlab.core.config import settings
from preserverlab.core.exceptions import BadParameter
from preserverlab.generators.base import BaseGenerator, Instance
from preserverlab.generators.factory import register_generator
from preserverlab.linalg.complex_linalg import as_complex, is_projection
from preserverlab.linalg.sampling import random_isometry, random_projection, random_unit_vector
from preserverlab.models.herm import RealLinearMatMap
from preserverlab.services.construction_service import (
    make_clifford_block_map,
    make_clifford_embedding,
    make_congruence,
    make_constant,
    make_dilation,
    make_rotation_unitary_map,
    make_tensor,
    make_tensor_pair,
    make_trace_complement,
    make_vector_eval,
)


def _require(params: dict[str, Any], *names: str) -> list[Any]:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise BadParameter(missing[0], None, "a value")
    return [params[n] for n in names]


def _rank(p0: Any) -> int:
    p0 = np.atleast_2d(as_complex(p0))
    _, rank = is_projection(p0, settings.tol_canon(p0.shape[0]))
    return int(rank or 0)


def _random_pair_nk(rng: np.random.Generator, low: int = 2, high: int = 4) -> tuple[int, int]:
    n = int(rng.integers(low, high + 1))
    return n, int(rng.integers(1, n))


@register_generator("complement")
class TraceComplementGenerator(BaseGenerator):
    """L_k(A) = (tr A / k) I_m − A."""

    description = "Trace complement on H_m, rank k to rank m - k"

    def build(self, params: dict[str, Any]) -> Instance:
        k, m = _require(params, "k", "m")
        return Instance.preserver(make_trace_complement(int(k), int(m)), int(k), int(m) - int(k))

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        n, k = _random_pair_nk(rng, 2, 5)
        return {"k": k, "m": n}


@register_generator("clifford")
class CliffordEmbeddingGenerator(BaseGenerator):
    """ρ_k: C^k → M_{2^{k−1}}."""

    description = "Clifford embedding of C^k, unit vectors to unitaries"

    def build(self, params: dict[str, Any]) -> Instance:
        (k,) = _require(params, "k")
        return Instance.unitary(make_clifford_embedding(int(k)))

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        return {"k": int(rng.integers(1, 6))}


@register_generator("congruence")
class CongruenceGenerator(BaseGenerator):
    """A ↦ U A U* or U Ā U*."""

    description = "Congruence by an isometry, optionally after entrywise conjugation"

    def build(self, params: dict[str, Any]) -> Instance:
        (u,) = _require(params, "u")
        u = np.atleast_2d(as_complex(u))
        conj = bool(params.get("conj", False))
        k = int(params.get("k") or 1)
        return Instance.preserver(make_congruence(u, conj), k, k)

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        n, k = _random_pair_nk(rng)
        big = n + int(rng.integers(0, 4))
        return {"u": random_isometry(rng, big, n), "conj": bool(rng.integers(0, 2)), "k": k}


@register_generator("tensor")
class TensorGenerator(BaseGenerator):
    """A ↦ A ⊗ P0."""

    description = "Tensor with a fixed projection"

    def build(self, params: dict[str, Any]) -> Instance:
        p0, n = _require(params, "p0", "n")
        k = int(params.get("k") or 1)
        return Instance.preserver(make_tensor(p0, int(n)), k, k * _rank(p0))

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        n, k = _random_pair_nk(rng)
        d = int(rng.integers(1, 4))
        return {"p0": random_projection(rng, d, int(rng.integers(0, d + 1))), "n": n, "k": k}


@register_generator("pair")
class TensorPairGenerator(BaseGenerator):
    """ψ(A) = A ⊗ P0 + ((tr A / k) I − A) ⊗ Q0."""

    description = "Tensor pair form with projections P0 and Q0"

    def build(self, params: dict[str, Any]) -> Instance:
        p0, q0, n, k = _require(params, "p0", "q0", "n", "k")
        n, k = int(n), int(k)
        image_rank = k * _rank(p0) + (n - k) * _rank(q0)
        return Instance.preserver(make_tensor_pair(p0, q0, n, k), k, image_rank)

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        n, k = _random_pair_nk(rng)
        d = int(rng.integers(1, 4))
        return {
            "p0": random_projection(rng, d, int(rng.integers(0, d + 1))),
            "q0": random_projection(rng, d, int(rng.integers(0, d + 1))),
            "n": n,
            "k": k,
        }


@register_generator("constant")
class ConstantGenerator(BaseGenerator):
    """A ↦ (tr A / k) P0."""

    description = "Constant on rank-k projections"

    def build(self, params: dict[str, Any]) -> Instance:
        p0, n, k = _require(params, "p0", "n", "k")
        return Instance.preserver(make_constant(p0, int(n), int(k)), int(k), _rank(p0))

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        n, k = _random_pair_nk(rng)
        d = int(rng.integers(1, 5))
        return {"p0": random_projection(rng, d, int(rng.integers(0, d + 1))), "n": n, "k": k}


@register_generator("dilation")
class DilationGenerator(BaseGenerator):
    """H_{2k} → H_{2m} dilation of an admissible τ (the rotation map unless ``tau`` is given)."""

    description = "Dilation of a unitary-valued map on traceless involutions"

    def build(self, params: dict[str, Any]) -> Instance:
        k, t = _require(params, "k", "t")
        k = int(k)
        tau = params.get("tau")
        if tau is None:
            tau = make_rotation_unitary_map(k, float(params.get("phi") or 0.0))
        elif not isinstance(tau, RealLinearMatMap):
            raise BadParameter("tau", type(tau).__name__, "RealLinearMatMap")
        f = make_dilation(k, float(t), tau, samples=params.get("samples"), seed=params.get("seed"))
        return Instance.preserver(f, k, tau.n_out)

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        return {
            "k": 1,
            "t": float(rng.uniform(0.05, 0.95)),
            "phi": float(rng.uniform(0.0, math.pi)),
            "samples": 20,
            "seed": int(rng.integers(0, 2**32)),
        }


@register_generator("clifford-block")
class CliffordBlockGenerator(BaseGenerator):
    """H_n → H_{2^{n−1}} block map built on ρ_{n−1}."""

    description = "Clifford block map, rank k to rank 2^(n-2)"

    def build(self, params: dict[str, Any]) -> Instance:
        n, k = _require(params, "n", "k")
        n, k = int(n), int(k)
        return Instance.preserver(make_clifford_block_map(n, k), k, 2 ** (n - 2))

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        n, k = _random_pair_nk(rng, 2, 4)
        return {"n": n, "k": k}


@register_generator("vector-eval")
class VectorEvalGenerator(BaseGenerator):
    """A ↦ ρ_m(A v0)."""

    description = "Evaluation at a unit vector followed by the Clifford embedding"

    def build(self, params: dict[str, Any]) -> Instance:
        (v0,) = _require(params, "v0")
        return Instance.unitary(make_vector_eval(v0))

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        return {"v0": random_unit_vector(rng, int(rng.integers(1, 5)))}


@register_generator("rotation")
class RotationGenerator(BaseGenerator):
    """τ(A) = cos φ A ⊗ I + i sin φ I ⊗ A on H^0_{2k}."""

    description = "Rotation map, traceless involutions to unitaries"

    def build(self, params: dict[str, Any]) -> Instance:
        (k,) = _require(params, "k")
        return Instance.unitary(make_rotation_unitary_map(int(k), float(params.get("phi") or 0.0)))

    def random_params(self, rng: np.random.Generator) -> dict[str, Any]:
        return {"k": int(rng.integers(1, 3)), "phi": float(rng.uniform(0.0, math.pi))}
