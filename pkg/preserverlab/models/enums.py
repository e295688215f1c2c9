"""Enum types shared by the engines, schemas and CLI."""

from enum import Enum


class DomainKind(str, Enum):
    """Real vector space a linear map is defined on."""

    HERM = "herm"  # H_n, canonical basis coordinates
    HERM0 = "herm0"  # traceless H_n
    MATRIX = "matrix"  # M_n, row-major (re, im) pairs
    VECTOR = "vector"  # C^n, (re, im) pairs


class PreserverTag(str, Enum):
    """Outcome of a classification engine."""

    CONSTANT = "constant"
    CONGRUENCE = "congruence"
    COMPLEMENTED_CONGRUENCE = "complemented_congruence"
    DIM2_TENSOR = "dim2_tensor"
    TRACE_ZERO_UNITARY_FORM = "trace_zero_unitary_form"
    UNITARY_TENSOR_FORM = "unitary_tensor_form"  # A -> U (A ⊗ I_n) V
    SIGNED_TENSOR_FORM = "signed_tensor_form"  # A -> U ((A ⊗ I_p) ⊕ (-A ⊗ I_q)) U*
    NOT_A_PRESERVER = "not_a_preserver"


class OutputFormat(str, Enum):
    """CLI output rendering."""

    JSON = "json"
    PRETTY = "pretty"
