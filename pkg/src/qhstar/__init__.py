"""Numerical verification of quasi-Hopf *-algebra identities over finite-dimensional algebras."""

from .canonical_operators import OperatorSet, compute_operators, verify_operator_ledger
from .drinfeld_twists import (
    DrinfeldSet,
    compute_gamma,
    compute_gamma_bar,
    drinfeld_set,
    drinfeld_twist,
    primed_coproduct,
    second_drinfeld_twist,
    verify_conjugation_ledger,
    verify_twist_law,
    w_placement_verdict,
    zero_coproduct,
)
from .examples import BUILTINS, Structure, example
from .fileformat import FormatError, read_structure, write_structure
from .qha_structures import CheckReport, QuasiHopfData, StructureError, check_antipode, check_qba
from .quasi_triangular import (
    QtKind,
    RMatrixData,
    check_quasi_triangular,
    classify_star_qt,
    compute_u,
    verify_qt_star_ledger,
    z_u,
)
from .star_structures import StarData, check_star_algebra, check_star_qha, star_twist
from .tensor_core import AlgebraData, LinearMapData, TensorElement, ToleranceConfig
from .twist_calculus import TwistData, random_twist, twist_structure

__version__ = "0.1.0"

__all__ = [
    "AlgebraData",
    "BUILTINS",
    "CheckReport",
    "DrinfeldSet",
    "FormatError",
    "LinearMapData",
    "OperatorSet",
    "QtKind",
    "QuasiHopfData",
    "RMatrixData",
    "StarData",
    "Structure",
    "StructureError",
    "TensorElement",
    "ToleranceConfig",
    "TwistData",
    "check_antipode",
    "check_qba",
    "check_quasi_triangular",
    "check_star_algebra",
    "check_star_qha",
    "classify_star_qt",
    "compute_gamma",
    "compute_gamma_bar",
    "compute_operators",
    "compute_u",
    "drinfeld_set",
    "drinfeld_twist",
    "example",
    "primed_coproduct",
    "random_twist",
    "read_structure",
    "second_drinfeld_twist",
    "star_twist",
    "twist_structure",
    "verify_conjugation_ledger",
    "verify_operator_ledger",
    "verify_qt_star_ledger",
    "verify_twist_law",
    "w_placement_verdict",
    "write_structure",
    "z_u",
    "zero_coproduct",
]
