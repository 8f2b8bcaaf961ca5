"""Exact computation with alternative algebras, their unit loops, and finite Moufang loops."""

__version__ = "0.1.0"

from .errors import ContractError, MoufangLabError, ResourceError, ScalarDivisionError, StructureError, UnsupportedError
from .scalars import PrimeField, QuadraticExtension, Rationals, Scalar, find_nonresidue, ring_from_descriptor
from .algebra import (
    AlgElement,
    Ideal,
    StructureAlgebra,
    all_ideals,
    check_alternative,
    check_moufang_algebra,
    dual_extension,
    direct_sum,
    enumerate_units,
    group_algebra,
    ideal_generated,
    inverse,
    nil_unitization,
    quotient_algebra,
    smiley_set,
    sum_proper_ideals,
)
from .octonion import cd_algebra, conjugate, norm, trace, zorn_algebra
from .loops import (
    FiniteLoop,
    LoopHom,
    Subloop,
    check_ip,
    check_moufang,
    find_embedding,
    is_normal,
    is_simple,
    normal_closure,
    quotient_loop,
    validate_loop,
)
from .bridge import (
    ideal_sum_correspondence,
    induced_normal_subloop,
    loop_span,
    one_plus_ideal_kernel,
    paige_construction,
    paige_loop,
    theorem_probe,
    unit_loop,
)

__all__ = [
    "AlgElement",
    "ContractError",
    "FiniteLoop",
    "Ideal",
    "LoopHom",
    "MoufangLabError",
    "PrimeField",
    "QuadraticExtension",
    "Rationals",
    "ResourceError",
    "Scalar",
    "ScalarDivisionError",
    "StructureAlgebra",
    "StructureError",
    "Subloop",
    "UnsupportedError",
    "all_ideals",
    "cd_algebra",
    "check_alternative",
    "check_ip",
    "check_moufang",
    "check_moufang_algebra",
    "conjugate",
    "direct_sum",
    "dual_extension",
    "enumerate_units",
    "find_embedding",
    "find_nonresidue",
    "group_algebra",
    "ideal_generated",
    "ideal_sum_correspondence",
    "induced_normal_subloop",
    "inverse",
    "is_normal",
    "is_simple",
    "loop_span",
    "nil_unitization",
    "norm",
    "normal_closure",
    "one_plus_ideal_kernel",
    "paige_construction",
    "paige_loop",
    "quotient_algebra",
    "quotient_loop",
    "ring_from_descriptor",
    "smiley_set",
    "sum_proper_ideals",
    "theorem_probe",
    "trace",
    "unit_loop",
    "validate_loop",
    "zorn_algebra",
]
