"""Jacobian Poisson brackets on polynomial rings and decision procedures for their ideals."""

from .bracket import (
    PoissonStructure,
    RatFunc,
    StructureError,
    bracket,
    bracket_det_crosscheck,
    bracket_ratfunc,
    build_structure,
    determinant,
    generator_bracket,
    jacobian_rank,
    jacobiator,
    maximal_minor,
    plucker_minors_check,
    structure_from_table,
)
from .groebner import (
    GREVLEX,
    GRLEX,
    LEX,
    IdealHandle,
    MonomialOrder,
    contains,
    eliminate,
    groebner,
    groebner_basis,
    is_proper,
    normal_form,
    saturate,
)
from .ideals import (
    ClassificationReport,
    GammaData,
    GammaSequence,
    PencilSpec,
    PrimitiveReport,
    analyze_primitive_candidate,
    classify_point,
    gamma_of,
    is_poisson_ideal,
    is_residually_null,
    pencil_ideal,
    smoothness_check,
)
from .parse import (
    ParseError,
    format_structure,
    load_bundled,
    load_structure_file,
    parse_expr,
    print_canonical,
)
from .poly import DegreeLimitError, Poly, differentiate, evaluate, gcd_poly
from .torus import (
    TorusElement,
    WeightReport,
    act,
    h_group_check,
    poisson_auto_check,
    substitution_check,
    weight_report,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "DegreeLimitError",
    "GREVLEX",
    "GRLEX",
    "GammaData",
    "GammaSequence",
    "IdealHandle",
    "LEX",
    "MonomialOrder",
    "ParseError",
    "PencilSpec",
    "PoissonStructure",
    "Poly",
    "PrimitiveReport",
    "RatFunc",
    "StructureError",
    "TorusElement",
    "WeightReport",
    "act",
    "analyze_primitive_candidate",
    "bracket",
    "bracket_det_crosscheck",
    "bracket_ratfunc",
    "build_structure",
    "classify_point",
    "contains",
    "determinant",
    "differentiate",
    "eliminate",
    "evaluate",
    "format_structure",
    "gamma_of",
    "gcd_poly",
    "generator_bracket",
    "groebner",
    "groebner_basis",
    "h_group_check",
    "is_poisson_ideal",
    "is_proper",
    "is_residually_null",
    "jacobian_rank",
    "jacobiator",
    "load_bundled",
    "load_structure_file",
    "maximal_minor",
    "normal_form",
    "parse_expr",
    "pencil_ideal",
    "plucker_minors_check",
    "poisson_auto_check",
    "print_canonical",
    "saturate",
    "smoothness_check",
    "structure_from_table",
    "substitution_check",
    "weight_report",
]
