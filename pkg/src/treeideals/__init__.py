"""Exact-arithmetic invariant ideals for staged event tree models.

The package computes, over the rationals and without floating point:

* the atoms and interior-sum coordinates of a staged tree,
* quadratic generator sets for the model's invariant ideal, its
  path-difference refinement, and the maximal-extension variant,
* toricity of the model via subtree-polynomial cross products,
* model dimension, membership of probability vectors, and exact
  recovery of the edge parameters from member points.

``cli`` adds a JSON document format and a command-line front end.
"""

from .errors import (
    DuplicateSymbol,
    ForeignSymbol,
    InvalidSimplexPoint,
    LengthMismatch,
    NotSameStage,
    ParseError,
    TreeIdealsError,
    UnboundSymbol,
    UnknownVertex,
    ValidationError,
    ZeroDenominator,
)
from .ideals import (
    GeneratorSet,
    PathPair,
    SeedOrigin,
    denominator_product,
    dimension_forms,
    extend_pair,
    fully_extends,
    maximal_extensions,
    maximal_extensions_stepwise,
    model_dimension,
    model_invariant_generators,
    mpaths_generators,
    path_difference,
    paths_ideal_generators,
    stage_pair_seeds,
    stage_path_generators,
    tree_path,
)
from .model import (
    ConditionalReport,
    MembershipVerdict,
    conditional_probability_report,
    membership,
    sample_theta,
)
from .parametrization import (
    ContainmentReport,
    StarResult,
    StarWitness,
    SumToOneReduction,
    ToricityVerdict,
    atom_images,
    containment_report,
    is_toric,
    phi_image,
    phi_toric_image,
    psi_evaluate,
    star_condition,
)
from .polycore import (
    ATOM,
    LABEL,
    Monomial,
    Polynomial,
    Symbol,
    SymbolTable,
    compare_monomials,
    compare_polynomials,
    monomial_key,
    polynomial_key,
)
from .stagedtree import (
    Atom,
    Edge,
    EdgeDef,
    StageClass,
    StagedTree,
    TreeDefinition,
    ValidationReport,
    VertexDef,
    Violation,
    build_tree,
    validate_tree,
)

__version__ = "0.1.0"

__all__ = [
    "ATOM",
    "Atom",
    "ContainmentReport",
    "ConditionalReport",
    "DuplicateSymbol",
    "Edge",
    "EdgeDef",
    "ForeignSymbol",
    "GeneratorSet",
    "InvalidSimplexPoint",
    "LABEL",
    "LengthMismatch",
    "MembershipVerdict",
    "Monomial",
    "NotSameStage",
    "ParseError",
    "PathPair",
    "Polynomial",
    "SeedOrigin",
    "StageClass",
    "StagedTree",
    "StarResult",
    "StarWitness",
    "SumToOneReduction",
    "Symbol",
    "SymbolTable",
    "ToricityVerdict",
    "TreeDefinition",
    "TreeIdealsError",
    "UnboundSymbol",
    "UnknownVertex",
    "ValidationError",
    "ValidationReport",
    "VertexDef",
    "Violation",
    "ZeroDenominator",
    "atom_images",
    "build_tree",
    "compare_monomials",
    "compare_polynomials",
    "conditional_probability_report",
    "containment_report",
    "denominator_product",
    "dimension_forms",
    "extend_pair",
    "fully_extends",
    "is_toric",
    "maximal_extensions",
    "maximal_extensions_stepwise",
    "membership",
    "model_dimension",
    "model_invariant_generators",
    "monomial_key",
    "mpaths_generators",
    "path_difference",
    "paths_ideal_generators",
    "phi_image",
    "phi_toric_image",
    "polynomial_key",
    "psi_evaluate",
    "sample_theta",
    "stage_pair_seeds",
    "stage_path_generators",
    "star_condition",
    "tree_path",
    "validate_tree",
    "__version__",
]
