"""Semi-linear sets over Q^d with exact quantifier elimination."""

from .base import (
    CapacityError,
    CapacityLimits,
    Cell,
    LinConstraint,
    Rel,
    SemiLinearSet,
    capacity_limits,
    current_limits,
    empty_set,
    full_set,
    make_cell,
    make_constraint,
    make_set,
    origin_only,
)
from .cones import cone_generators, cone_hull, regulator_point
from .fm import cell_is_empty, sample_point, tighten
from .formula import (
    And,
    Atom,
    Exists,
    ForAll,
    Formula,
    FormulaError,
    Not,
    Or,
    atom,
    conj,
    disj,
    evaluate_formula,
    exists,
    forall,
    qe,
)
from .setops import (
    affine_preimage,
    compact,
    complement,
    difference,
    intersect,
    is_empty,
    linear_image,
    negate_set,
    normalize,
    product,
    project_exists,
    restrict,
    set_equal,
    set_sample_points,
    set_subset,
    topo_closure,
    translate,
    union,
)

__all__ = [
    "CapacityError",
    "CapacityLimits",
    "Cell",
    "LinConstraint",
    "Rel",
    "SemiLinearSet",
    "And",
    "Atom",
    "Exists",
    "ForAll",
    "Formula",
    "FormulaError",
    "Not",
    "Or",
    "affine_preimage",
    "atom",
    "capacity_limits",
    "cell_is_empty",
    "compact",
    "complement",
    "cone_generators",
    "cone_hull",
    "conj",
    "current_limits",
    "difference",
    "disj",
    "empty_set",
    "evaluate_formula",
    "exists",
    "forall",
    "full_set",
    "intersect",
    "is_empty",
    "linear_image",
    "make_cell",
    "make_constraint",
    "make_set",
    "negate_set",
    "normalize",
    "origin_only",
    "product",
    "project_exists",
    "qe",
    "regulator_point",
    "restrict",
    "sample_point",
    "set_equal",
    "set_sample_points",
    "set_subset",
    "tighten",
    "topo_closure",
    "translate",
    "union",
]
