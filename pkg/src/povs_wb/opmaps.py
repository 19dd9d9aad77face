"""Linear maps between pre-ordered spaces: positivity, order-boundedness,
continuity spot checks against closed sets, and factorization through the
Archimedean quotient.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import Matrix, Q, mat, mat_mul, mat_vec, rank
from .povs import (
    InternalCheckError,
    PreOrderedSpace,
    archimedeanization,
    is_archimedean,
    is_cone,
    is_ru_closed,
)
from .semilin import (
    SemiLinearSet,
    affine_preimage,
    complement,
    full_set,
    intersect,
    linear_image,
    normalize,
    project_exists,
    restrict,
    set_equal,
    set_subset,
)


@dataclass(frozen=True)
class LinearMap:
    matrix: Matrix
    domain: PreOrderedSpace
    codomain: PreOrderedSpace

    def __post_init__(self):
        if len(self.matrix) != self.codomain.dim:
            raise ValueError(f"matrix has {len(self.matrix)} rows, codomain dim {self.codomain.dim}")
        if self.matrix and len(self.matrix[0]) != self.domain.dim:
            raise ValueError(f"matrix has {len(self.matrix[0])} columns, domain dim {self.domain.dim}")

    def apply(self, x):
        return mat_vec(self.matrix, x)


def linear_map(rows, domain: PreOrderedSpace, codomain: PreOrderedSpace) -> LinearMap:
    return LinearMap(mat(rows), domain, codomain)


def is_positive(t: LinearMap) -> bool:
    """T maps the domain wedge into the codomain wedge."""
    image = linear_image(t.domain.positive, t.matrix)
    return set_subset(image, t.codomain.positive)


ORDER_BOUNDED_DIM_CAP = 3


def is_order_bounded(t: LinearMap, override_dim_cap: bool = False) -> bool:
    """T maps order intervals into order intervals.

    The sentence has three quantifier blocks (interval endpoints, image
    bounds, interval member); by default it refuses domains above dimension
    3 rather than grind through the elimination.
    """
    dx, dy = t.domain.dim, t.codomain.dim
    if dx > ORDER_BOUNDED_DIM_CAP and not override_dim_cap:
        raise ValueError(
            f"order-boundedness check refused for domain dim {dx} > {ORDER_BOUNDED_DIM_CAP}; "
            "pass override_dim_cap=True to force it"
        )
    if dx == 0 or dy == 0:
        return True
    w_dom, w_cod = t.domain.positive, t.codomain.positive

    # variable layout: a (dx), b (dx), c (dy), d (dy), x (dx)
    width = 2 * dx + 2 * dy + dx
    off_b, off_c, off_d, off_x = dx, 2 * dx, 2 * dx + dy, 2 * dx + 2 * dy

    def zero_row() -> list:
        return [Q(0)] * width

    x_minus_a, b_minus_x = [], []
    for i in range(dx):
        r = zero_row()
        r[off_x + i], r[i] = Q(1), Q(-1)
        x_minus_a.append(r)
        r2 = zero_row()
        r2[off_b + i], r2[off_x + i] = Q(1), Q(-1)
        b_minus_x.append(r2)
    tx_minus_c, d_minus_tx = [], []
    for i in range(dy):
        r = zero_row()
        for j in range(dx):
            r[off_x + j] = t.matrix[i][j]
        r[off_c + i] = Q(-1)
        tx_minus_c.append(r)
        r2 = zero_row()
        for j in range(dx):
            r2[off_x + j] = -t.matrix[i][j]
        r2[off_d + i] = Q(1)
        d_minus_tx.append(r2)

    in_interval = intersect(
        affine_preimage(w_dom, mat(x_minus_a)),
        affine_preimage(w_dom, mat(b_minus_x)),
    )
    image_in = intersect(
        affine_preimage(w_cod, mat(tx_minus_c)),
        affine_preimage(w_cod, mat(d_minus_tx)),
    )
    escapes = intersect(in_interval, complement(image_in))
    bad_for_cd = project_exists(escapes, list(range(off_x, width)))
    bad_for_cd = restrict(normalize(bad_for_cd, deep=False), list(range(off_x)))

    # exists c,d with no escapee: project the complement
    good_cd = complement(bad_for_cd)
    covered_ab = project_exists(good_cd, list(range(off_c, off_x)))
    covered_ab = restrict(normalize(covered_ab, deep=False), list(range(2 * dx)))

    return set_equal(covered_ab, full_set(2 * dx))


def preimage_set(t: LinearMap, s: SemiLinearSet) -> SemiLinearSet:
    """{x in domain : T x in s}; pure constraint substitution."""
    if s.dim != t.codomain.dim:
        raise ValueError("set must live in the codomain")
    return affine_preimage(s, t.matrix, cols=t.domain.dim)


def check_ru_continuity(t: LinearMap, s: SemiLinearSet) -> bool:
    """Preimage of an ru-closed codomain set is ru-closed in the domain.

    Precondition: s is ru-closed in the codomain (verified here). For a
    positive map this must come back true; a False return on a positive map
    means the engine itself is broken, so callers treat this as a
    verification probe rather than a classifier.
    """
    if not is_ru_closed(t.codomain, s):
        raise ValueError("target set is not ru-closed in the codomain")
    return is_ru_closed(t.domain, preimage_set(t, s))


def factor_through_archimedeanization(phi: LinearMap) -> LinearMap:
    """The unique map T on the domain's Archimedean quotient with
    T . projection = phi; requires phi positive into an Archimedean
    ordered (cone) codomain."""
    if not is_positive(phi):
        raise ValueError("map is not positive; cannot factor")
    if not is_archimedean(phi.codomain):
        raise ValueError("codomain is not Archimedean; cannot factor")
    if not is_cone(phi.codomain):
        raise ValueError("codomain wedge is not a cone; factorization needs an ordered codomain")
    pres = archimedeanization(phi.domain)
    for a in pres.kernel.basis:
        if any(v != 0 for v in mat_vec(phi.matrix, a)):
            raise InternalCheckError("positive map does not annihilate the quotient kernel")
    t_matrix = mat_mul(phi.matrix, pres.section) if pres.quotient.dim else tuple(() for _ in range(phi.codomain.dim))
    factored = LinearMap(t_matrix, pres.quotient, phi.codomain)
    composed = mat_mul(t_matrix, pres.projection) if pres.quotient.dim else tuple(
        (Q(0),) * phi.domain.dim for _ in range(phi.codomain.dim))
    if composed != phi.matrix:
        raise InternalCheckError("factorization does not reproduce the original map")
    if not is_positive(factored):
        raise InternalCheckError("factored map is not positive")
    if rank(pres.projection) != pres.quotient.dim:
        raise InternalCheckError("quotient projection is not surjective")
    return factored
