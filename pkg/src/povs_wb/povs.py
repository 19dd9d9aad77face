"""Pre-ordered vector spaces over Q^d with semi-linear positive wedges.

Everything here is driven by one fixed regulator per wedge: the canonical
interior point u* returned by regulator_point. Quantification over
regulators or over integer thresholds is reduced to a single continuous
parameter t > 0 against u*; the reduction is exercised against brute-force
witness search in the test suite before anything downstream trusts it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .exactnum import (
    Matrix,
    Q,
    Subspace,
    Vector,
    identity,
    mat,
    quotient_maps,
    vec,
    zero_vec,
)
from .semilin import (
    Rel,
    SemiLinearSet,
    affine_preimage,
    compact,
    complement,
    empty_set,
    full_set,
    intersect,
    is_empty,
    linear_image,
    make_cell,
    make_constraint,
    make_set,
    negate_set,
    normalize,
    origin_only,
    product,
    project_exists,
    regulator_point,
    restrict,
    sample_point,
    set_equal,
    set_subset,
    topo_closure,
    translate,
)
from .semilin.cones import cone_generators
from .semilin.fm import cell_is_empty


class WedgeError(ValueError):
    """The candidate positive set is not a wedge; carries a witness."""

    def __init__(self, message: str, witness: Optional[tuple[Vector, Vector]] = None):
        super().__init__(message)
        self.witness = witness


class IterationCapError(RuntimeError):
    """A transfinite-style iteration hit its finite cap without stabilizing."""

    def __init__(self, message: str, steps_done: int, trace: list):
        super().__init__(message)
        self.steps_done = steps_done
        self.trace = trace


class InternalCheckError(AssertionError):
    """A postcondition guaranteed by theory failed; indicates an engine bug."""


DEFAULT_ITERATION_CAP = 16


@dataclass(frozen=True)
class PreOrderedSpace:
    """A dimension plus a homogeneous semi-linear positive wedge."""

    dim: int
    positive: SemiLinearSet

    def __post_init__(self):
        if self.positive.dim != self.dim:
            raise ValueError(f"wedge lives in dim {self.positive.dim}, space has dim {self.dim}")


@dataclass(frozen=True)
class WedgeValidation:
    ok: bool
    message: str = ""
    witness: Optional[tuple[Vector, Vector]] = None


def validate_wedge(dim: int, positive: SemiLinearSet) -> WedgeValidation:
    """Check the wedge axioms: homogeneity (hence closure under t >= 0),
    membership of 0, and closure under addition. Reports a witness pair
    when additivity fails."""
    if positive.dim != dim:
        return WedgeValidation(False, f"wedge dimension {positive.dim} differs from space dimension {dim}")
    for cell in positive.cells:
        for c in cell.constraints:
            if not c.is_homogeneous:
                return WedgeValidation(False, f"non-homogeneous constraint: {c.render()}")
    if dim == 0:
        if positive.cells:
            return WedgeValidation(True)
        return WedgeValidation(False, "wedge is empty; 0 must belong to it")
    if not positive.contains(zero_vec(dim)):
        return WedgeValidation(False, "0 does not belong to the wedge")
    w = positive
    sum_matrix = mat([[1 if j == i else 0 for j in range(dim)] + [1 if j == i else 0 for j in range(dim)]
                      for i in range(dim)])
    bad = intersect(product(w, w), affine_preimage(complement(w), sum_matrix))
    for cell in bad.cells:
        pt = sample_point(cell)
        if pt is not None:
            x, y = pt[:dim], pt[dim:]
            return WedgeValidation(
                False,
                f"not closed under addition: x={x}, y={y}, x+y outside the wedge",
                (x, y),
            )
    return WedgeValidation(True)


def space(dim: int, positive: SemiLinearSet) -> PreOrderedSpace:
    """Validated constructor; raises WedgeError on a bad wedge."""
    v = validate_wedge(dim, positive)
    if not v.ok:
        raise WedgeError(v.message, v.witness)
    return PreOrderedSpace(dim, normalize(positive))


@lru_cache(maxsize=4096)
def _regulator(w: SemiLinearSet) -> Vector:
    return regulator_point(w)


def regulator(sp: PreOrderedSpace) -> Vector:
    return _regulator(sp.positive)


def span_to_set(s: Subspace) -> SemiLinearSet:
    """The subspace as a single equality-constrained cell."""
    rows = s.annihilator_rows()
    cs = [make_constraint(r, Rel.EQ, 0) for r in rows]
    return make_set(s.ambient_dim, [make_cell(s.ambient_dim, cs)])


def span_of_homogeneous_set(s: SemiLinearSet) -> Subspace:
    """Linear span of a homogeneous semi-linear set (union of cone cells)."""
    gens: list[Vector] = []
    for cell in topo_closure(s).cells:
        if not cell_is_empty(cell):
            gens.extend(cone_generators(cell))
    return Subspace.from_vectors(s.dim, gens)


def order_interval(sp: PreOrderedSpace, a: Vector, b: Vector) -> SemiLinearSet:
    """[a, b] = (a + X+) intersect (b - X+); may be empty."""
    a, b = vec(a), vec(b)
    if len(a) != sp.dim or len(b) != sp.dim:
        raise ValueError("interval endpoints must live in the space")
    lower = translate(sp.positive, a)
    upper = translate(negate_set(sp.positive), b)
    return normalize(intersect(lower, upper), deep=False)


@lru_cache(maxsize=4096)
def lineality(sp: PreOrderedSpace) -> Subspace:
    """The largest subspace inside the wedge: W intersect -W."""
    lin_set = intersect(sp.positive, negate_set(sp.positive))
    span = span_of_homogeneous_set(lin_set)
    if not set_equal(normalize(lin_set, deep=False), span_to_set(span)):
        raise InternalCheckError("lineality set is not a subspace; wedge validation was skipped?")
    return span


def is_cone(sp: PreOrderedSpace) -> bool:
    return lineality(sp).dim == 0


@lru_cache(maxsize=4096)
def is_majorizing(sp: PreOrderedSpace) -> bool:
    """W - W = X, checked by eliminating the two wedge witnesses."""
    if sp.dim == 0:
        return True
    diff_matrix = mat([[1 if j == i else 0 for j in range(sp.dim)] + [-1 if j == i else 0 for j in range(sp.dim)]
                       for i in range(sp.dim)])
    spanned = linear_image(product(sp.positive, sp.positive), diff_matrix)
    return set_equal(spanned, full_set(sp.dim))


def _forall_pos_t(a: SemiLinearSet, dim: int) -> SemiLinearSet:
    """{x in Q^dim : (x, t) in a for every t > 0}; a lives over dim+1 vars."""
    width = dim + 1
    t_pos = make_set(width, [make_cell(width, [
        make_constraint([0] * dim + [-1], Rel.LT, 0)
    ])])
    bad = intersect(complement(a), t_pos)
    bad_x = compact(project_exists(bad, [dim]))
    good = complement(bad_x)
    return restrict(normalize(good, deep=False), list(range(dim)))


def _exists_pos_t(a: SemiLinearSet, dim: int) -> SemiLinearSet:
    """{x in Q^dim : (x, t) in a for some t > 0}."""
    width = dim + 1
    t_pos = make_set(width, [make_cell(width, [
        make_constraint([0] * dim + [-1], Rel.LT, 0)
    ])])
    hit = project_exists(intersect(a, t_pos), [dim])
    return restrict(compact(hit), list(range(dim)))


def _interval_pair_set(sp: PreOrderedSpace, u: Vector) -> SemiLinearSet:
    """{(x, t) : t*u - x in W and t*u + x in W} over dim+1 variables."""
    d = sp.dim
    w = sp.positive
    minus = mat([[Q(-1) if j == i else Q(0) for j in range(d)] + [u[i]] for i in range(d)])
    plus = mat([[Q(1) if j == i else Q(0) for j in range(d)] + [u[i]] for i in range(d)])
    return intersect(
        affine_preimage(w, minus, cols=d + 1),
        affine_preimage(w, plus, cols=d + 1),
    )


@lru_cache(maxsize=4096)
def dominated_by_all_scalings(sp: PreOrderedSpace) -> SemiLinearSet:
    """{x : +-x <= t u* for every t > 0} -- the infinitesimal set."""
    if sp.dim == 0:
        return full_set(0)
    return normalize(_forall_pos_t(_interval_pair_set(sp, regulator(sp)), sp.dim))


def is_almost_archimedean(sp: PreOrderedSpace) -> bool:
    """No nonzero infinitesimals: the intersection of all [-tu*, tu*] is {0}.

    Trivial lineality is necessary but not sufficient (a wedge can contain
    an affine line avoiding the origin); the necessity is asserted as a
    cross-check.
    """
    inf_set = dominated_by_all_scalings(sp)
    result = set_equal(inf_set, origin_only(sp.dim))
    if result and lineality(sp).dim != 0:
        raise InternalCheckError("no infinitesimals, yet the wedge contains a line through 0")
    return result


def below_all_scalings(sp: PreOrderedSpace) -> SemiLinearSet:
    """{y : t u* - y in W for every t > 0}, i.e. n y <= u* for all n."""
    d = sp.dim
    u = regulator(sp)
    minus = mat([[Q(-1) if j == i else Q(0) for j in range(d)] + [u[i]] for i in range(d)])
    return _forall_pos_t(affine_preimage(sp.positive, minus, cols=d + 1), d)


@lru_cache(maxsize=4096)
def is_archimedean(sp: PreOrderedSpace) -> bool:
    """y <= 0 whenever n y <= u* for all n; u* stands in for every majorant."""
    if sp.dim == 0:
        return True
    return set_subset(below_all_scalings(sp), negate_set(sp.positive))


@lru_cache(maxsize=8192)
def derived_set(sp: PreOrderedSpace, s: SemiLinearSet) -> SemiLinearSet:
    """All limits of sequences from s converging with regulator u*.

    {x : for every t > 0 there is s0 in s with +-(s0 - x) <= t u*}.
    """
    if s.dim != sp.dim:
        raise ValueError("set must live in the space")
    d = sp.dim
    if d == 0:
        return normalize(s)
    u = regulator(sp)
    width = 2 * d + 1  # x vars, then t, then witness vars
    pick_s = mat([[Q(1) if j == d + 1 + i else Q(0) for j in range(width)] for i in range(d)])
    s_mem = affine_preimage(s, pick_s)
    rows_minus = []
    rows_plus = []
    for i in range(d):
        row_m = [Q(0)] * width
        row_m[i] = Q(1)
        row_m[d] = u[i]
        row_m[d + 1 + i] = Q(-1)
        rows_minus.append(row_m)  # t u - (s0 - x) = x + t u - s0
        row_p = [Q(0)] * width
        row_p[i] = Q(-1)
        row_p[d] = u[i]
        row_p[d + 1 + i] = Q(1)
        rows_plus.append(row_p)  # (s0 - x) + t u
    w1 = affine_preimage(sp.positive, mat(rows_minus))
    w2 = affine_preimage(sp.positive, mat(rows_plus))
    close_pair = intersect(intersect(s_mem, w1), w2)
    witnessed = project_exists(close_pair, list(range(d + 1, width)))
    witnessed = restrict(compact(witnessed), list(range(d + 1)))
    return normalize(_forall_pos_t(witnessed, d))


@dataclass(frozen=True)
class ClosureResult:
    closure: SemiLinearSet
    steps: int
    trace: tuple[SemiLinearSet, ...]


@lru_cache(maxsize=4096)
def ru_closure(sp: PreOrderedSpace, s: SemiLinearSet, cap: int = DEFAULT_ITERATION_CAP) -> ClosureResult:
    """Iterate the derived set to its fixpoint; steps counts strict growth."""
    current = normalize(s)
    trace = [current]
    for step in range(cap):
        nxt = derived_set(sp, current)
        if set_equal(nxt, current):
            return ClosureResult(current, step, tuple(trace))
        current = nxt
        trace.append(current)
    raise IterationCapError(
        f"derived-set iteration did not stabilize within cap {cap}", cap, trace
    )


def is_ru_closed(sp: PreOrderedSpace, s: SemiLinearSet) -> bool:
    return set_equal(derived_set(sp, s), normalize(s))


@dataclass(frozen=True)
class QuotientPresentation:
    kernel: Subspace
    projection: Matrix
    section: Matrix
    quotient: PreOrderedSpace


def quotient_by(sp: PreOrderedSpace, kernel: Subspace, wedge_source: Optional[SemiLinearSet] = None) -> QuotientPresentation:
    """Quotient of the space by a subspace; wedge is the image of
    wedge_source (default: the positive wedge)."""
    source = wedge_source if wedge_source is not None else sp.positive
    if kernel.dim == 0:
        ident = identity(sp.dim)
        return QuotientPresentation(kernel, ident, ident, PreOrderedSpace(sp.dim, normalize(source)))
    pi, sigma = quotient_maps(kernel)
    qdim = sp.dim - kernel.dim
    if qdim == 0:
        qwedge = full_set(0) if source.cells else empty_set(0)
    else:
        qwedge = normalize(linear_image(source, pi))
    return QuotientPresentation(kernel, pi, sigma, PreOrderedSpace(qdim, qwedge))


def archimedeanization(sp: PreOrderedSpace, cap: int = DEFAULT_ITERATION_CAP) -> QuotientPresentation:
    """Quotient by the lineality of the ru-closed wedge.

    Postconditions are verified before returning: the quotient wedge is an
    Archimedean cone, majorizing iff the original wedge is.
    """
    closed = ru_closure(sp, sp.positive, cap=cap).closure
    closed_space = PreOrderedSpace(sp.dim, closed)
    kernel = lineality(closed_space)
    pres = quotient_by(sp, kernel, wedge_source=closed)
    q = pres.quotient
    if not is_cone(q):
        raise InternalCheckError("archimedeanization quotient wedge is not a cone")
    if not is_archimedean(q):
        raise InternalCheckError("archimedeanization quotient is not Archimedean")
    if is_majorizing(q) != is_majorizing(sp):
        raise InternalCheckError("archimedeanization broke the majorizing property")
    return pres


@lru_cache(maxsize=4096)
def infinitesimal_ideal(sp: PreOrderedSpace) -> Subspace:
    """The order ideal of elements dominated by u*/n for every n."""
    inf_set = dominated_by_all_scalings(sp)
    span = span_of_homogeneous_set(inf_set)
    if not set_equal(inf_set, span_to_set(span)):
        raise InternalCheckError("infinitesimal set is not a subspace")
    if not is_order_ideal(sp, span):
        raise InternalCheckError("infinitesimal subspace is not an order ideal")
    return span


def _pullback(pi: Matrix, sub_in_quotient: Subspace, dim: int) -> Subspace:
    """Preimage of a quotient subspace under the projection pi."""
    rows = sub_in_quotient.annihilator_rows()
    if not rows:
        return Subspace.full(dim)
    from .exactnum import kernel_basis, mat_mul
    return kernel_basis(mat_mul(mat(rows), pi))


def ideal_tower(sp: PreOrderedSpace, cap: int = DEFAULT_ITERATION_CAP) -> tuple[list[Subspace], int]:
    """Iterated infinitesimal ideals; returns (tower, stabilization index).

    tower[k] is the order-k ideal; the first repeat stops the iteration, so
    the returned index is the number of strict growth steps.
    """
    tower = [Subspace.zero(sp.dim)]
    for step in range(cap + 1):
        current = tower[-1]
        pres = quotient_by(sp, current)
        inner = infinitesimal_ideal(pres.quotient)
        nxt = _pullback(pres.projection, inner, sp.dim)
        if nxt.basis == current.basis:
            return tower, step
        if not Subspace.from_vectors(sp.dim, list(current.basis) + list(nxt.basis)).basis == nxt.basis:
            raise InternalCheckError("ideal tower is not increasing")
        tower.append(nxt)
    raise IterationCapError(f"ideal tower did not stabilize within cap {cap}", cap, tower)


def alpha_type(sp: PreOrderedSpace, cap: int = DEFAULT_ITERATION_CAP) -> int:
    """Number of derived-set steps needed to close the positive wedge."""
    return ru_closure(sp, sp.positive, cap=cap).steps


def lambda_type(sp: PreOrderedSpace, cap: int = DEFAULT_ITERATION_CAP) -> int:
    """Number of strict growth steps of the infinitesimal ideal tower."""
    return ideal_tower(sp, cap=cap)[1]


def has_order_unit(sp: PreOrderedSpace, u: Vector) -> bool:
    """u dominates the whole space: X is the union of [-nu, nu]."""
    u = vec(u)
    if len(u) != sp.dim:
        raise ValueError("u must live in the space")
    if not sp.positive.contains(u):
        raise ValueError("order-unit candidate must belong to the positive wedge")
    if sp.dim == 0:
        return True
    covered = _exists_pos_t(_interval_pair_set(sp, u), sp.dim)
    return set_equal(covered, full_set(sp.dim))


def is_order_ideal(sp: PreOrderedSpace, v: Subspace) -> bool:
    """Every order interval with endpoints in v stays inside v."""
    if v.ambient_dim != sp.dim:
        raise ValueError("subspace must live in the space")
    d = sp.dim
    if d == 0:
        return True
    width = 3 * d  # a block, b block, x block
    rows = v.annihilator_rows()
    member_cs = []
    for n in rows:
        member_cs.append(make_constraint(list(n) + [0] * (2 * d), Rel.EQ, 0))
        member_cs.append(make_constraint([0] * d + list(n) + [0] * d, Rel.EQ, 0))
    endpoints = make_set(width, [make_cell(width, member_cs)])
    m_lower = mat([[Q(-1) if j == i else Q(0) for j in range(d)] + [Q(0)] * d
                   + [Q(1) if j == i else Q(0) for j in range(d)] for i in range(d)])
    m_upper = mat([[Q(0)] * d + [Q(1) if j == i else Q(0) for j in range(d)]
                   + [Q(-1) if j == i else Q(0) for j in range(d)] for i in range(d)])
    inside = intersect(affine_preimage(sp.positive, m_lower),
                       affine_preimage(sp.positive, m_upper))
    escapes = make_set(width, [
        make_cell(width, [make_constraint([0] * (2 * d) + [sgn * c for c in n], Rel.LT, 0)])
        for n in rows for sgn in (1, -1)
    ])
    bad = intersect(intersect(endpoints, inside), escapes)
    return is_empty(bad)


@dataclass(frozen=True)
class AnalysisReport:
    is_wedge: bool
    is_cone: bool
    is_majorizing: bool
    is_almost_archimedean: bool
    is_archimedean: bool
    is_ru_closed: bool
    alpha_type: Union[int, str]
    lambda_type: Union[int, str]
    lineality_dim: int
    closure_steps: tuple[SemiLinearSet, ...]
    infinitesimals: Subspace
    tower: tuple[Subspace, ...]


def analyze(sp: PreOrderedSpace, cap: int = DEFAULT_ITERATION_CAP) -> AnalysisReport:
    """Run every predicate and invariant on one space.

    Relationships that provably hold for every semi-linear wedge are
    enforced as internal cross-checks; a failure means the engine itself is
    wrong and raises rather than reporting nonsense.
    """
    lin = lineality(sp)
    cone = lin.dim == 0
    majorizing = is_majorizing(sp)
    arch = is_archimedean(sp)

    alpha: Union[int, str]
    try:
        cres = ru_closure(sp, sp.positive, cap=cap)
        alpha = cres.steps
        trace = cres.trace
        ru_closed = cres.steps == 0
    except IterationCapError as e:
        alpha = "cap-exceeded"
        trace = tuple(e.trace)
        ru_closed = False
    if arch != ru_closed:
        raise InternalCheckError(
            "Archimedean predicate disagrees with ru-closedness of the wedge"
        )

    inf_set = dominated_by_all_scalings(sp)
    almost = set_equal(inf_set, origin_only(sp.dim))
    if almost and not cone:
        raise InternalCheckError("almost Archimedean space whose wedge is not a cone")
    if arch and cone and not almost:
        raise InternalCheckError("Archimedean cone that is not almost Archimedean")
    infs = infinitesimal_ideal(sp)

    lam: Union[int, str]
    try:
        tower, lam = ideal_tower(sp, cap=cap)
        tower = tuple(tower)
    except IterationCapError as e:
        lam = "cap-exceeded"
        tower = tuple(e.trace)
    if almost != (lam == 0):
        raise InternalCheckError("almost Archimedean iff tower stabilizes immediately")

    return AnalysisReport(
        is_wedge=True,
        is_cone=cone,
        is_majorizing=majorizing,
        is_almost_archimedean=almost,
        is_archimedean=arch,
        is_ru_closed=ru_closed,
        alpha_type=alpha,
        lambda_type=lam,
        lineality_dim=lin.dim,
        closure_steps=trace,
        infinitesimals=infs,
        tower=tower,
    )
