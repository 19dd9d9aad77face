"""Boolean and geometric algebra on semi-linear sets.

All operations stay in disjunctive normal form (a set IS a union of cells).
Complements distribute negated atoms across cells with eager pruning, the
dominant cost center; every public operation re-normalizes its result by
dropping empty cells, implied constraints, and subsumed cells.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

from ..exactnum import Matrix, Q, Vector, identity, vec, vec_neg
from .base import (
    Cell,
    LinConstraint,
    Rel,
    SemiLinearSet,
    check_cell_budget,
    empty_set,
    make_cell,
    make_constraint,
    make_set,
)
from .fm import cell_is_empty, project, sample_point, tighten


def _tight_cell(dim: int, constraints) -> Optional[Cell]:
    t = tighten(list(constraints))
    if t is None:
        return None
    return make_cell(dim, t)


def reduce_cell(cell: Cell) -> Optional[Cell]:
    """Drop constraints implied by the remaining ones. None if cell is empty."""
    if cell_is_empty(cell):
        return None
    kept = list(cell.constraints)
    i = 0
    while i < len(kept):
        candidate = kept[i]
        others = kept[:i] + kept[i + 1:]
        implied = True
        for neg in _negations(candidate):
            probe = _tight_cell(cell.dim, others + [neg])
            if probe is not None and not cell_is_empty(probe):
                implied = False
                break
        if implied:
            kept.pop(i)
        else:
            i += 1
    return make_cell(cell.dim, kept)


def _negations(c: LinConstraint) -> list[LinConstraint]:
    neg = tuple(-v for v in c.coeffs)
    if c.rel == Rel.LE:
        return [LinConstraint(neg, Rel.LT, -c.const)]
    if c.rel == Rel.LT:
        return [LinConstraint(neg, Rel.LE, -c.const)]
    return [LinConstraint(neg, Rel.LT, -c.const), LinConstraint(c.coeffs, Rel.LT, c.const)]


def cell_subset(a: Cell, b: Cell) -> bool:
    """a included in b: every constraint of b is implied by a's constraints."""
    if set(b.constraints) <= set(a.constraints):
        return True
    for c in b.constraints:
        for neg in _negations(c):
            probe = _tight_cell(a.dim, list(a.constraints) + [neg])
            if probe is not None and not cell_is_empty(probe):
                return False
    return True


def normalize(s: SemiLinearSet, deep: bool = True) -> SemiLinearSet:
    """Drop empty cells; optionally reduce constraints and subsumed cells."""
    cells = [c for c in s.cells if not cell_is_empty(c)]
    if deep:
        cells = [reduce_cell(c) for c in cells]
        cells = [c for c in cells if c is not None]
        cells = _relax_covered_strict(s.dim, cells)
        kept: list[Cell] = []
        for i, c in enumerate(cells):
            absorbed = False
            for j, d in enumerate(cells):
                if i == j or not cell_subset(c, d):
                    continue
                if not cell_subset(d, c) or j < i:
                    absorbed = True  # strictly contained, or equal with an earlier copy
                    break
            if not absorbed:
                kept.append(c)
        cells = kept
    return make_set(s.dim, cells)


def _relax_covered_strict(dim: int, cells: list[Cell]) -> list[Cell]:
    """Widen a cell's strict face to non-strict when the union already
    covers it; lets unions like {x>0} | {x=0} collapse to {x>=0}."""
    whole = make_set(dim, cells)
    changed = True
    while changed:
        changed = False
        for i, cell in enumerate(cells):
            for k, c in enumerate(cell.constraints):
                if c.rel != Rel.LT:
                    continue
                relaxed = list(cell.constraints)
                relaxed[k] = LinConstraint(c.coeffs, Rel.LE, c.const)
                cand = _tight_cell(dim, relaxed)
                if cand is None:
                    continue
                extra = difference(make_set(dim, [cand]), whole)
                if is_empty(extra):
                    cells = cells[:i] + [cand] + cells[i + 1:]
                    whole = make_set(dim, cells)
                    changed = True
                    break
            if changed:
                break
    return [reduce_cell(c) for c in cells if not cell_is_empty(c)]


_SUBSUME_LIMIT = 160


def compact(s: SemiLinearSet) -> SemiLinearSet:
    """Mid-pipeline reducer: drop empty cells, strip implied constraints,
    remove subsumed cells (semantically when the cell count allows)."""
    cells = [reduce_cell(c) for c in s.cells]
    cells = [c for c in cells if c is not None]
    cells = _drop_syntactic_subsumed(cells)
    if 1 < len(cells) <= _SUBSUME_LIMIT:
        kept: list[Cell] = []
        for i, c in enumerate(cells):
            absorbed = False
            for j, d in enumerate(cells):
                if i == j or not cell_subset(c, d):
                    continue
                if not cell_subset(d, c) or j < i:
                    absorbed = True
                    break
            if not absorbed:
                kept.append(c)
        cells = kept
    return make_set(s.dim, cells)


def union(a: SemiLinearSet, b: SemiLinearSet) -> SemiLinearSet:
    if a.dim != b.dim:
        raise ValueError(f"ambient dims differ: {a.dim} vs {b.dim}")
    return make_set(a.dim, list(a.cells) + list(b.cells))


def intersect(a: SemiLinearSet, b: SemiLinearSet) -> SemiLinearSet:
    if a.dim != b.dim:
        raise ValueError(f"ambient dims differ: {a.dim} vs {b.dim}")
    cells = []
    for ca in a.cells:
        for cb in b.cells:
            cells.append(_tight_cell(a.dim, list(ca.constraints) + list(cb.constraints)))
    return make_set(a.dim, cells)


@lru_cache(maxsize=4096)
def complement(s: SemiLinearSet) -> SemiLinearSet:
    """Set difference Q^dim minus s, as a DNF with eager pruning.

    Input is compacted first: each dropped constraint halves a branching
    factor, each dropped cell removes one distribution round.
    """
    s = compact(s)
    result: list[Cell] = [Cell(s.dim, ())]
    for cell in sorted(s.cells, key=lambda c: len(c.constraints)):
        branches: list[list[LinConstraint]] = []
        for c in cell.constraints:
            branches.extend([n] for n in _negations(c))
        if not branches:
            return empty_set(s.dim)  # one cell is the whole space
        new: dict[tuple, Cell] = {}
        for partial in result:
            for branch in branches:
                cand = _tight_cell(s.dim, list(partial.constraints) + branch)
                if cand is not None and cand.constraints not in new and not cell_is_empty(cand):
                    new[cand.constraints] = cand
        check_cell_budget(len(new))
        result = _drop_syntactic_subsumed(list(new.values()))
        if len(result) > 256:
            result = list(compact(make_set(s.dim, result)).cells)
    return make_set(s.dim, result)


def _drop_syntactic_subsumed(cells: list[Cell]) -> list[Cell]:
    """Keep cells whose constraint set is not a superset of another cell's."""
    if len(cells) > 2048:
        return cells
    sets = [frozenset(c.constraints) for c in cells]
    kept = []
    for i, c in enumerate(cells):
        redundant = False
        for j, d in enumerate(cells):
            if i == j:
                continue
            if sets[j] < sets[i] or (sets[j] == sets[i] and j < i):
                redundant = True
                break
        if not redundant:
            kept.append(c)
    return kept


def difference(a: SemiLinearSet, b: SemiLinearSet) -> SemiLinearSet:
    """a minus b, cellwise against the distributed complement of b."""
    if a.dim != b.dim:
        raise ValueError(f"ambient dims differ: {a.dim} vs {b.dim}")
    out: list[Cell] = []
    for ca in a.cells:
        partials = [ca]
        for cb in b.cells:
            branches = []
            for c in cb.constraints:
                branches.extend(_negations(c))
            if not branches:
                partials = []
                break
            new = []
            for p in partials:
                for br in branches:
                    cand = _tight_cell(a.dim, list(p.constraints) + [br])
                    if cand is not None and not cell_is_empty(cand):
                        new.append(cand)
            check_cell_budget(len(new))
            partials = _drop_syntactic_subsumed(new)
        out.extend(partials)
    return make_set(a.dim, out)


def is_empty(s: SemiLinearSet) -> bool:
    return all(cell_is_empty(c) for c in s.cells)


def set_subset(a: SemiLinearSet, b: SemiLinearSet) -> bool:
    return is_empty(difference(a, b))


def set_equal(a: SemiLinearSet, b: SemiLinearSet) -> bool:
    return set_subset(a, b) and set_subset(b, a)


def project_exists(s: SemiLinearSet, drop_vars: Sequence[int]) -> SemiLinearSet:
    """Existential projection: eliminate the listed coordinates per cell.

    Cells remain in the ambient width with zero coefficients on the dropped
    variables; use restrict() to shrink the ambient space afterwards.
    """
    cells = []
    for cell in s.cells:
        cs = project(cell.constraints, s.dim, drop_vars)
        if cs is not None:
            cells.append(make_cell(s.dim, cs))
    return make_set(s.dim, cells)


def restrict(s: SemiLinearSet, keep: Sequence[int]) -> SemiLinearSet:
    """Reindex onto the listed coordinates; others must be unconstrained."""
    keep = list(keep)
    drop = [i for i in range(s.dim) if i not in keep]
    cells = []
    for cell in s.cells:
        for c in cell.constraints:
            if any(c.coeffs[i] != 0 for i in drop):
                raise ValueError("restrict: dropped coordinate still constrained")
        cells.append(make_cell(len(keep), [
            LinConstraint(tuple(c.coeffs[i] for i in keep), c.rel, c.const)
            for c in cell.constraints
        ]))
    return make_set(len(keep), cells)


def product(a: SemiLinearSet, b: SemiLinearSet) -> SemiLinearSet:
    """Cartesian product: coordinates of a first, then b's."""
    dim = a.dim + b.dim
    zeros_a = (0,) * a.dim
    zeros_b = (0,) * b.dim
    cells = []
    for ca in a.cells:
        ca_lift = [LinConstraint(c.coeffs + zeros_b, c.rel, c.const) for c in ca.constraints]
        for cb in b.cells:
            cb_lift = [LinConstraint(zeros_a + c.coeffs, c.rel, c.const) for c in cb.constraints]
            cells.append(_tight_cell(dim, ca_lift + cb_lift))
    return make_set(dim, cells)


def affine_preimage(
    s: SemiLinearSet,
    m: Matrix,
    shift: Optional[Vector] = None,
    cols: Optional[int] = None,
) -> SemiLinearSet:
    """{x : M x + shift in s}; constraint rewriting only, no elimination.

    ``cols`` pins the source dimension when m has no rows.
    """
    if len(m) != s.dim:
        raise ValueError(f"matrix rows {len(m)} vs ambient {s.dim}")
    ncols = len(m[0]) if m else (cols if cols is not None else 0)
    b = vec(shift) if shift is not None else (Q(0),) * s.dim
    cells = []
    for cell in s.cells:
        cs = []
        for c in cell.constraints:
            new_coeffs = [sum((Q(c.coeffs[i]) * m[i][j] for i in range(s.dim)), Q(0)) for j in range(ncols)]
            new_const = Q(c.const) - sum((Q(c.coeffs[i]) * b[i] for i in range(s.dim)), Q(0))
            cs.append(make_constraint(new_coeffs, c.rel, new_const))
        cells.append(_tight_cell(ncols, cs))
    return make_set(ncols, cells)


def translate(s: SemiLinearSet, v: Vector) -> SemiLinearSet:
    """{x + v : x in s}."""
    return affine_preimage(s, identity(s.dim), vec_neg(vec(v)))


def negate_set(s: SemiLinearSet) -> SemiLinearSet:
    """{-x : x in s}."""
    cells = []
    for cell in s.cells:
        cells.append(make_cell(s.dim, [
            LinConstraint(tuple(-v for v in c.coeffs), c.rel, c.const) if c.rel != Rel.EQ
            else make_constraint([-v for v in c.coeffs], Rel.EQ, c.const)
            for c in cell.constraints
        ]))
    return make_set(s.dim, cells)


def linear_image(s: SemiLinearSet, m: Matrix) -> SemiLinearSet:
    """{M x : x in s}, via elimination of the source coordinates."""
    if m and len(m[0]) != s.dim:
        raise ValueError(f"matrix columns {len(m[0])} vs ambient {s.dim}")
    target = len(m)
    width = target + s.dim
    cells = []
    for cell in s.cells:
        cs = [LinConstraint((0,) * target + c.coeffs, c.rel, c.const) for c in cell.constraints]
        for i in range(target):
            row = [Q(1) if j == i else Q(0) for j in range(target)] + [-m[i][j] for j in range(s.dim)]
            cs.append(make_constraint(row, Rel.EQ, 0))
        reduced = project(cs, width, list(range(target, width)))
        if reduced is not None:
            cells.append(make_cell(width, reduced))
    wide = make_set(width, cells)
    return restrict(wide, list(range(target)))


def topo_closure(s: SemiLinearSet) -> SemiLinearSet:
    """Topological closure: relax strict constraints of each nonempty cell."""
    cells = []
    for cell in s.cells:
        if cell_is_empty(cell):
            continue
        cells.append(make_cell(s.dim, [
            LinConstraint(c.coeffs, Rel.LE, c.const) if c.rel == Rel.LT else c
            for c in cell.constraints
        ]))
    return make_set(s.dim, cells)


def set_sample_points(s: SemiLinearSet) -> list[Vector]:
    """One interior-ish rational point per nonempty cell."""
    pts = []
    for cell in s.cells:
        p = sample_point(cell)
        if p is not None:
            pts.append(p)
    return pts
