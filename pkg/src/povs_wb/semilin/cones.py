"""Generator rays for closed homogeneous cells (H-to-V conversion) and the
canonical interior regulator point of a wedge.

The double description step is the naive one: keep satisfying rays and add
the boundary combination of every violating/satisfying pair. Redundant rays
are harmless for our uses; duplicates are removed and output is sorted so
downstream sums are deterministic.
"""

from __future__ import annotations

from math import gcd
from typing import Optional

from ..exactnum import Q, Vector, vec_add, zero_vec
from .base import Cell, Rel, SemiLinearSet
from .fm import cell_is_empty
from .setops import topo_closure


def _primitive(ray: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    g = 0
    for v in ray:
        g = gcd(g, abs(v))
    if g == 0:
        return None
    return tuple(v // g for v in ray)


def _apply_halfspace(rays: list[tuple[int, ...]], a: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Intersect cone(rays) with {x : a.x <= 0}."""
    def val(r):
        return sum(ai * ri for ai, ri in zip(a, r))

    keep = [r for r in rays if val(r) <= 0]
    pos = [r for r in rays if val(r) > 0]
    neg = [r for r in rays if val(r) < 0]
    combos = []
    for p in pos:
        vp = val(p)
        for n in neg:
            vn = val(n)
            combo = _primitive(tuple(vp * nb - vn * pb for pb, nb in zip(p, n)))
            if combo is not None:
                combos.append(combo)
    seen = dict.fromkeys(keep + combos)
    return list(seen)


def cone_generators(cell: Cell) -> list[Vector]:
    """Rays whose nonnegative combinations equal the cell.

    The cell must be homogeneous with only LE and EQ relations (a closed
    wedge), and nonempty.
    """
    for c in cell.constraints:
        if c.rel == Rel.LT:
            raise ValueError("cone_generators requires a closed cell (no strict constraints)")
        if c.const != 0:
            raise ValueError("cone_generators requires homogeneous constraints")
    if cell_is_empty(cell):
        raise ValueError("cone_generators requires a nonempty cell")
    d = cell.dim
    rays: list[tuple[int, ...]] = []
    for i in range(d):
        e = tuple(1 if j == i else 0 for j in range(d))
        rays.append(e)
        rays.append(tuple(-v for v in e))
    for c in cell.constraints:
        rays = _apply_halfspace(rays, c.coeffs)
        if c.rel == Rel.EQ:
            rays = _apply_halfspace(rays, tuple(-v for v in c.coeffs))
    rays = sorted(set(rays))
    return [tuple(Q(v) for v in r) for r in rays]


def regulator_point(w: SemiLinearSet) -> Vector:
    """Canonical point of the wedge that majorizes every element of it.

    Sum of the generator rays of the closures of all nonempty cells; lands
    in the relative interior of each cell's closure, hence in the wedge,
    and is cofinal for the induced order.
    """
    total = zero_vec(w.dim)
    closed = topo_closure(w)
    for cell in closed.cells:
        if cell_is_empty(cell):
            continue
        for ray in cone_generators(cell):
            total = vec_add(total, ray)
    return total


def cone_hull(dim: int, rays: list[Vector]) -> SemiLinearSet:
    """The set of nonnegative combinations of the rays, as a semi-linear set.

    Built by eliminating the combination weights; used by round-trip tests.
    """
    from .base import make_cell, make_constraint, make_set
    from .fm import project
    from .setops import restrict

    m = len(rays)
    width = dim + m
    cs = []
    for j in range(m):
        row = [0] * width
        row[dim + j] = -1
        cs.append(make_constraint(row, Rel.LE, 0))  # weight >= 0
    for i in range(dim):
        row = [Q(0)] * width
        row[i] = Q(1)
        for j in range(m):
            row[dim + j] = -rays[j][i]
        cs.append(make_constraint(row, Rel.EQ, 0))  # x_i = sum_j t_j r_j[i]
    reduced = project(cs, width, list(range(dim, width)))
    if reduced is None:
        raise AssertionError("cone hull projection cannot be empty; it contains 0")
    wide = make_set(width, [make_cell(width, reduced)])
    return restrict(wide, list(range(dim)))
