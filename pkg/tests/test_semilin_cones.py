from fractions import Fraction as Q

import pytest

from povs_wb.exactnum import vec, vec_sub, vec_scale
from povs_wb.semilin import (
    Rel,
    cone_generators,
    cone_hull,
    make_cell,
    make_constraint,
    make_set,
    origin_only,
    regulator_point,
    set_equal,
    set_subset,
)

from conftest import grid_points, wedge_from


def closed_cell(dim, *rows):
    return make_cell(dim, [make_constraint(c, r, 0) for c, r in rows])


def test_quadrant_generators():
    c = closed_cell(2, ([-1, 0], Rel.LE), ([0, -1], Rel.LE))
    assert sorted(cone_generators(c)) == [vec([0, 1]), vec([1, 0])]


def test_half_plane_generators_include_the_line():
    c = closed_cell(2, ([0, -1], Rel.LE))
    gens = sorted(cone_generators(c))
    assert gens == [vec([-1, 0]), vec([0, 1]), vec([1, 0])]
    # round-trip oracle: hull of the generators is the cell again
    hull = cone_hull(2, gens)
    cell_as_set = make_set(2, [c])
    assert set_subset(hull, cell_as_set) and set_subset(cell_as_set, hull)


def test_axis_generators():
    c = closed_cell(2, ([1, 0], Rel.EQ))
    assert sorted(cone_generators(c)) == [vec([0, -1]), vec([0, 1])]


def test_origin_cell_has_no_generators():
    c = closed_cell(2, ([1, 0], Rel.EQ), ([0, 1], Rel.EQ))
    assert cone_generators(c) == []


def test_strict_input_rejected():
    c = closed_cell(2, ([-1, 0], Rel.LT))
    with pytest.raises(ValueError):
        cone_generators(c)


def test_inhomogeneous_input_rejected():
    c = make_cell(2, [make_constraint([1, 0], Rel.LE, 1)])
    with pytest.raises(ValueError):
        cone_generators(c)


@pytest.mark.parametrize("rows", [
    [([-1, 0], Rel.LE), ([0, -1], Rel.LE)],
    [([0, -1], Rel.LE)],
    [([1, 1], Rel.EQ)],
    [([-1, -1], Rel.LE), ([1, -1], Rel.LE)],
    [([-2, 1], Rel.LE), ([1, -3], Rel.LE)],
])
def test_generator_round_trip(rows):
    c = closed_cell(2, *rows)
    gens = cone_generators(c)
    hull = cone_hull(2, gens)
    cell_as_set = make_set(2, [c])
    assert set_equal(hull, cell_as_set)


@pytest.mark.parametrize("rows", [
    [([-1, 0, 0], Rel.LE), ([0, -1, 0], Rel.LE), ([0, 0, -1], Rel.LE)],
    [([0, 0, -1], Rel.LE), ([1, 1, 1], Rel.EQ)],
    [([-1, 1, 0], Rel.LE), ([0, -1, 1], Rel.LE), ([0, 0, -1], Rel.LE)],
])
def test_generator_round_trip_3d(rows):
    c = closed_cell(3, *rows)
    gens = cone_generators(c)
    hull = cone_hull(3, gens)
    assert set_equal(hull, make_set(3, [c]))


def test_regulator_examples():
    open_half = wedge_from(2, [[([0, -1], Rel.LT)], [([1, 0], Rel.EQ), ([0, 1], Rel.EQ)]])
    assert regulator_point(open_half) == vec([0, 1])
    quadrant = wedge_from(2, [[([-1, 0], Rel.LE), ([0, -1], Rel.LE)]])
    assert regulator_point(quadrant) == vec([1, 1])
    assert regulator_point(origin_only(2)) == vec([0, 0])


@pytest.mark.parametrize("wedge_cells", [
    [[([-1, 0], Rel.LT)], [([1, 0], Rel.EQ), ([0, -1], Rel.LE)]],   # lexicographic
    [[([-1, 0], Rel.LE), ([0, -1], Rel.LE)]],                        # quadrant
    [[([0, -1], Rel.LE)]],                                           # closed half plane
    [[([0, -1], Rel.LT)], [([1, 0], Rel.EQ), ([0, 1], Rel.EQ)]],     # open half plane
])
def test_regulator_point_is_cofinal(wedge_cells):
    w = wedge_from(2, wedge_cells)
    u = regulator_point(w)
    assert w.contains(u)
    inside = [p for p in grid_points(2, 16, -2, 2, denoms=(1, 2, 4, 8, 16)) if w.contains(p)]
    assert len(inside) >= 1
    checked = 0
    for p in inside:
        if checked >= 100:
            break
        checked += 1
        # doubling search for c with c*u - p in W, checked by direct evaluation
        found = False
        c = Q(1)
        for _ in range(17):
            if w.contains(vec_sub(vec_scale(c, u), p)):
                found = True
                break
            c *= 2
        assert found, f"no multiple of {u} dominates {p}"
