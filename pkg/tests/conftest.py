"""Shared fixtures: the standard wedge corpus and rational grid helpers."""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import product

import pytest

from povs_wb import povs
from povs_wb.semilin import (
    Rel,
    full_set,
    make_cell,
    make_constraint,
    make_set,
    origin_only,
)


def wedge_from(dim, cell_specs):
    cells = []
    for spec in cell_specs:
        cells.append(make_cell(dim, [make_constraint(c, r, 0) for c, r in spec]))
    return make_set(dim, cells)


@pytest.fixture(scope="session")
def lex_wedge_2d():
    return wedge_from(2, [[([-1, 0], Rel.LT)], [([1, 0], Rel.EQ), ([0, -1], Rel.LE)]])


@pytest.fixture(scope="session")
def quadrant_wedge():
    return wedge_from(2, [[([-1, 0], Rel.LE), ([0, -1], Rel.LE)]])


@pytest.fixture(scope="session")
def closed_half_wedge():
    return wedge_from(2, [[([0, -1], Rel.LE)]])


@pytest.fixture(scope="session")
def open_half_wedge():
    return wedge_from(2, [[([0, -1], Rel.LT)], [([1, 0], Rel.EQ), ([0, 1], Rel.EQ)]])


@pytest.fixture(scope="session")
def lex_space(lex_wedge_2d):
    return povs.space(2, lex_wedge_2d)


@pytest.fixture(scope="session")
def quadrant_space(quadrant_wedge):
    return povs.space(2, quadrant_wedge)


@pytest.fixture(scope="session")
def closed_half_space(closed_half_wedge):
    return povs.space(2, closed_half_wedge)


@pytest.fixture(scope="session")
def open_half_space(open_half_wedge):
    return povs.space(2, open_half_wedge)


@pytest.fixture(scope="session")
def trivial_space():
    return povs.space(2, origin_only(2))


@pytest.fixture(scope="session")
def full_plane_space():
    return povs.space(2, full_set(2))


@pytest.fixture(scope="session")
def ray_space():
    return povs.space(1, wedge_from(1, [[([-1], Rel.LE)]]))


def grid_values(max_denom, lo=-2, hi=2, denoms=(1, 2, 3, 4, 8, 16)):
    vals = set()
    for d in (d for d in denoms if d <= max_denom):
        n = int(lo * d)
        while n <= hi * d:
            vals.add(Q(n, d))
            n += 1
    return sorted(vals)


def grid_points(dim, max_denom, lo=-2, hi=2, denoms=(1, 2, 3, 4, 8, 16)):
    """Rational grid in a box: numerators over a few denominators <= max_denom."""
    vals = grid_values(max_denom, lo, hi, denoms)
    return [tuple(p) for p in product(vals, repeat=dim)]


def iter_grid_points(dim, max_denom, lo=-2, hi=2, denoms=(1, 2, 3, 4, 8, 16)):
    """Lazy variant for high dimensions where the full product is too big."""
    vals = grid_values(max_denom, lo, hi, denoms)
    return product(vals, repeat=dim)
