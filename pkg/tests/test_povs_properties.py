"""Property suites over randomly generated wedges.

The populations here are sized for fast feedback; the acceptance module
reruns the binding versions at full size with fixed seeds.
"""

import random

import pytest

from povs_wb import povs
from povs_wb.generators import lex_wedge, random_space
from povs_wb.semilin import set_equal, topo_closure

from conftest import grid_points
from oracles import (
    check_derived_set_against_brute_force,
    check_integer_reduction,
)


@pytest.fixture(scope="module")
def population():
    rng = random.Random(20240811)
    return ([random_space(rng, 1) for _ in range(8)]
            + [random_space(rng, 2) for _ in range(22)]
            + [random_space(rng, 3) for _ in range(10)])


def test_archimedean_iff_wedge_closed_under_ru_limits(population):
    for sp in population:
        assert povs.is_archimedean(sp) == povs.is_ru_closed(sp, sp.positive)


def test_derived_set_iterates_stay_wedges(population):
    for sp in population:
        rep = povs.analyze(sp)
        for step in rep.closure_steps:
            assert povs.validate_wedge(sp.dim, step).ok


def test_quotient_is_archimedean_cone_preserving_majorizing(population):
    for sp in population:
        pres = povs.archimedeanization(sp)
        assert povs.is_cone(pres.quotient)
        assert povs.is_archimedean(pres.quotient)
        assert povs.is_majorizing(pres.quotient) == povs.is_majorizing(sp)


def test_topologically_closed_wedges_are_archimedean(population):
    for sp in population:
        if set_equal(topo_closure(sp.positive), sp.positive):
            assert povs.is_archimedean(sp)


def test_almost_archimedean_forces_small_alpha(population):
    for sp in population:
        if povs.is_almost_archimedean(sp):
            assert povs.alpha_type(sp) <= 1


def test_no_infinitesimals_iff_almost_archimedean(population):
    for sp in population:
        assert (povs.infinitesimal_ideal(sp).dim == 0) == povs.is_almost_archimedean(sp)


def test_ideal_tower_sits_inside_closure_iterates(population):
    # the order-k ideal is contained in the k-th derived iterate of the wedge
    from povs_wb.semilin import set_subset
    for sp in population:
        rep = povs.analyze(sp)
        if isinstance(rep.lambda_type, str) or isinstance(rep.alpha_type, str):
            continue
        steps = rep.closure_steps
        for k, ideal in enumerate(rep.tower):
            iterate = steps[min(k, len(steps) - 1)]
            assert set_subset(povs.span_to_set(ideal), iterate)


def test_nonzero_order_units_outside_lineality_are_never_infinitesimal(population):
    for sp in population:
        u = povs.regulator(sp)
        if all(v == 0 for v in u) or povs.lineality(sp).contains(u):
            continue
        if povs.has_order_unit(sp, u):
            assert not povs.infinitesimal_ideal(sp).contains(u)


def test_reduction_soundness_on_population_sample(population):
    problems = []
    for sp in population[:20]:
        if sp.dim > 2:
            continue
        derived = povs.derived_set(sp, sp.positive)
        pts = grid_points(sp.dim, 4, -1, 1, denoms=(1, 2, 4))
        sample = pts[:: max(1, len(pts) // 8)]
        problems += check_derived_set_against_brute_force(sp, sp.positive, derived, sample)
        problems += check_integer_reduction(sp, sample)
    assert problems == []


def test_reduction_soundness_for_arbitrary_target_sets(population):
    # derived sets are defined for any subset, not only the wedge itself;
    # exercise shifted and bounded targets against the witness oracle
    from povs_wb.semilin import Rel, make_cell, make_constraint, make_set, union

    unit_box = make_set(2, [make_cell(2, [
        make_constraint([-1, 0], Rel.LT, 0), make_constraint([1, 0], Rel.LE, 1),
        make_constraint([0, -1], Rel.LE, 0), make_constraint([0, 1], Rel.LT, 1),
    ])])
    shifted_ray = make_set(2, [make_cell(2, [
        make_constraint([-1, 0], Rel.LE, -1), make_constraint([0, 1], Rel.EQ, 2),
    ])])
    targets = [unit_box, shifted_ray, union(unit_box, shifted_ray)]
    problems = []
    for sp in [s for s in population if s.dim == 2][:6]:
        for s in targets:
            derived = povs.derived_set(sp, s)
            pts = grid_points(2, 4, -1, 2, denoms=(1, 2, 4))
            sample = pts[:: max(1, len(pts) // 10)]
            problems += check_derived_set_against_brute_force(sp, s, derived, sample)
    assert problems == []


def test_derived_set_of_empty_set_is_empty(population):
    from povs_wb.semilin import empty_set, is_empty
    for sp in population[:6]:
        assert is_empty(povs.derived_set(sp, empty_set(sp.dim)))
        res = povs.ru_closure(sp, empty_set(sp.dim))
        assert res.steps == 0 and is_empty(res.closure)


def test_derived_set_operator_is_idempotent(population):
    # order triangle inequality: a point order-close to something order-close
    # to S is order-close to S, so one derivation step already closes any set
    for sp in population:
        once = povs.derived_set(sp, sp.positive)
        twice = povs.derived_set(sp, once)
        assert set_equal(once, twice)
        assert povs.alpha_type(sp) <= 1


def test_quotient_by_infinitesimals_has_no_infinitesimals(population):
    # regulators lift from the quotient, and the kernel corrections are
    # uniformly dominated, so the tower stabilizes after one step
    for sp in population:
        ideal = povs.infinitesimal_ideal(sp)
        pres = povs.quotient_by(sp, ideal)
        assert povs.infinitesimal_ideal(pres.quotient).dim == 0
        assert povs.lambda_type(sp) <= 1


def test_lexicographic_generator_is_always_non_archimedean():
    for dim in (1, 2, 3):
        w = lex_wedge(dim)
        sp = povs.PreOrderedSpace(dim, w)
        assert povs.validate_wedge(dim, w).ok
        if dim == 1:
            assert povs.is_archimedean(sp)  # the ray order is closed
        else:
            assert not povs.is_archimedean(sp)
            assert povs.alpha_type(sp) == 1


def test_generator_is_deterministic():
    a = [random_space(random.Random(99), 2).positive for _ in range(1)]
    b = [random_space(random.Random(99), 2).positive for _ in range(1)]
    assert a == b
