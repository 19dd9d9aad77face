"""Acceptance gate: every release criterion at its stated tolerance.

All arithmetic is exact, so every tolerance is zero; a criterion passes only
with no mismatches at all. Each test prints one PASS/FAIL line (visible with
`pytest -s tests/test_acceptance.py`). The binding populations are fixed by
the seeds below.
"""

import random
import time
from fractions import Fraction as Q
from pathlib import Path

import pytest

from povs_wb import opmaps, povs, seqspace
from povs_wb.dsl import parse
from povs_wb.generators import random_positive_map_into_archimedean, random_space
from povs_wb.exactnum import mat_mul, vec
from povs_wb.report import to_json
from povs_wb.semilin import full_set, origin_only, set_equal
from povs_wb.workbench import build, run_search

from conftest import grid_points
from oracles import (
    check_derived_set_against_brute_force,
    check_integer_reduction,
)

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"
POPULATION_SEED = 20240815
MAP_SEED = 31337
SEQ_SEED = 777


def _line(criterion: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance] {criterion}: {status}{suffix}")
    assert ok, f"{criterion} failed{suffix}"


@pytest.fixture(scope="module")
def corpus_spaces():
    spaces = {}
    for path in sorted(CORPUS_DIR.glob("*.wb")):
        built = build(parse(path.read_text()))
        assert not built.invalid, f"corpus file {path.name} has an invalid wedge"
        for name, sp in built.spaces.items():
            spaces[f"{path.stem}:{name}"] = sp
    return spaces


@pytest.fixture(scope="module")
def population(corpus_spaces):
    rng = random.Random(POPULATION_SEED)
    generated = (
        [random_space(rng, 1) for _ in range(50)]
        + [random_space(rng, 2) for _ in range(100)]
        + [random_space(rng, 3) for _ in range(50)]
    )
    return list(corpus_spaces.values()) + generated


def test_criterion_1_archimedean_iff_ru_closed(population):
    start = time.monotonic()
    mismatches = [
        sp.positive.render()
        for sp in population
        if povs.is_archimedean(sp) != povs.is_ru_closed(sp, sp.positive)
    ]
    elapsed = time.monotonic() - start
    _line("1 closedness-equivalence suite",
          mismatches == [] and elapsed <= 300,
          f"{len(population)} spaces, {elapsed:.1f}s, {len(mismatches)} mismatches")


def test_criterion_2_quotient_is_archimedean_cone(population):
    failures = []
    for sp in population:
        try:
            pres = povs.archimedeanization(sp)
        except Exception as e:  # loud failure is a criterion failure
            failures.append(f"{sp.positive.render()}: {e}")
            continue
        if not povs.is_cone(pres.quotient):
            failures.append("quotient not a cone")
        elif not povs.is_archimedean(pres.quotient):
            failures.append("quotient not Archimedean")
        elif povs.is_majorizing(pres.quotient) != povs.is_majorizing(sp):
            failures.append("majorizing equivalence broken")
    _line("2 quotient construction suite", failures == [],
          f"{len(population)} spaces, {len(failures)} failures")


def test_criterion_3_factorization_is_exact():
    rng = random.Random(MAP_SEED)
    failures = []
    for _ in range(50):
        phi = random_positive_map_into_archimedean(rng, max_dim=2)
        factored = opmaps.factor_through_archimedeanization(phi)
        pres = povs.archimedeanization(phi.domain)
        if pres.quotient.dim:
            composed = mat_mul(factored.matrix, pres.projection)
        else:
            composed = tuple(tuple(Q(0) for _ in range(phi.domain.dim))
                             for _ in range(phi.codomain.dim))
        if composed != phi.matrix:
            failures.append("composition mismatch")
        elif not opmaps.is_positive(factored):
            failures.append("factored map not positive")
    _line("3 factorization suite", failures == [], f"50 maps, {len(failures)} failures")


def test_criterion_4_named_examples(corpus_spaces):
    problems = []

    lex = corpus_spaces["lex_plane:X"]
    if povs.alpha_type(lex) != 1 or povs.lambda_type(lex) != 1:
        problems.append("lexicographic types")
    pres = povs.archimedeanization(lex)
    if pres.kernel.basis != (vec([0, 1]),) or pres.quotient.dim != 1:
        problems.append("lexicographic kernel/quotient")
    if not set_equal(pres.quotient.positive,
                     parse("wedge R := (x1 >= 0)").wedges["R"].set_):
        problems.append("lexicographic quotient wedge")

    oh = corpus_spaces["open_half_plane:X"]
    if povs.alpha_type(oh) != 1 or povs.lambda_type(oh) != 1:
        problems.append("open-half-plane types")
    if povs.archimedeanization(oh).kernel.basis != (vec([1, 0]),):
        problems.append("open-half-plane kernel")

    quad = corpus_spaces["quadrant:X"]
    if povs.alpha_type(quad) != 0 or povs.lambda_type(quad) != 0:
        problems.append("quadrant types")
    if not povs.is_archimedean(quad) or not povs.is_almost_archimedean(quad):
        problems.append("quadrant predicates")

    _line("4 named-example ledger", problems == [], ", ".join(problems) or "3 spaces")


def test_criterion_5_reduction_soundness(corpus_spaces):
    problems = []
    checked = 0
    for name, sp in sorted(corpus_spaces.items()):
        if sp.dim == 0 or sp.dim > 3:
            continue
        derived = povs.derived_set(sp, sp.positive)
        if sp.dim <= 2:
            pts = grid_points(sp.dim, 16, -2, 2, denoms=(1, 2, 3, 4, 8, 16))
            sample = pts[:: max(1, len(pts) // 12)]
        else:
            pts = grid_points(sp.dim, 4, -1, 1, denoms=(1, 2, 4))
            sample = pts[:: max(1, len(pts) // 8)]
        checked += len(sample)
        problems += [f"{name}: {p}" for p in
                     check_derived_set_against_brute_force(sp, sp.positive, derived, sample)]
        problems += [f"{name}: {p}" for p in check_integer_reduction(sp, sample)]
    _line("5 reduction-soundness oracle suite", problems == [],
          f"{checked} spot checks, {len(problems)} disagreements")


def test_criterion_6_positive_maps_preserve_closed_sets():
    rng = random.Random(MAP_SEED + 1)
    failures = []
    for _ in range(20):
        t = random_positive_map_into_archimedean(rng, max_dim=2)
        targets = [t.codomain.positive, full_set(t.codomain.dim)]
        origin = origin_only(t.codomain.dim)
        if povs.is_ru_closed(t.codomain, origin):
            targets.append(origin)
        for s in targets:
            if not povs.is_ru_closed(t.codomain, s):
                continue
            if not opmaps.check_ru_continuity(t, s):
                failures.append("preimage not closed")
    _line("6 positive-map continuity suite", failures == [],
          f"20 maps, {len(failures)} failures")


def test_criterion_7_almost_archimedean_alpha_bullet(population):
    offenders = [
        sp.positive.render()
        for sp in population
        if povs.is_almost_archimedean(sp) and povs.alpha_type(sp) > 1
    ]
    _line("7 almost-Archimedean alpha bound", offenders == [],
          f"{len(population)} spaces, {len(offenders)} exceptions")


def test_criterion_8_sequence_space_witnesses():
    rng = random.Random(SEQ_SEED)
    failures = 0
    for _ in range(100):
        terms = {}
        geo = []
        pows = []
        if rng.random() < 0.7:
            den = rng.randint(2, 9)
            geo.append((rng.randint(-9, 9) or 1, Q(rng.randint(1, den - 1), den)))
        if rng.random() < 0.7:
            pows.append((rng.randint(-9, 9) or 1,
                         Q(rng.randint(1, 8), rng.choice([1, 2, 4]))))
        if rng.random() < 0.5:
            terms[rng.randint(1, 9)] = rng.randint(-99, 99)
        x = seqspace.sequence(finite=terms, geo=geo, pow=pows)
        if seqspace.is_infinitesimal_mod_c00(x, "c0") is None:
            failures += 1
    unit_ok = seqspace.is_infinitesimal_mod_c00(seqspace.sequence(const=1), "linf") is None
    _line("8 sequence-space witnesses", failures == 0 and unit_ok,
          f"100 elements, {failures} without regulator; unit non-infinitesimal: {unit_ok}")


def test_criterion_9_search_reports_are_byte_identical():
    report = run_search(2, 200, 42)
    first = to_json(report).encode()
    second = to_json(run_search(2, 200, 42)).encode()
    table = {(row["alpha"], row["lambda"]) for row in report["search"]["type_table"]}
    content_ok = ((0, 0) in table and (1, 1) in table
                  and report["search"]["violations"] == [])
    _line("9 reproducibility", first == second and content_ok,
          f"{len(first)} bytes per report, pairs {sorted(table)}")
