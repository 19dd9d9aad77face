"""Fourier-Motzkin elimination over integer-normalized constraints.

Elimination is exact: equalities are used for substitution first, and a
resolvent of two inequalities is strict iff either parent is strict.
Emptiness of a cell is decided by eliminating every variable and checking
the ground constraints that remain.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from ..exactnum import Q, Vector
from .base import (
    CapacityError,
    Cell,
    LinConstraint,
    Rel,
    check_constraint_budget,
    constraint_key,
)


def _normalize_ints(coeffs: list[int], rel: Rel, const: int) -> Optional[LinConstraint]:
    """Reduce content; None for ground truths, ground falsehoods raise _Contradiction."""
    content = 0
    for v in coeffs:
        content = gcd(content, abs(v))
    content = gcd(content, abs(const))
    if content > 1:
        coeffs = [v // content for v in coeffs]
        const //= content
    c = LinConstraint(tuple(coeffs), rel, const)
    if c.is_ground:
        if c.ground_truth:
            return None
        raise _Contradiction
    if rel == Rel.EQ:
        lead = next((v for v in c.coeffs if v != 0), 0)
        if lead < 0:
            c = LinConstraint(tuple(-v for v in c.coeffs), rel, -const)
    return c


class _Contradiction(Exception):
    pass


def _combine(a: LinConstraint, ka: int, b: LinConstraint, kb: int, rel: Rel) -> Optional[LinConstraint]:
    """ka*a + kb*b with the given relation; ka, kb > 0 except for EQ rows."""
    coeffs = [ka * x + kb * y for x, y in zip(a.coeffs, b.coeffs)]
    const = ka * a.const + kb * b.const
    return _normalize_ints(coeffs, rel, const)


def tighten(constraints: Sequence[LinConstraint]) -> Optional[list[LinConstraint]]:
    """Cheap simplification: dedupe, merge parallel constraints, spot
    contradictions between opposite bounds. None means provably empty.

    Constraints are content-normalized, so parallel constraints of the same
    orientation share identical coefficient tuples.
    """
    ups: dict[tuple[int, ...], tuple[Rel, Fraction, LinConstraint]] = {}
    eqs: dict[tuple[int, ...], tuple[Fraction, LinConstraint]] = {}
    for c in constraints:
        if c.is_ground:
            if not c.ground_truth:
                return None
            continue
        if c.rel == Rel.EQ:
            val = Q(c.const)
            prev = eqs.get(c.coeffs)
            if prev is not None and prev[0] != val:
                return None
            eqs[c.coeffs] = (val, c)
        else:
            bound = Q(c.const)
            prev = ups.get(c.coeffs)
            if prev is None or bound < prev[1] or (bound == prev[1] and c.rel == Rel.LT):
                ups[c.coeffs] = (c.rel, bound, c)

    for key, (val, _eqc) in eqs.items():
        up = ups.get(key)
        if up is not None:
            rel, bound, _ = up
            if val > bound or (val == bound and rel == Rel.LT):
                return None
            ups.pop(key)
        neg_key = tuple(-v for v in key)
        dn = ups.get(neg_key)
        if dn is not None:
            rel, bound, _ = dn
            # neg_key . x <= bound  <=>  key . x >= -bound
            if -bound > val or (-bound == val and rel == Rel.LT):
                return None
            ups.pop(neg_key)
    for key, (rel, bound, _c) in list(ups.items()):
        if key not in ups:
            continue  # consumed by an earlier merge
        neg_key = tuple(-v for v in key)
        dn = ups.get(neg_key)
        if dn is None:
            continue
        drel, dbound, _ = dn
        # key.x <= bound together with key.x >= -dbound
        if -dbound > bound:
            return None
        if -dbound == bound:
            if rel == Rel.LT or drel == Rel.LT:
                return None
            # opposite non-strict bounds meet: collapse to an equality
            ups.pop(key)
            ups.pop(neg_key)
            lead = next(v for v in key if v != 0)
            if lead > 0:
                eqs[key] = (bound, LinConstraint(key, Rel.EQ, int(bound)))
            else:
                eqs[neg_key] = (dbound, LinConstraint(neg_key, Rel.EQ, int(dbound)))

    out = [c for _, _, c in ups.values()] + [c for _, c in eqs.values()]
    return sorted(set(out), key=constraint_key)


def eliminate_variable(constraints: Sequence[LinConstraint], var: int) -> Optional[list[LinConstraint]]:
    """Project away one variable. None means the system is empty."""
    eq_pivot = None
    for c in constraints:
        if c.rel == Rel.EQ and c.coeffs[var] != 0:
            eq_pivot = c
            break
    out: list[LinConstraint] = []
    try:
        if eq_pivot is not None:
            beta = eq_pivot.coeffs[var]
            for c in constraints:
                if c is eq_pivot:
                    continue
                alpha = c.coeffs[var]
                if alpha == 0:
                    out.append(c)
                    continue
                # positive multiplier on c keeps the relation direction
                if beta > 0:
                    nc = _combine(c, beta, eq_pivot, -alpha, c.rel)
                else:
                    nc = _combine(c, -beta, eq_pivot, alpha, c.rel)
                if nc is not None:
                    out.append(nc)
            return tighten(out)

        uppers = [c for c in constraints if c.coeffs[var] > 0]
        lowers = [c for c in constraints if c.coeffs[var] < 0]
        rest = [c for c in constraints if c.coeffs[var] == 0]
        out.extend(rest)
        for u in uppers:
            for lo in lowers:
                rel = Rel.LT if (u.rel == Rel.LT or lo.rel == Rel.LT) else Rel.LE
                nc = _combine(u, -lo.coeffs[var], lo, u.coeffs[var], rel)
                if nc is not None:
                    out.append(nc)
        check_constraint_budget(len(out))
    except _Contradiction:
        return None
    return tighten(out)


def _vars_present(constraints: Sequence[LinConstraint], dim: int) -> list[int]:
    present = [False] * dim
    for c in constraints:
        for i, v in enumerate(c.coeffs):
            if v != 0:
                present[i] = True
    return [i for i, p in enumerate(present) if p]


def _pick_variable(constraints: Sequence[LinConstraint], candidates: Sequence[int]) -> int:
    """Prefer equality pivots, then the variable with the smallest pos*neg fan-out."""
    best, best_cost = candidates[0], None
    for v in candidates:
        pos = neg = 0
        has_eq = False
        for c in constraints:
            cv = c.coeffs[v]
            if cv == 0:
                continue
            if c.rel == Rel.EQ:
                has_eq = True
                break
            if cv > 0:
                pos += 1
            else:
                neg += 1
        cost = -1 if has_eq else pos * neg - (pos + neg)
        if best_cost is None or cost < best_cost:
            best, best_cost = v, cost
            if cost == -1:
                break
    return best


_REDUNDANCY_THRESHOLD = 40


def drop_implied(constraints: list[LinConstraint]) -> Optional[list[LinConstraint]]:
    """Remove constraints implied by the rest (full implication check).

    The classic counterweight to resolvent growth: each candidate c is
    implied iff the others plus the negation of c form an empty system.
    """
    work = tighten(constraints)
    if work is None:
        return None
    i = 0
    while i < len(work):
        c = work[i]
        others = work[:i] + work[i + 1:]
        implied = True
        for neg in _negate(c):
            probe = tighten(others + [neg])
            if probe is None:
                continue
            try:
                if _satisfiable(tuple(probe), len(c.coeffs)):
                    implied = False
                    break
            except CapacityError:
                implied = False  # too expensive to certify; keep the constraint
                break
        if implied:
            work.pop(i)
        else:
            i += 1
    return work


def _negate(c: LinConstraint) -> list[LinConstraint]:
    neg = tuple(-v for v in c.coeffs)
    if c.rel == Rel.LE:
        return [LinConstraint(neg, Rel.LT, -c.const)]
    if c.rel == Rel.LT:
        return [LinConstraint(neg, Rel.LE, -c.const)]
    return [LinConstraint(neg, Rel.LT, -c.const), LinConstraint(c.coeffs, Rel.LT, c.const)]


def _satisfiable(constraints: tuple[LinConstraint, ...], dim: int) -> bool:
    return project(constraints, dim, _vars_present(constraints, dim), reduce=False) is not None


def project(constraints: Sequence[LinConstraint], dim: int, vars_to_drop: Sequence[int],
            reduce: bool = True) -> Optional[list[LinConstraint]]:
    """Eliminate the given variables; None means empty.

    When an elimination step balloons the system, implied constraints are
    swept out before continuing; without this the resolvent count compounds
    across variables. Implication probes themselves run unreduced.
    """
    work = tighten(constraints)
    if work is None:
        return None
    remaining = [v for v in vars_to_drop if any(c.coeffs[v] != 0 for c in work)]
    while remaining:
        var = _pick_variable(work, remaining)
        work = eliminate_variable(work, var)
        if work is None:
            return None
        if reduce and len(work) > _REDUNDANCY_THRESHOLD:
            work = drop_implied(work)
            if work is None:
                return None
        remaining = [v for v in remaining if v != var and any(c.coeffs[v] != 0 for c in work)]
    return work


@lru_cache(maxsize=1 << 18)
def _empty_constraints(dim: int, constraints: tuple[LinConstraint, ...]) -> bool:
    return project(constraints, dim, _vars_present(constraints, dim)) is None


def cell_is_empty(cell: Cell) -> bool:
    """True iff no rational point satisfies the cell."""
    return _empty_constraints(cell.dim, cell.constraints)


def clear_caches() -> None:
    _empty_constraints.cache_clear()


def sample_point(cell: Cell) -> Optional[Vector]:
    """A rational point in the cell, or None if it is empty.

    Eliminates variables while recording the bounds each one faced, then
    assigns values back-to-front inside the recorded intervals.
    """
    constraints = tighten(cell.constraints)
    if constraints is None:
        return None
    dim = cell.dim
    stack: list[tuple] = []
    work = constraints
    remaining = _vars_present(work, dim)
    while remaining:
        var = _pick_variable(work, remaining)
        eq_pivot = next((c for c in work if c.rel == Rel.EQ and c.coeffs[var] != 0), None)
        if eq_pivot is not None:
            stack.append(("eq", var, eq_pivot))
        else:
            ups = [c for c in work if c.coeffs[var] > 0]
            downs = [c for c in work if c.coeffs[var] < 0]
            stack.append(("bounds", var, ups, downs))
        work = eliminate_variable(work, var)
        if work is None:
            return None
        remaining = [v for v in remaining if v != var and any(c.coeffs[v] != 0 for c in work)]

    point: list[Fraction] = [Q(0)] * dim
    for entry in reversed(stack):
        if entry[0] == "eq":
            _, var, eqc = entry
            rest = sum((Q(c) * point[i] for i, c in enumerate(eqc.coeffs) if i != var), Q(0))
            point[var] = (Q(eqc.const) - rest) / eqc.coeffs[var]
        else:
            _, var, ups, downs = entry
            hi: Optional[Fraction] = None
            hi_strict = False
            lo: Optional[Fraction] = None
            lo_strict = False
            for c in ups:
                rest = sum((Q(k) * point[i] for i, k in enumerate(c.coeffs) if i != var), Q(0))
                bound = (Q(c.const) - rest) / c.coeffs[var]
                if hi is None or bound < hi or (bound == hi and c.rel == Rel.LT):
                    hi, hi_strict = bound, c.rel == Rel.LT
            for c in downs:
                rest = sum((Q(k) * point[i] for i, k in enumerate(c.coeffs) if i != var), Q(0))
                bound = (Q(c.const) - rest) / c.coeffs[var]  # negative divisor flips
                if lo is None or bound > lo or (bound == lo and c.rel == Rel.LT):
                    lo, lo_strict = bound, c.rel == Rel.LT
            if lo is None and hi is None:
                point[var] = Q(0)
            elif lo is None:
                point[var] = hi - 1 if hi_strict else hi
            elif hi is None:
                point[var] = lo + 1 if lo_strict else lo
            elif lo == hi:
                point[var] = lo
            else:
                point[var] = (lo + hi) / 2
    result = tuple(point)
    if not cell.evaluate(result):
        raise AssertionError("sampled point violates its cell; elimination bug")
    return result
