"""First-order formulas over linear rational arithmetic, and their
quantifier elimination down to semi-linear sets.

Variables are indices into a fixed width: 0..free_dim-1 are the free
(ambient) coordinates, the rest are bound. Existentials project per cell;
universals go through double complementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .base import (
    Rel,
    SemiLinearSet,
    make_cell,
    make_constraint,
    make_set,
)
from .setops import (
    complement,
    intersect,
    normalize,
    project_exists,
    restrict,
    union,
)


@dataclass(frozen=True)
class Atom:
    coeffs: tuple
    rel: Rel
    const: object = 0


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Exists:
    vars: tuple[int, ...]
    body: "Formula"


@dataclass(frozen=True)
class ForAll:
    vars: tuple[int, ...]
    body: "Formula"


Formula = Union[Atom, And, Or, Not, Exists, ForAll]


def atom(coeffs: Sequence, rel: Rel, const=0) -> Atom:
    return Atom(tuple(coeffs), rel, const)


def conj(*args: Formula) -> Formula:
    return And(tuple(args))


def disj(*args: Formula) -> Formula:
    return Or(tuple(args))


def exists(vars: Sequence[int], body: Formula) -> Formula:
    return Exists(tuple(vars), body)


def forall(vars: Sequence[int], body: Formula) -> Formula:
    return ForAll(tuple(vars), body)


class FormulaError(ValueError):
    pass


def _validate(f: Formula, width: int, free_dim: int) -> None:
    seen_bound: set[int] = set()

    def walk(node: Formula, in_scope: frozenset[int]) -> None:
        if isinstance(node, Atom):
            if len(node.coeffs) != width:
                raise FormulaError(f"atom width {len(node.coeffs)} != formula width {width}")
            for i, c in enumerate(node.coeffs):
                if c != 0 and i >= free_dim and i not in in_scope:
                    raise FormulaError(f"variable {i} used outside any quantifier")
        elif isinstance(node, (And, Or)):
            for a in node.args:
                walk(a, in_scope)
        elif isinstance(node, Not):
            walk(node.arg, in_scope)
        elif isinstance(node, (Exists, ForAll)):
            for v in node.vars:
                if v < free_dim:
                    raise FormulaError(f"cannot quantify free coordinate {v}")
                if v in seen_bound:
                    raise FormulaError(f"variable {v} quantified twice")
                seen_bound.add(v)
            walk(node.body, in_scope | set(node.vars))
        else:
            raise FormulaError(f"unknown formula node {node!r}")

    walk(f, frozenset())


def _eval(f: Formula, width: int) -> SemiLinearSet:
    if isinstance(f, Atom):
        cell = make_cell(width, [make_constraint(f.coeffs, f.rel, f.const)])
        return make_set(width, [cell])
    if isinstance(f, And):
        out = SemiLinearSet(width, (make_cell(width, []),))
        for a in f.args:
            out = intersect(out, _eval(a, width))
            out = normalize(out, deep=False)
        return out
    if isinstance(f, Or):
        out = SemiLinearSet(width, ())
        for a in f.args:
            out = union(out, _eval(a, width))
        return out
    if isinstance(f, Not):
        return complement(_eval(f.arg, width))
    if isinstance(f, Exists):
        return normalize(project_exists(_eval(f.body, width), f.vars), deep=False)
    if isinstance(f, ForAll):
        inner = complement(_eval(f.body, width))
        return complement(normalize(project_exists(inner, f.vars), deep=False))
    raise FormulaError(f"unknown formula node {f!r}")


def qe(f: Formula, width: int, free_dim: int) -> SemiLinearSet:
    """Eliminate all quantifiers; result lives over coordinates 0..free_dim-1."""
    _validate(f, width, free_dim)
    full = _eval(f, width)
    for cell in full.cells:
        for c in cell.constraints:
            if any(c.coeffs[i] != 0 for i in range(free_dim, width)):
                raise FormulaError("bound variable survived elimination")
    return normalize(restrict(full, list(range(free_dim))))


def evaluate_formula(f: Formula, point: Sequence, width: int) -> bool:
    """Direct truth evaluation with all free variables given.

    Quantified subformulas are not allowed here; use qe for those.
    """
    from ..exactnum import Q

    pt = [Q(x) for x in point]
    if isinstance(f, Atom):
        return make_constraint(f.coeffs, f.rel, f.const).evaluate(pt)
    if isinstance(f, And):
        return all(evaluate_formula(a, pt, width) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate_formula(a, pt, width) for a in f.args)
    if isinstance(f, Not):
        return not evaluate_formula(f.arg, pt, width)
    raise FormulaError("cannot directly evaluate a quantified formula")
