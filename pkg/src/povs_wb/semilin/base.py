"""Representations for semi-linear sets over Q^d.

A constraint is ``coeffs . x REL const`` with integer data (content 1), a
cell is a conjunction of constraints, a set is a finite union of cells.
All data is immutable and hashable so emptiness checks can be memoized.
"""

from __future__ import annotations

import enum
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from ..exactnum import Q, Vector


class CapacityError(RuntimeError):
    """A computation exceeded the configured cell or constraint budget."""


@dataclass(frozen=True)
class CapacityLimits:
    max_cells: int = 4096
    max_constraints: int = 1024


_limits: ContextVar[CapacityLimits] = ContextVar("semilin_limits", default=CapacityLimits())


def current_limits() -> CapacityLimits:
    return _limits.get()


class capacity_limits:
    """Context manager overriding the capacity budget within a block."""

    def __init__(self, max_cells: Optional[int] = None, max_constraints: Optional[int] = None):
        base = _limits.get()
        self._new = CapacityLimits(
            max_cells=max_cells if max_cells is not None else base.max_cells,
            max_constraints=max_constraints if max_constraints is not None else base.max_constraints,
        )
        self._token = None

    def __enter__(self):
        self._token = _limits.set(self._new)
        return self._new

    def __exit__(self, *exc):
        _limits.reset(self._token)
        return False


def check_cell_budget(n: int) -> None:
    lim = _limits.get()
    if n > lim.max_cells:
        raise CapacityError(f"cell count {n} exceeds budget {lim.max_cells}")


def check_constraint_budget(n: int) -> None:
    lim = _limits.get()
    if n > lim.max_constraints:
        raise CapacityError(f"constraint count {n} exceeds budget {lim.max_constraints}")


class Rel(enum.IntEnum):
    LT = 0
    LE = 1
    EQ = 2

    def symbol(self) -> str:
        return {Rel.LT: "<", Rel.LE: "<=", Rel.EQ: "="}[self]


@dataclass(frozen=True, slots=True)
class LinConstraint:
    """coeffs . x REL const with integer entries, gcd content 1."""

    coeffs: tuple[int, ...]
    rel: Rel
    const: int

    @property
    def is_ground(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def ground_truth(self) -> bool:
        """Truth value of a ground constraint (0 REL const)."""
        if self.rel == Rel.LT:
            return 0 < self.const
        if self.rel == Rel.LE:
            return 0 <= self.const
        return self.const == 0

    @property
    def is_homogeneous(self) -> bool:
        return self.const == 0

    def evaluate(self, point: Sequence[Fraction]) -> bool:
        lhs = sum((Q(c) * x for c, x in zip(self.coeffs, point)), Q(0))
        if self.rel == Rel.LT:
            return lhs < self.const
        if self.rel == Rel.LE:
            return lhs <= self.const
        return lhs == self.const

    def render(self, var_names: Optional[Sequence[str]] = None) -> str:
        parts: list[str] = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            name = var_names[i] if var_names else f"x{i + 1}"
            mag = name if abs(c) == 1 else f"{abs(c)}*{name}"
            if not parts:
                parts.append(mag if c > 0 else f"-{mag}")
            else:
                parts.append(f"+ {mag}" if c > 0 else f"- {mag}")
        lhs = " ".join(parts) if parts else "0"
        return f"{lhs} {self.rel.symbol()} {self.const}"


def make_constraint(coeffs: Sequence, rel: Rel, const) -> LinConstraint:
    """Normalize rational data to the canonical integer form."""
    fr = [Q(c) for c in coeffs] + [Q(const)]
    denom_lcm = 1
    for f in fr:
        denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
    ints = [int(f * denom_lcm) for f in fr]
    content = 0
    for v in ints:
        content = gcd(content, abs(v))
    if content > 1:
        ints = [v // content for v in ints]
    if rel == Rel.EQ:
        lead = next((v for v in ints[:-1] if v != 0), 0)
        if lead < 0:
            ints = [-v for v in ints]
    return LinConstraint(tuple(ints[:-1]), rel, ints[-1])


def negate_constraint(c: LinConstraint) -> list[LinConstraint]:
    """Constraints whose disjunction is the negation of c."""
    neg = tuple(-v for v in c.coeffs)
    if c.rel == Rel.LE:
        return [LinConstraint(neg, Rel.LT, -c.const)]
    if c.rel == Rel.LT:
        return [LinConstraint(neg, Rel.LE, -c.const)]
    return [
        LinConstraint(neg, Rel.LT, -c.const),
        LinConstraint(c.coeffs, Rel.LT, c.const),
    ]


def constraint_key(c: LinConstraint) -> tuple:
    return (c.coeffs, int(c.rel), c.const)


@dataclass(frozen=True, slots=True)
class Cell:
    """Conjunction of constraints; the convex building block of a set."""

    dim: int
    constraints: tuple[LinConstraint, ...]

    def evaluate(self, point: Sequence[Fraction]) -> bool:
        return all(c.evaluate(point) for c in self.constraints)

    @property
    def is_homogeneous(self) -> bool:
        return all(c.is_homogeneous for c in self.constraints)

    def render(self, var_names: Optional[Sequence[str]] = None) -> str:
        if not self.constraints:
            return "TRUE"
        return " & ".join(c.render(var_names) for c in self.constraints)


def make_cell(dim: int, constraints: Iterable[LinConstraint]) -> Optional[Cell]:
    """Canonical cell, or None when a ground contradiction is visible.

    Ground truths are dropped; duplicates removed; constraints sorted.
    """
    kept = []
    for c in constraints:
        if len(c.coeffs) != dim:
            raise ValueError(f"constraint width {len(c.coeffs)} in dim {dim}")
        if c.is_ground:
            if c.ground_truth:
                continue
            return None
        kept.append(c)
    kept = sorted(set(kept), key=constraint_key)
    check_constraint_budget(len(kept))
    return Cell(dim, tuple(kept))


@dataclass(frozen=True, slots=True)
class SemiLinearSet:
    """Finite union of cells in Q^dim."""

    dim: int
    cells: tuple[Cell, ...]

    def contains(self, point: Sequence[Fraction]) -> bool:
        pt = tuple(Q(x) for x in point)
        if len(pt) != self.dim:
            raise ValueError(f"point dim {len(pt)} vs ambient {self.dim}")
        return any(cell.evaluate(pt) for cell in self.cells)

    @property
    def is_homogeneous(self) -> bool:
        return all(cell.is_homogeneous for cell in self.cells)

    def render(self, var_names: Optional[Sequence[str]] = None) -> str:
        if not self.cells:
            return "EMPTY"
        return " | ".join(f"({cell.render(var_names)})" for cell in self.cells)


def make_set(dim: int, cells: Iterable[Optional[Cell]]) -> SemiLinearSet:
    """Union of cells with syntactic dedup; Nones (known-empty) dropped."""
    seen = {}
    for cell in cells:
        if cell is None:
            continue
        if cell.dim != dim:
            raise ValueError(f"cell dim {cell.dim} vs ambient {dim}")
        seen.setdefault(cell.constraints, cell)
    ordered = sorted(seen.values(), key=lambda cl: tuple(constraint_key(c) for c in cl.constraints))
    check_cell_budget(len(ordered))
    return SemiLinearSet(dim, tuple(ordered))


def empty_set(dim: int) -> SemiLinearSet:
    return SemiLinearSet(dim, ())


def full_set(dim: int) -> SemiLinearSet:
    return SemiLinearSet(dim, (Cell(dim, ()),))


def origin_only(dim: int) -> SemiLinearSet:
    cs = [make_constraint([1 if j == i else 0 for j in range(dim)], Rel.EQ, 0) for i in range(dim)]
    return make_set(dim, [make_cell(dim, cs)])


def constraint_from_vector(coeffs: Vector, rel: Rel, const) -> LinConstraint:
    return make_constraint(coeffs, rel, const)
