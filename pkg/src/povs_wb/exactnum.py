"""Exact rational linear algebra: vectors, matrices, solving, subspaces.

Scalars are ``fractions.Fraction`` (arbitrary precision, always reduced,
positive denominator). Vectors are tuples of Fractions, matrices tuples of
row tuples. Subspaces carry a canonical reduced-row-echelon basis so that
equality of subspaces is plain syntactic equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Q = Fraction

Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


class DimensionMismatch(ValueError):
    """Raised when operand dimensions are incompatible."""


def vec(entries: Iterable) -> Vector:
    return tuple(Q(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged matrix rows")
    return m


def zero_vec(dim: int) -> Vector:
    return (Q(0),) * dim


def unit_vec(i: int, dim: int) -> Vector:
    return tuple(Q(1) if j == i else Q(0) for j in range(dim))


def vec_add(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector dims {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector dims {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a: Vector) -> Vector:
    c = Q(c)
    return tuple(c * x for x in a)


def vec_neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def dot(a: Vector, b: Vector) -> Fraction:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector dims {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), Q(0))


def is_zero_vec(a: Vector) -> bool:
    return all(x == 0 for x in a)


def mat_vec(m: Matrix, x: Vector) -> Vector:
    if m and len(m[0]) != len(x):
        raise DimensionMismatch(f"matrix has {len(m[0])} columns, vector dim {len(x)}")
    return tuple(dot(row, x) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return ()
    if len(a[0]) != len(b):
        raise DimensionMismatch(f"inner dims {len(a[0])} vs {len(b)}")
    cols = len(b[0])
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Q(0)) for j in range(cols))
        for i in range(len(a))
    )


def mat_transpose(m: Matrix) -> Matrix:
    if not m:
        return ()
    return tuple(tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0])))


def identity(dim: int) -> Matrix:
    return tuple(unit_vec(i, dim) for i in range(dim))


def rref(rows: Sequence[Vector]) -> tuple[tuple[Vector, ...], list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot column list)."""
    work = [list(r) for r in rows]
    if not work:
        return (), []
    ncols = len(work[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        pv = work[r][c]
        work[r] = [x / pv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r]), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[0])


def solve(m: Matrix, b: Vector) -> Optional[Vector]:
    """One exact solution of M x = b, or None if the system is inconsistent.

    Underdetermined systems get free variables set to zero.
    """
    if len(m) != len(b):
        raise DimensionMismatch(f"matrix has {len(m)} rows, rhs dim {len(b)}")
    if not m:
        return ()
    ncols = len(m[0])
    augmented = [tuple(row) + (rhs,) for row, rhs in zip(m, b)]
    reduced, pivots = rref(augmented)
    if ncols in pivots:
        return None  # pivot in the rhs column: 0 = nonzero
    x = [Q(0)] * ncols  # free variables fixed at zero
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^d given by a canonical RREF basis."""

    ambient_dim: int
    basis: tuple[Vector, ...]

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[Vector]) -> "Subspace":
        vs = [vec(v) for v in vectors]
        for v in vs:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector dim {len(v)} in ambient {ambient_dim}")
        reduced, _ = rref(vs)
        return Subspace(ambient_dim, reduced)

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, identity(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector dim {len(v)} in ambient {self.ambient_dim}")
        reduced, _ = rref(list(self.basis) + [vec(v)])
        return len(reduced) == self.dim

    def add_vector(self, v: Vector) -> "Subspace":
        return Subspace.from_vectors(self.ambient_dim, list(self.basis) + [vec(v)])

    def sum(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("ambient dims differ")
        return Subspace.from_vectors(self.ambient_dim, list(self.basis) + list(other.basis))

    def annihilator_rows(self) -> Matrix:
        """Rows n with n . b = 0 for every basis vector b; they cut out the subspace."""
        if not self.basis:
            return identity(self.ambient_dim)
        return kernel_basis(tuple(self.basis)).basis


def kernel_basis(m: Matrix) -> Subspace:
    """Canonical basis of the null space {x : M x = 0}."""
    if not m:
        raise DimensionMismatch("kernel of a matrix with no rows is ambiguous; pass a zero row")
    ncols = len(m[0])
    reduced, pivots = rref(m)
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free_cols:
        v = [Q(0)] * ncols
        v[fc] = Q(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return Subspace.from_vectors(ncols, basis)


def complement_basis(s: Subspace) -> Subspace:
    """Deterministic complement: greedily extend s by standard basis vectors
    of smallest index until the whole space is spanned."""
    chosen: list[Vector] = []
    current = list(s.basis)
    for i in range(s.ambient_dim):
        if len(current) == s.ambient_dim:
            break
        e = unit_vec(i, s.ambient_dim)
        reduced, _ = rref(current + [e])
        if len(reduced) > len(current):
            chosen.append(e)
            current = list(reduced)
    return Subspace.from_vectors(s.ambient_dim, chosen)


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient dims differ")
    return a.basis == b.basis


def quotient_maps(kernel: Subspace) -> tuple[Matrix, Matrix]:
    """Projection pi and section sigma for the quotient by ``kernel``.

    pi is (d-k) x d with ker(pi) = kernel; sigma is d x (d-k) with
    pi . sigma = identity. Coordinates on the quotient come from the
    deterministic complement basis.
    """
    d = kernel.ambient_dim
    comp = complement_basis(kernel)
    stacked = mat(list(kernel.basis) + list(comp.basis))
    if len(stacked) != d:
        raise ValueError("kernel + complement do not span the ambient space")
    inv = mat_inverse(mat_transpose(stacked))
    pi = inv[kernel.dim:]
    sigma = mat_transpose(comp.basis) if comp.basis else tuple(() for _ in range(d))
    return pi, sigma


def mat_inverse(m: Matrix) -> Matrix:
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("inverse of a non-square matrix")
    augmented = [list(m[i]) + list(unit_vec(i, n)) for i in range(n)]
    reduced, pivots = rref(tuple(tuple(r) for r in augmented))
    if pivots[:n] != list(range(n)) or len(reduced) != n:
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in reduced)


def format_rational(x: Fraction) -> str:
    """Serialize exactly, '-3/4' style; integers without a denominator."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Q(text.strip())
