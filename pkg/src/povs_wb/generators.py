"""Random valid wedges for property suites and the search command.

Plain rejection sampling rarely yields wedges that are not already closed,
so the mix includes lexicographic-style constructions (strict leading
coordinate over a recursive tail order), optionally pushed through a random
invertible change of coordinates, and open cones glued to the origin.
"""

from __future__ import annotations

import random

from .exactnum import Q, identity, mat
from .povs import PreOrderedSpace, validate_wedge
from .semilin import (
    Rel,
    SemiLinearSet,
    full_set,
    linear_image,
    make_cell,
    make_constraint,
    make_set,
    normalize,
    origin_only,
    union,
)


def lex_wedge(dim: int) -> SemiLinearSet:
    """{x1 > 0} union ({x1 = 0} and lex order on the tail); dim >= 1."""
    if dim < 1:
        raise ValueError("lexicographic wedge needs dimension >= 1")
    cells = []
    for lead in range(dim):
        cs = [make_constraint([1 if j == i else 0 for j in range(dim)], Rel.EQ, 0)
              for i in range(lead)]
        last_rel = Rel.LT if lead < dim - 1 else Rel.LE
        cs.append(make_constraint([-1 if j == lead else 0 for j in range(dim)], last_rel, 0))
        cells.append(make_cell(dim, cs))
    return make_set(dim, cells)


def _random_invertible(rng: random.Random, dim: int) -> tuple:
    m = [list(row) for row in identity(dim)]
    for _ in range(dim * 2):
        i, j = rng.randrange(dim), rng.randrange(dim)
        if i == j:
            continue
        c = Q(rng.choice([-2, -1, 1, 2]))
        for k in range(dim):
            m[i][k] += c * m[j][k]
    return mat(m)


def _random_homogeneous_cell(rng: random.Random, dim: int, strict_ok: bool = True) -> SemiLinearSet:
    n = rng.randint(1, 4)
    cs = []
    for _ in range(n):
        coeffs = [rng.randint(-3, 3) for _ in range(dim)]
        if all(c == 0 for c in coeffs):
            coeffs[rng.randrange(dim)] = 1
        rel = Rel.LT if (strict_ok and rng.random() < 0.4) else Rel.LE
        cs.append(make_constraint(coeffs, rel, 0))
    return make_set(dim, [make_cell(dim, cs)])


def _candidate(rng: random.Random, dim: int) -> SemiLinearSet:
    style = rng.random()
    if style < 0.40:
        # union of random cells; keep one non-strict cell so 0 can belong
        parts = [_random_homogeneous_cell(rng, dim, strict_ok=False)]
        for _ in range(rng.randint(0, 2)):
            parts.append(_random_homogeneous_cell(rng, dim))
        out = parts[0]
        for p in parts[1:]:
            out = union(out, p)
        return out
    if style < 0.60:
        w = lex_wedge(dim)
        if rng.random() < 0.7:
            w = normalize(linear_image(w, _random_invertible(rng, dim)))
        return w
    if style < 0.80:
        # open cone with the origin glued back in
        open_part = _random_homogeneous_cell(rng, dim)
        strictified = make_set(dim, [
            make_cell(dim, [make_constraint(c.coeffs, Rel.LT if c.rel != Rel.EQ else Rel.EQ, 0)
                            for c in cell.constraints])
            for cell in open_part.cells
        ])
        return union(strictified, origin_only(dim))
    if style < 0.90:
        return _random_homogeneous_cell(rng, dim, strict_ok=False)
    return full_set(dim) if rng.random() < 0.5 else origin_only(dim)


def random_space(rng: random.Random, dim: int, max_tries: int = 200) -> PreOrderedSpace:
    """A validated random pre-ordered space; raises after max_tries."""
    for _ in range(max_tries):
        w = _candidate(rng, dim)
        v = validate_wedge(dim, w)
        if v.ok:
            return PreOrderedSpace(dim, normalize(w))
    raise RuntimeError(f"could not generate a valid wedge in dim {dim} after {max_tries} tries")


def random_spaces(seed: int, dim: int, count: int) -> list[PreOrderedSpace]:
    rng = random.Random(seed)
    return [random_space(rng, dim) for _ in range(count)]


def random_positive_map_into_archimedean(rng: random.Random, max_dim: int = 2):
    """A positive map whose codomain is an Archimedean cone; for the
    factorization suites. Returns (LinearMap, built lazily by caller)."""
    from .opmaps import LinearMap, is_positive
    from .povs import is_archimedean, is_cone

    while True:
        dd = rng.randint(1, max_dim)
        dc = rng.randint(1, max_dim)
        dom = random_space(rng, dd)
        cod = random_space(rng, dc)
        if not (is_archimedean(cod) and is_cone(cod)):
            continue
        rows = [[Q(rng.randint(-2, 2)) for _ in range(dd)] for _ in range(dc)]
        t = LinearMap(mat(rows), dom, cod)
        if is_positive(t):
            return t
