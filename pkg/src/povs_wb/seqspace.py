"""Symbolic bounded sequences with decidable eventual order.

The grammar covers finitely supported perturbations plus geometric decay
c*q^k (0<q<1), power decay c*k^(-p) (p>0 rational), and constants. That is
enough to express witnesses for the infinitesimal structure of the
quotients of bounded-sequence spaces by the finitely supported ones.

Comparisons are exact. Values at one index mix rationals with radicals
k^(-p); signs are decided by reducing to a polynomial in a single radical
of known algebraic degree and refining integer-root intervals, never by
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .exactnum import Q


def integer_root(n: int, b: int) -> int:
    """Largest a >= 0 with a**b <= n (n >= 0, b >= 1)."""
    if n < 0 or b < 1:
        raise ValueError("integer_root needs n >= 0, b >= 1")
    if n in (0, 1) or b == 1:
        return n
    hi = 1 << (n.bit_length() // b + 1)
    lo = 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** b <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class SymbolicSequence:
    """finite part + sum of c*q^k + sum of c*k^(-p) + constant."""

    finite_part: tuple[tuple[int, Fraction], ...] = ()
    geo_terms: tuple[tuple[Fraction, Fraction], ...] = ()   # (c, q), 0 < q < 1
    pow_terms: tuple[tuple[Fraction, Fraction], ...] = ()   # (c, p), p > 0
    const_term: Fraction = Q(0)

    def __add__(self, other: "SymbolicSequence") -> "SymbolicSequence":
        fin = dict(self.finite_part)
        for k, v in other.finite_part:
            fin[k] = fin.get(k, Q(0)) + v
        return sequence(
            finite=fin,
            geo=list(self.geo_terms) + list(other.geo_terms),
            pow=list(self.pow_terms) + list(other.pow_terms),
            const=self.const_term + other.const_term,
        )

    def __neg__(self) -> "SymbolicSequence":
        return self.scale(Q(-1))

    def __sub__(self, other: "SymbolicSequence") -> "SymbolicSequence":
        return self + (-other)

    def scale(self, c) -> "SymbolicSequence":
        c = Q(c)
        return sequence(
            finite={k: c * v for k, v in self.finite_part},
            geo=[(c * g, q) for g, q in self.geo_terms],
            pow=[(c * g, p) for g, p in self.pow_terms],
            const=c * self.const_term,
        )

    @property
    def support_max(self) -> int:
        return max((k for k, _ in self.finite_part), default=0)

    def is_zero(self) -> bool:
        return not self.finite_part and not self.geo_terms and not self.pow_terms and self.const_term == 0


def sequence(finite=None, geo=None, pow=None, const=0) -> SymbolicSequence:
    """Canonical constructor: merge equal ratios/exponents, drop zeros."""
    fin = {}
    for k, v in (finite or {}).items():
        k = int(k)
        if k < 1:
            raise ValueError("sequence indices start at 1")
        v = Q(v)
        if v != 0:
            fin[k] = v
    geo_map: dict[Fraction, Fraction] = {}
    for c, q in geo or []:
        c, q = Q(c), Q(q)
        if not (0 < q < 1):
            raise ValueError(f"geometric ratio must satisfy 0 < q < 1, got {q}")
        geo_map[q] = geo_map.get(q, Q(0)) + c
    pow_map: dict[Fraction, Fraction] = {}
    for c, p in pow or []:
        c, p = Q(c), Q(p)
        if p <= 0:
            raise ValueError(f"power-decay exponent must be positive, got {p}")
        pow_map[p] = pow_map.get(p, Q(0)) + c
    return SymbolicSequence(
        finite_part=tuple(sorted((k, v) for k, v in fin.items())),
        geo_terms=tuple(sorted(((c, q) for q, c in geo_map.items() if c != 0), key=lambda t: (-t[1], t[0]))),
        pow_terms=tuple(sorted(((c, p) for p, c in pow_map.items() if c != 0), key=lambda t: (t[1], t[0]))),
        const_term=Q(const),
    )


def classify(x: SymbolicSequence) -> str:
    """'c00' (finite support), 'c0' (vanishing), or 'linf' (bounded)."""
    if not x.geo_terms and not x.pow_terms and x.const_term == 0:
        return "c00"
    if x.const_term == 0:
        return "c0"
    return "linf"


def sign_at(x: SymbolicSequence, k: int) -> int:
    """Exact sign of x_k (-1, 0, or 1)."""
    if k < 1:
        raise ValueError("indices start at 1")
    rational = x.const_term + Q(dict(x.finite_part).get(k, 0))
    for c, q in x.geo_terms:
        rational += c * q ** k
    if not x.pow_terms:
        return (rational > 0) - (rational < 0)
    # common radical: u = k^(-1/B), exponents e_i = a_i * B / b_i
    b_lcm = 1
    for _, p in x.pow_terms:
        b_lcm = b_lcm * p.denominator // gcd(b_lcm, p.denominator)
    exps = {}
    for c, p in x.pow_terms:
        e = p.numerator * (b_lcm // p.denominator)
        exps[e] = exps.get(e, Q(0)) + c
    # largest divisor r of B with k a perfect r-th power
    r_best, m = 1, k
    for r in range(b_lcm, 1, -1):
        if b_lcm % r == 0:
            a = integer_root(k, r)
            if a ** r == k:
                r_best, m = r, a
                break
    b_red = b_lcm // r_best  # u = m^(-1/b_red), degree exactly b_red over Q
    # reduce exponents modulo u^b_red = 1/m
    poly = [Q(0)] * b_red
    for e, c in exps.items():
        quot, rem = divmod(e, b_red)
        poly[rem] += c * Q(1, m) ** quot
    poly[0] += rational
    if all(c == 0 for c in poly):
        return 0
    if b_red == 1 or m == 1:
        val = poly[0] if b_red == 1 else sum(poly)
        return (val > 0) - (val < 0)
    # interval refinement around u = m^(-1/b_red) in (0, 1)
    s = 8
    while True:
        root = integer_root(m * (1 << (s * b_red)), b_red)
        lo_u = Q(1 << s, root + 1)
        hi_u = Q(1 << s, root)
        lo_total, hi_total = Q(0), Q(0)
        for j, c in enumerate(poly):
            lo_pow = lo_u ** j
            hi_pow = hi_u ** j
            if c >= 0:
                lo_total += c * lo_pow
                hi_total += c * hi_pow
            else:
                lo_total += c * hi_pow
                hi_total += c * lo_pow
        if lo_total > 0:
            return 1
        if hi_total < 0:
            return -1
        s *= 2
        if s > 1 << 16:
            raise AssertionError("sign refinement failed to converge; degree analysis is wrong")


def leq_at(x: SymbolicSequence, y: SymbolicSequence, k: int) -> bool:
    return sign_at(y - x, k) >= 0


_RANK_CONST = 3
_RANK_POW = 2
_RANK_GEO = 1


def _asymptotic_terms(x: SymbolicSequence) -> list[tuple[tuple, Fraction, tuple]]:
    """(rank_key, coeff, descriptor) sorted by descending dominance.

    Dominance order: constants, then k^(-p) by ascending p, then q^k by
    descending q.
    """
    terms = []
    if x.const_term != 0:
        terms.append(((_RANK_CONST, Q(0)), x.const_term, ("const",)))
    for c, p in x.pow_terms:
        terms.append(((_RANK_POW, -p), c, ("pow", p)))
    for c, q in x.geo_terms:
        terms.append(((_RANK_GEO, q), c, ("geo", q)))
    terms.sort(key=lambda t: t[0], reverse=True)
    return terms


def _min_k_power_at_least(delta: Fraction, ratio: Fraction) -> int:
    """Smallest k >= 1 with k**delta >= ratio (delta > 0)."""
    if ratio <= 1:
        return 1
    a, b = delta.numerator, delta.denominator
    target = ratio ** b  # k^a >= target
    k = 1
    while Q(k) ** a < target:
        k *= 2
    lo, hi = k // 2, k
    while lo < hi:
        mid = (lo + hi) // 2
        if Q(mid) ** a >= target:
            hi = mid
        else:
            lo = mid + 1
    return max(1, hi)


def _min_k_geo_at_most(q: Fraction, ratio: Fraction) -> int:
    """Smallest k >= 1 with q**k <= ratio (0 < q < 1)."""
    if ratio >= q:
        return 1
    if ratio <= 0:
        raise ValueError("ratio must be positive")
    k = 1
    while q ** k > ratio:
        k *= 2
    lo, hi = k // 2, k
    while lo < hi:
        mid = (lo + hi) // 2
        if q ** mid <= ratio:
            hi = mid
        else:
            lo = mid + 1
    return max(1, hi)


def _min_k_geo_power_product(q: Fraction, p: Fraction, ratio: Fraction) -> int:
    """Smallest sound k with q**k * k**p <= ratio for all larger k."""
    a, b = p.numerator, p.denominator
    inv_q_b = (1 / q) ** b
    k1 = 1
    while Q(k1 + 1, k1) ** a >= inv_q_b:  # decreasing beyond the first k failing this
        k1 *= 2
    target = ratio ** b
    k = k1
    while (q ** (k * b)) * Q(k) ** a > target:
        k *= 2
    lo, hi = max(k1, k // 2), k
    while lo < hi:
        mid = (lo + hi) // 2
        if (q ** (mid * b)) * Q(mid) ** a <= target:
            hi = mid
        else:
            lo = mid + 1
    return max(1, hi)


_MINIMIZE_SCAN_LIMIT = 4096


def eventually_leq(x: SymbolicSequence, y: SymbolicSequence) -> Optional[int]:
    """Threshold K with x_k <= y_k for all k >= max(K, 1), or None.

    Decided by term dominance of the difference; the crossover bound from
    the leading terms is then tightened by exact pointwise checks.
    """
    d = y - x
    terms = _asymptotic_terms(d)
    support_bound = d.support_max + 1
    if not terms:
        k0 = support_bound
    else:
        (lead_key, lead_coeff, lead_desc) = terms[0]
        if lead_coeff < 0:
            return None
        others = terms[1:]
        m = len(others)
        budget = lead_coeff / m if m else None
        k0 = support_bound
        for _, c, desc in others:
            ratio = abs(c) / budget
            if lead_desc[0] == "const":
                if desc[0] == "pow":
                    k_i = _min_k_power_at_least(desc[1], ratio)
                else:
                    k_i = _min_k_geo_at_most(desc[1], 1 / ratio) if ratio > 0 else 1
            elif lead_desc[0] == "pow":
                if desc[0] == "pow":
                    k_i = _min_k_power_at_least(desc[1] - lead_desc[1], ratio)
                else:
                    k_i = _min_k_geo_power_product(desc[1], lead_desc[1], 1 / ratio)
            else:  # lead geo, other geo with smaller q
                k_i = _min_k_geo_at_most(desc[1] / lead_desc[1], 1 / ratio)
            k0 = max(k0, k_i)
    k0 = max(k0, 1)
    if k0 > _MINIMIZE_SCAN_LIMIT:
        # exact evaluation at astronomical k would materialize q**k; the
        # pairwise bounds already guarantee soundness of k0
        return k0
    if sign_at(d, k0) < 0:
        raise AssertionError("crossover bound analysis produced an unsound threshold")
    k = k0
    while k > 1 and sign_at(d, k - 1) >= 0:
        k -= 1
    return 0 if k == 1 else k


@dataclass(frozen=True)
class RegulatorWitness:
    regulator: SymbolicSequence
    thresholds: tuple[tuple[int, int], ...]  # (n, K_n) spot checks
    note: str


def _rank_of(x: SymbolicSequence) -> Optional[tuple]:
    terms = _asymptotic_terms(x)
    return terms[0][0] if terms else None


def _regulator_candidates(x: SymbolicSequence, ambient: str) -> list[SymbolicSequence]:
    cands: list[SymbolicSequence] = []
    for _c, p in x.pow_terms:
        cands.append(sequence(pow=[(Q(1), p / 2)]))
    for _c, q in x.geo_terms:
        cands.append(sequence(geo=[(Q(1), (1 + q) / 2)]))
    if ambient == "linf":
        cands.append(sequence(const=1))
    cands.sort(key=lambda c: _rank_of(c), reverse=True)
    out = []
    for c in cands:
        if c not in out:
            out.append(c)
    return out


def is_infinitesimal_mod_c00(x: SymbolicSequence, ambient: str) -> Optional[RegulatorWitness]:
    """A regulator y in the ambient space with n|x| <= y eventually for
    every n, or None when the candidate family is exhausted.

    Works modulo finite support: the finite part of x never matters.
    """
    if ambient not in ("c0", "linf"):
        raise ValueError("ambient must be 'c0' or 'linf'")
    kind = classify(x)
    order = {"c00": 0, "c0": 1, "linf": 2}
    if order[kind] > order[ambient]:
        raise ValueError(f"element of {kind} does not live inside {ambient}")
    if kind == "c00":
        return RegulatorWitness(sequence(), ((1, x.support_max + 1),),
                                "finitely supported: zero regulator suffices")
    rank_x = _rank_of(x)
    for y in _regulator_candidates(x, ambient):
        rank_y = _rank_of(y)
        if rank_y is None or rank_y <= rank_x:
            continue
        thresholds = []
        ok = True
        n = 1
        while n <= 1024:
            k_up = eventually_leq(x.scale(n), y)
            k_dn = eventually_leq(x.scale(-n), y)
            if k_up is None or k_dn is None:
                ok = False
                break
            thresholds.append((n, max(k_up, k_dn)))
            n *= 4
        if ok:
            desc = describe(y)
            return RegulatorWitness(y, tuple(thresholds),
                                    f"dominates strictly: regulator {desc} has higher decay rank")
    return None


def describe(x: SymbolicSequence) -> str:
    parts = []
    for k, v in x.finite_part:
        parts.append(f"{v}@{k}")
    for c, q in x.geo_terms:
        parts.append(f"{c}*({q})^k")
    for c, p in x.pow_terms:
        parts.append(f"{c}*k^(-{p})")
    if x.const_term != 0:
        parts.append(f"{x.const_term}")
    return " + ".join(parts) if parts else "0"


def bounding_constant(x: SymbolicSequence) -> Fraction:
    """A rational B with |x_k| <= B for all k >= 1."""
    base = abs(x.const_term)
    for c, _q in x.geo_terms:
        base += abs(c)  # |q^k| <= 1 on k >= 1
    for c, _p in x.pow_terms:
        base += abs(c)  # k^(-p) <= 1 on k >= 1
    spike = max((abs(v) for _k, v in x.finite_part), default=Q(0))
    return base + spike
