"""Line-oriented declaration language for spaces, wedges, vectors, maps,
semi-linear sets, and symbolic sequences.

    space X dim 2
    wedge X.pos := (x1 > 0) | (x1 = 0 & x2 >= 0)
    wedge W := (x1 >= 0) & (x2 >= 0)
    vector v in X := (1, -2/3)
    map f : X -> Y matrix [[1, 0], [0, 1]]
    set S in X := (x1 >= 0) & (x1 <= 1)
    seq s := geo(1, 1/2) + pow(1, 1/2) + const(3) + finite{1: 5}

Atoms compare two linear forms over x1..xd with <, <=, =, >=, >; `&` binds
tighter than `|`; `!` negates; parentheses group. A standalone wedge
declaration introduces a space of the same name whose dimension is inferred
from the variables used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactnum import Matrix, Q, Vector, mat, vec
from .semilin import (
    Rel,
    SemiLinearSet,
    make_cell,
    make_constraint,
    make_set,
    complement,
    intersect,
    normalize,
    union,
    full_set,
)
from .seqspace import SymbolicSequence, sequence


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class WedgeDecl:
    set_: SemiLinearSet
    line: int


@dataclass
class MapDecl:
    matrix: Matrix
    domain: str
    codomain: str
    line: int


@dataclass
class WorkbenchFile:
    """Parsed declarations; wedge validity beyond homogeneity is checked later."""

    source: str
    space_dims: dict[str, int] = field(default_factory=dict)
    wedges: dict[str, WedgeDecl] = field(default_factory=dict)
    vectors: dict[str, tuple[str, Vector]] = field(default_factory=dict)
    maps: dict[str, MapDecl] = field(default_factory=dict)
    sets: dict[str, tuple[str, SemiLinearSet]] = field(default_factory=dict)
    sequences: dict[str, SymbolicSequence] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)  # (kind, name) in file order


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op><=|>=|->|:=|==|[-+*/()&|!<>=:,\[\]{}.])|(?P<bad>\S))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line_no: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        if m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r}", line_no, m.start("bad") + 1)
        for kind in ("num", "name", "op"):
            if m.group(kind):
                toks.append(_Tok(kind, m.group(kind), line_no, m.start(kind) + 1))
                break
        pos = m.end()
    return toks


class _Cursor:
    def __init__(self, toks: list[_Tok], line: int):
        self.toks = toks
        self.i = 0
        self.line = line

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else None
            col = (last.col + len(last.text)) if last else 1
            raise ParseError("unexpected end of line", self.line, col)
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def expect_name(self) -> _Tok:
        t = self.next()
        if t.kind != "name":
            raise ParseError(f"expected an identifier, found {t.text!r}", t.line, t.col)
        return t

    def done(self) -> None:
        t = self.peek()
        if t is not None:
            raise ParseError(f"unexpected trailing input {t.text!r}", t.line, t.col)


def _parse_number(cur: _Cursor) -> Fraction:
    t = cur.next()
    if t.kind != "num":
        raise ParseError(f"expected a number, found {t.text!r}", t.line, t.col)
    return Q(t.text)


def _parse_signed_number(cur: _Cursor) -> Fraction:
    t = cur.peek()
    sign = Q(1)
    if t is not None and t.text in ("-", "+"):
        cur.next()
        sign = Q(-1) if t.text == "-" else Q(1)
    return sign * _parse_number(cur)


_VAR_RE = re.compile(r"^x([1-9][0-9]*)$")


@dataclass
class _LinForm:
    coeffs: dict[int, Fraction]
    const: Fraction

    def minus(self, other: "_LinForm") -> "_LinForm":
        coeffs = dict(self.coeffs)
        for i, c in other.coeffs.items():
            coeffs[i] = coeffs.get(i, Q(0)) - c
        return _LinForm(coeffs, self.const - other.const)

    def max_var(self) -> int:
        return max((i for i, c in self.coeffs.items() if c != 0), default=0)


def _parse_linform(cur: _Cursor) -> _LinForm:
    coeffs: dict[int, Fraction] = {}
    const = Q(0)
    sign = Q(1)
    first = True
    while True:
        t = cur.peek()
        if t is None:
            if first:
                raise ParseError("expected a linear form", cur.line, 1)
            break
        if t.text in ("+", "-"):
            cur.next()
            sign = Q(-1) if t.text == "-" else Q(1)
        elif not first:
            break
        t = cur.peek()
        if t is None:
            raise ParseError("dangling sign in linear form", cur.line, 1)
        if t.kind == "num":
            value = _parse_number(cur)
            nxt = cur.peek()
            if nxt is not None and nxt.text == "*":
                cur.next()
                var_tok = cur.expect_name()
                m = _VAR_RE.match(var_tok.text)
                if not m:
                    raise ParseError(f"expected a variable x1..xN, found {var_tok.text!r}",
                                     var_tok.line, var_tok.col)
                idx = int(m.group(1))
                coeffs[idx] = coeffs.get(idx, Q(0)) + sign * value
            else:
                const += sign * value
        elif t.kind == "name":
            m = _VAR_RE.match(t.text)
            if not m:
                raise ParseError(f"unknown symbol {t.text!r} in linear form", t.line, t.col)
            cur.next()
            idx = int(m.group(1))
            coeffs[idx] = coeffs.get(idx, Q(0)) + sign
        else:
            if first:
                raise ParseError(f"expected a linear form, found {t.text!r}", t.line, t.col)
            break
        sign = Q(1)
        first = False
    return _LinForm(coeffs, const)


_RELATIONS = {"<": Rel.LT, "<=": Rel.LE, "=": Rel.EQ, "==": Rel.EQ, ">=": Rel.LE, ">": Rel.LT}


@dataclass
class _AtomNode:
    lin: _LinForm  # lin REL 0 with Rel in {LT, LE, EQ}
    rel: Rel
    line: int
    col: int


@dataclass
class _BoolNode:
    op: str  # 'and' | 'or' | 'not'
    args: list


def _parse_atom_or_group(cur: _Cursor):
    t = cur.peek()
    if t is not None and t.text == "!":
        cur.next()
        return _BoolNode("not", [_parse_atom_or_group(cur)])
    if t is not None and t.text == "(":
        cur.next()
        inner = _parse_bool_expr(cur)
        cur.expect(")")
        return inner
    lhs = _parse_linform(cur)
    rel_tok = cur.next()
    if rel_tok.text not in _RELATIONS:
        raise ParseError(f"expected a relation, found {rel_tok.text!r}", rel_tok.line, rel_tok.col)
    rhs = _parse_linform(cur)
    if rel_tok.text in (">", ">="):
        lin = rhs.minus(lhs)
    else:
        lin = lhs.minus(rhs)
    return _AtomNode(lin, _RELATIONS[rel_tok.text], rel_tok.line, rel_tok.col)


def _parse_bool_term(cur: _Cursor):
    node = _parse_atom_or_group(cur)
    while True:
        t = cur.peek()
        if t is not None and t.text == "&":
            cur.next()
            rhs = _parse_atom_or_group(cur)
            node = _BoolNode("and", [node, rhs])
        else:
            return node


def _parse_bool_expr(cur: _Cursor):
    node = _parse_bool_term(cur)
    while True:
        t = cur.peek()
        if t is not None and t.text == "|":
            cur.next()
            rhs = _parse_bool_term(cur)
            node = _BoolNode("or", [node, rhs])
        else:
            return node


def _max_var(node) -> int:
    if isinstance(node, _AtomNode):
        return node.lin.max_var()
    return max((_max_var(a) for a in node.args), default=0)


def _atoms(node):
    if isinstance(node, _AtomNode):
        yield node
    else:
        for a in node.args:
            yield from _atoms(a)


def _to_set(node, dim: int) -> SemiLinearSet:
    if isinstance(node, _AtomNode):
        coeffs = [node.lin.coeffs.get(i + 1, Q(0)) for i in range(dim)]
        c = make_constraint(coeffs, node.rel, -node.lin.const)
        return make_set(dim, [make_cell(dim, [c])])
    if node.op == "and":
        out = full_set(dim)
        for a in node.args:
            out = intersect(out, _to_set(a, dim))
        return out
    if node.op == "or":
        out = SemiLinearSet(dim, ())
        for a in node.args:
            out = union(out, _to_set(a, dim))
        return out
    return complement(_to_set(node.args[0], dim))


def _parse_set_expr(cur: _Cursor, dim: Optional[int], homogeneous: bool,
                    context: str) -> tuple[SemiLinearSet, int]:
    node = _parse_bool_expr(cur)
    used = _max_var(node)
    if dim is None:
        dim = used
    if used > dim:
        for a in _atoms(node):
            if a.lin.max_var() > dim:
                raise ParseError(
                    f"variable x{a.lin.max_var()} exceeds dimension {dim} of {context}",
                    a.line, a.col)
    if homogeneous:
        for a in _atoms(node):
            if a.lin.const != 0:
                raise ParseError(
                    "non-homogeneous constant in wedge expression "
                    "(wedge atoms must compare a linear form against 0)",
                    a.line, a.col)
    return normalize(_to_set(node, dim), deep=False), dim


def _parse_vector_literal(cur: _Cursor) -> Vector:
    cur.expect("(")
    entries = []
    t = cur.peek()
    if t is not None and t.text == ")":
        cur.next()
        return ()
    entries.append(_parse_signed_number(cur))
    while True:
        t = cur.next()
        if t.text == ")":
            break
        if t.text != ",":
            raise ParseError(f"expected ',' or ')', found {t.text!r}", t.line, t.col)
        entries.append(_parse_signed_number(cur))
    return vec(entries)


def _parse_matrix_literal(cur: _Cursor) -> Matrix:
    cur.expect("[")
    rows = []
    t = cur.peek()
    if t is not None and t.text == "]":
        cur.next()
        return ()
    while True:
        cur.expect("[")
        row = []
        t = cur.peek()
        if t is not None and t.text == "]":
            cur.next()
        else:
            row.append(_parse_signed_number(cur))
            while True:
                t = cur.next()
                if t.text == "]":
                    break
                if t.text != ",":
                    raise ParseError(f"expected ',' or ']', found {t.text!r}", t.line, t.col)
                row.append(_parse_signed_number(cur))
        rows.append(row)
        t = cur.next()
        if t.text == "]":
            break
        if t.text != ",":
            raise ParseError(f"expected ',' or ']', found {t.text!r}", t.line, t.col)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("matrix rows have unequal lengths", cur.line, 1)
    return mat(rows)


def _parse_sequence_expr(cur: _Cursor) -> SymbolicSequence:
    total = sequence()
    while True:
        t = cur.expect_name()
        if t.text == "geo":
            cur.expect("(")
            c = _parse_signed_number(cur)
            cur.expect(",")
            q = _parse_signed_number(cur)
            cur.expect(")")
            if not (0 < q < 1):
                raise ParseError(f"geometric ratio must be in (0, 1), got {q}", t.line, t.col)
            total = total + sequence(geo=[(c, q)])
        elif t.text == "pow":
            cur.expect("(")
            c = _parse_signed_number(cur)
            cur.expect(",")
            p = _parse_signed_number(cur)
            cur.expect(")")
            if p <= 0:
                raise ParseError(f"power-decay exponent must be positive, got {p}", t.line, t.col)
            total = total + sequence(pow=[(c, p)])
        elif t.text == "const":
            cur.expect("(")
            c = _parse_signed_number(cur)
            cur.expect(")")
            total = total + sequence(const=c)
        elif t.text == "finite":
            cur.expect("{")
            entries = {}
            nxt = cur.peek()
            if nxt is not None and nxt.text == "}":
                cur.next()
            else:
                while True:
                    k = _parse_number(cur)
                    if k.denominator != 1 or k < 1:
                        raise ParseError(f"finite-part index must be a positive integer, got {k}",
                                         t.line, t.col)
                    cur.expect(":")
                    v = _parse_signed_number(cur)
                    entries[int(k)] = entries.get(int(k), Q(0)) + v
                    sep = cur.next()
                    if sep.text == "}":
                        break
                    if sep.text != ",":
                        raise ParseError(f"expected ',' or '}}', found {sep.text!r}", sep.line, sep.col)
            total = total + sequence(finite=entries)
        else:
            raise ParseError(f"unknown sequence term {t.text!r} (want geo/pow/const/finite)",
                             t.line, t.col)
        nxt = cur.peek()
        if nxt is None:
            return total
        if nxt.text != "+":
            raise ParseError(f"expected '+' between sequence terms, found {nxt.text!r}",
                             nxt.line, nxt.col)
        cur.next()


def parse(text: str) -> WorkbenchFile:
    """Parse a workbench document; raises ParseError with line/column."""
    wf = WorkbenchFile(source=text)

    def declare(kind: str, name: str, line: int):
        for table in (wf.space_dims, wf.vectors, wf.maps, wf.sets, wf.sequences):
            if name in table:
                raise ParseError(f"duplicate name {name!r}", line, 1)
        wf.order.append((kind, name))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        toks = _tokenize(stripped, line_no)
        cur = _Cursor(toks, line_no)
        head = cur.expect_name()
        if head.text == "space":
            name = cur.expect_name()
            cur.expect("dim")
            dim_tok = cur.next()
            if dim_tok.kind != "num" or Q(dim_tok.text).denominator != 1 or Q(dim_tok.text) < 0:
                raise ParseError("space dimension must be a natural number", dim_tok.line, dim_tok.col)
            cur.done()
            declare("space", name.text, line_no)
            wf.space_dims[name.text] = int(Q(dim_tok.text))
        elif head.text == "wedge":
            name = cur.expect_name()
            t = cur.peek()
            if t is not None and t.text == ".":
                cur.next()
                attr = cur.expect_name()
                if attr.text != "pos":
                    raise ParseError(f"expected 'pos' after '.', found {attr.text!r}", attr.line, attr.col)
                if name.text not in wf.space_dims:
                    raise ParseError(f"unknown space {name.text!r}", name.line, name.col)
                cur.expect(":=")
                s, _ = _parse_set_expr(cur, wf.space_dims[name.text], True, f"space {name.text}")
                cur.done()
                if name.text in wf.wedges:
                    raise ParseError(f"space {name.text!r} already has a wedge", name.line, name.col)
                wf.wedges[name.text] = WedgeDecl(s, line_no)
            else:
                cur.expect(":=")
                s, dim = _parse_set_expr(cur, None, True, f"wedge {name.text}")
                cur.done()
                declare("space", name.text, line_no)
                wf.space_dims[name.text] = dim
                wf.wedges[name.text] = WedgeDecl(s, line_no)
        elif head.text == "vector":
            name = cur.expect_name()
            cur.expect("in")
            sp = cur.expect_name()
            if sp.text not in wf.space_dims:
                raise ParseError(f"unknown space {sp.text!r}", sp.line, sp.col)
            cur.expect(":=")
            v = _parse_vector_literal(cur)
            cur.done()
            if len(v) != wf.space_dims[sp.text]:
                raise ParseError(
                    f"vector has {len(v)} entries but space {sp.text} has dimension "
                    f"{wf.space_dims[sp.text]}", name.line, name.col)
            declare("vector", name.text, line_no)
            wf.vectors[name.text] = (sp.text, v)
        elif head.text == "map":
            name = cur.expect_name()
            cur.expect(":")
            dom = cur.expect_name()
            cur.expect("->")
            cod = cur.expect_name()
            for s in (dom, cod):
                if s.text not in wf.space_dims:
                    raise ParseError(f"unknown space {s.text!r}", s.line, s.col)
            kw = cur.expect_name()
            if kw.text != "matrix":
                raise ParseError(f"expected 'matrix', found {kw.text!r}", kw.line, kw.col)
            m = _parse_matrix_literal(cur)
            cur.done()
            rows, cols = len(m), (len(m[0]) if m else 0)
            if rows != wf.space_dims[cod.text] or (m and cols != wf.space_dims[dom.text]):
                raise ParseError(
                    f"matrix is {rows}x{cols} but {dom.text}->{cod.text} needs "
                    f"{wf.space_dims[cod.text]}x{wf.space_dims[dom.text]}", name.line, name.col)
            declare("map", name.text, line_no)
            wf.maps[name.text] = MapDecl(m, dom.text, cod.text, line_no)
        elif head.text == "set":
            name = cur.expect_name()
            cur.expect("in")
            sp = cur.expect_name()
            if sp.text not in wf.space_dims:
                raise ParseError(f"unknown space {sp.text!r}", sp.line, sp.col)
            cur.expect(":=")
            s, _ = _parse_set_expr(cur, wf.space_dims[sp.text], False, f"space {sp.text}")
            cur.done()
            declare("set", name.text, line_no)
            wf.sets[name.text] = (sp.text, s)
        elif head.text == "seq":
            name = cur.expect_name()
            cur.expect(":=")
            s = _parse_sequence_expr(cur)
            cur.done()
            declare("seq", name.text, line_no)
            wf.sequences[name.text] = s
        else:
            raise ParseError(
                f"unknown declaration {head.text!r} (want space/wedge/vector/map/set/seq)",
                head.line, head.col)

    for name in wf.space_dims:
        if name not in wf.wedges and wf.space_dims[name] > 0:
            raise ParseError(f"space {name!r} has no wedge declaration", 1, 1)
    return wf


def render_set_dsl(s: SemiLinearSet) -> str:
    """DSL-parseable rendering; round-trips through parse."""
    if not s.cells:
        return "(0 < 0)"
    parts = []
    for cell in s.cells:
        if not cell.constraints:
            parts.append("(0 = 0)")
            continue
        atoms = []
        for c in cell.constraints:
            atoms.append(c.render())
        parts.append("(" + " & ".join(atoms) + ")")
    return " | ".join(parts)
