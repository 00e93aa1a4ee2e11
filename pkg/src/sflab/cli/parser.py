"""Line-oriented manifest format and its expression language.

A manifest is a sequence of sections ``[name]`` holding ``key = value``
entries; ``#`` starts a comment.  Multivector expressions are sums of terms
built from frame vectors ``e1 .. en`` (``et``, ``es`` on M x I^2), scalar
atoms ``i``, ``rt``, ``t``, ``s``, integers, and Fourier atoms ``cos(k..)``,
``sin(k..)``, ``exp(k..)`` combined with ``+ - * / ^`` and parentheses;
``^`` is the wedge product and binds tighter than ``*``.  A series over eps is
written ``order K: expr0 ; expr1 ; ... ; exprK``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import (
    ManifestSyntaxError,
    ManifestTypeError,
    NotComplementary,
    NotPoisson,
    SemanticError,
)
from ..exactnum import EpsSeries, FieldElement, FourierScalar, set_radical
from ..foliation.multivector import MultiVector, wedge
from ..foliation.setup import TorusPoissonSetup

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),;:]))")

ATOM_START = frozenset({"<number>", "<identifier>", "'('", "'-'", "'+'"})
AFTER_TERM = frozenset({"'+'", "'-'", "'*'", "'/'", "'^'", "<end>"})


@dataclass
class Token:
    kind: str  # num | id | op | end
    text: str
    col: int  # 1-based


def tokenize(text: str, line: int = 1, col0: int = 1) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ManifestSyntaxError(f"unexpected character {text[bad]!r}", line, col0 + bad,
                                      ATOM_START | AFTER_TERM)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), col0 + start))
        pos = m.end()
    out.append(Token("end", "", col0 + len(text)))
    return out


@dataclass
class ExprContext:
    """Where expressions live: frame size, torus dimension and polynomial variables."""

    n: int
    ntorus: int
    npoly: int = 0
    product: bool = False  # et / es available as frame vectors n+1, n+2

    @property
    def frame(self) -> int:
        return self.n + 2 if self.product else self.n

    @property
    def dim(self) -> int:
        return self.ntorus + self.npoly

    def scalar(self, f: FourierScalar) -> MultiVector:
        return MultiVector.function(f, self.frame) if f else MultiVector.zero(self.frame, 0, self.dim, self.npoly)

    def const(self, c) -> MultiVector:
        return self.scalar(FourierScalar.constant(c, self.dim, self.npoly))


POLY_VARS = ("t", "s")


class ExprParser:
    def __init__(self, tokens: list[Token], ctx: ExprContext, line: int):
        self.toks, self.i, self.ctx, self.line = tokens, 0, ctx, line

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg: str, expected: frozenset[str], tok: Token | None = None):
        tok = tok or self.tok
        raise ManifestSyntaxError(msg, self.line, tok.col, expected)

    def type_error(self, msg: str, tok: Token):
        raise ManifestTypeError(msg, self.line, tok.col)

    def take(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "end":
            self.fail(f"unexpected {self.tok.text or 'end of line'!r}", frozenset({f"'{text}'"}))
        t = self.tok
        self.i += 1
        return t

    def parse(self, stop: frozenset[str] = frozenset()) -> MultiVector:
        val = self.sum()
        if self.tok.kind != "end" and self.tok.text not in stop:
            self.fail(f"unexpected {self.tok.text!r}", AFTER_TERM | {f"'{s}'" for s in stop})
        return val

    def sum(self) -> MultiVector:
        acc = self.product()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.tok
            self.i += 1
            rhs = self.product()
            if acc.comps and rhs.comps and acc.degree != rhs.degree:
                self.type_error(f"cannot add degree {acc.degree} and degree {rhs.degree}", op)
            if not acc.comps and rhs.comps:
                acc = acc.zero_like(rhs.degree)
            acc = acc + rhs if op.text == "+" else acc - rhs
        return acc

    def product(self) -> MultiVector:
        acc = self.unary()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.tok
            self.i += 1
            rhs = self.unary()
            if op.text == "*":
                if acc.degree and rhs.degree:
                    self.type_error("'*' needs a scalar factor; use '^' for the wedge product", op)
                acc = wedge(acc, rhs)
            else:
                if rhs.degree or not _is_constant(rhs):
                    self.type_error("division only by nonzero constants", op)
                c = rhs.comps.get(())
                if c is None:
                    raise ManifestTypeError("division by zero", self.line, op.col)
                acc = acc * (FieldElement(1) / c.constant_term())
        return acc

    def unary(self) -> MultiVector:
        if self.tok.kind == "op" and self.tok.text in ("-", "+"):
            op = self.tok.text
            self.i += 1
            val = self.unary()
            return -val if op == "-" else val
        return self.wedge()

    def wedge(self) -> MultiVector:
        acc = self.atom()
        while self.tok.kind == "op" and self.tok.text == "^":
            self.i += 1
            acc = wedge(acc, self.atom())
        return acc

    def atom(self) -> MultiVector:
        tok, ctx = self.tok, self.ctx
        if tok.kind == "num":
            self.i += 1
            return ctx.const(int(tok.text))
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            val = self.sum()
            self.take(")")
            return val
        if tok.kind == "id":
            self.i += 1
            name = tok.text
            if name in ("cos", "sin", "exp"):
                return self.fourier_atom(name, tok)
            if name == "i":
                return ctx.const(FieldElement.i())
            if name == "rt":
                return ctx.const(FieldElement.rt())
            if name in POLY_VARS:
                j = POLY_VARS.index(name)
                if j >= ctx.npoly:
                    raise SemanticError(f"variable {name!r} is not available here", self.line, tok.col)
                return ctx.scalar(FourierScalar.variable(ctx.ntorus + j, ctx.dim, ctx.npoly))
            m = re.fullmatch(r"e(\d+|t|s)", name)
            if m:
                return self.frame_atom(m.group(1), tok)
            raise SemanticError(f"unknown name {name!r}", self.line, tok.col)
        self.fail(f"unexpected {tok.text or 'end of line'!r}", ATOM_START)

    def frame_atom(self, label: str, tok: Token) -> MultiVector:
        ctx = self.ctx
        if label in ("t", "s"):
            if not ctx.product:
                raise SemanticError(f"e{label} only exists on M x I^2", self.line, tok.col)
            idx = ctx.n if label == "t" else ctx.n + 1
        else:
            idx = int(label) - 1
            if not 0 <= idx < ctx.n:
                raise SemanticError(f"frame index {label} outside 1..{ctx.n}", self.line, tok.col)
        return MultiVector.basis(ctx.frame, (idx,), ctx.dim, ctx.npoly)

    def fourier_atom(self, name: str, tok: Token) -> MultiVector:
        self.take("(")
        ks = [self.signed_int()]
        while self.tok.text == ",":
            self.i += 1
            ks.append(self.signed_int())
        self.take(")")
        ctx = self.ctx
        if len(ks) != ctx.ntorus:
            raise SemanticError(f"{name} needs {ctx.ntorus} frequencies, got {len(ks)}", self.line, tok.col)
        k = tuple(ks)
        ctor = {"cos": FourierScalar.cos, "sin": FourierScalar.sin, "exp": FourierScalar.exp}[name]
        f = ctor(k, ctx.ntorus)
        return ctx.scalar(f.extend(0, ctx.npoly))

    def signed_int(self) -> int:
        sign = 1
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            sign = -sign if self.tok.text == "-" else sign
            self.i += 1
        if self.tok.kind != "num":
            self.fail(f"unexpected {self.tok.text or 'end of line'!r}", frozenset({"<integer>"}))
        v = int(self.tok.text)
        self.i += 1
        return sign * v


def _is_constant(P: MultiVector) -> bool:
    return all(f.is_constant() for f in P.comps.values())


def parse_expr(text: str, ctx: ExprContext, line: int = 1, col0: int = 1) -> MultiVector:
    return ExprParser(tokenize(text, line, col0), ctx, line).parse()


def parse_multivector(text: str, ctx: ExprContext, degree: int | None = None,
                      line: int = 1, col0: int = 1) -> MultiVector:
    P = parse_expr(text, ctx, line, col0)
    if degree is not None:
        if P.comps and P.degree != degree:
            raise ManifestTypeError(f"expected a degree-{degree} expression, got degree {P.degree}",
                                    line, col0)
        if not P.comps:
            P = P.zero_like(degree)
    return P


def parse_scalar(text: str, ctx: ExprContext, line: int = 1, col0: int = 1) -> FieldElement:
    P = parse_multivector(text, ctx, 0, line, col0)
    if not _is_constant(P):
        raise ManifestTypeError("expected a constant scalar", line, col0)
    f = P.comps.get(())
    return f.constant_term() if f is not None else FieldElement(0)


def _split_top(text: str, sep: str, col0: int) -> list[tuple[str, int]]:
    """Split at separators outside parentheses, keeping column offsets."""
    parts, depth, start = [], 0, 0
    for j, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((text[start:j], col0 + start))
            start = j + 1
    parts.append((text[start:], col0 + start))
    return parts


def parse_series(text: str, ctx: ExprContext, degree: int, line: int = 1, col0: int = 1,
                 default_order: int | None = None) -> EpsSeries:
    m = re.match(r"\s*order\s+(\d+)\s*:", text)
    if not m:
        col = col0 + len(text) - len(text.lstrip())
        raise ManifestSyntaxError("a series starts with 'order K:'", line, col, frozenset({"'order'"}))
    K = int(m.group(1))
    body = text[m.end():]
    parts = _split_top(body, ";", col0 + m.end())
    if len(parts) > K + 1:
        raise SemanticError(f"{len(parts)} coefficients for a series of order {K}", line, parts[K + 1][1])
    coeffs = [parse_multivector(p, ctx, degree, line, c) for p, c in parts]
    zero = MultiVector.zero(ctx.frame, degree, ctx.dim, ctx.npoly)
    return EpsSeries(coeffs, K, zero=zero)


def parse_frames(text: str, ctx: ExprContext, line: int = 1, col0: int = 1) -> list[list[FourierScalar]]:
    out = []
    for part, c in _split_top(text, ";", col0):
        if not part.strip():
            continue
        v = parse_multivector(part, ctx, 1, line, c)
        out.append(v.vector_components())
    return out


# printing back

def format_series(S: EpsSeries) -> str:
    from ..foliation.multivector import format_multivector

    return f"order {S.order}: " + " ; ".join(format_multivector(c) for c in S.coeffs)


# manifests

SECTIONS = ("manifold", "poisson", "splitting", "deformation", "gauge", "task")

KEYS: dict[str, dict[str, str]] = {
    "manifold": {"n": "int", "radical": "int", "name": "word"},
    "poisson": {"Pi": "bivector", "rank": "int"},
    "splitting": {"TF": "frames", "G": "frames", "G0": "frames", "G1": "frames"},
    "deformation": {"Z": "series2"},
    "gauge": {"W": "tseries2", "X": "tseries1"},
    "task": {"checks": "names", "seed": "int", "order": "int", "trials": "int", "arity": "int",
             "lambda": "slope", "cutoff": "int", "profile": "ints", "points": "int", "pairs": "int"},
}


@dataclass
class Entry:
    key: str
    text: str
    line: int
    col: int


@dataclass
class Manifest:
    name: str = ""
    n: int = 0
    radical: int = 2
    Pi: MultiVector | None = None
    rank: int | None = None
    leaves: list | None = None
    complements: dict[str, list] = field(default_factory=dict)
    Z: EpsSeries | None = None
    gauge_W: EpsSeries | None = None
    gauge_X: EpsSeries | None = None
    checks: list[str] = field(default_factory=list)
    params: dict[str, object] = field(default_factory=dict)
    sections: list[str] = field(default_factory=list)

    @property
    def context(self) -> ExprContext:
        return ExprContext(self.n, self.n)

    def setup(self, complement: str | None = None) -> TorusPoissonSetup:
        if self.Pi is None or self.leaves is None or not self.complements:
            raise SemanticError("the manifest does not define [poisson] and [splitting]")
        if complement is None:
            complement = next(iter(self.complements))
        if complement not in self.complements:
            raise SemanticError(f"no complement named {complement!r}")
        try:
            S = TorusPoissonSetup(self.Pi, self.leaves, self.complements[complement],
                                  name=f"{self.name}-{complement}" if self.name else complement)
        except (NotComplementary, NotPoisson) as exc:
            raise SemanticError(str(exc)) from exc
        if self.rank is not None and S.rank != self.rank:
            raise SemanticError(f"declared rank {self.rank} but the leaf frame has {S.rank} vectors")
        return S


def _read_sections(text: str) -> list[tuple[str, int, list[Entry]]]:
    out: list[tuple[str, int, list[Entry]]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col = len(body) - len(body.lstrip()) + 1
        m = re.fullmatch(r"\[\s*([A-Za-z_-]+)\s*\]", stripped)
        if stripped.startswith("["):
            if not m:
                raise ManifestSyntaxError("malformed section header", ln, col, frozenset({"'[name]'"}))
            name = m.group(1)
            if name not in SECTIONS:
                raise SemanticError(f"unknown section [{name}]", ln, col)
            if any(s == name for s, _, _ in out):
                raise SemanticError(f"section [{name}] appears twice", ln, col)
            out.append((name, ln, []))
            continue
        m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(=)", body)
        if not m:
            k = re.match(r"\s*[A-Za-z_][A-Za-z0-9_]*\s*", body)
            where = k.end() + 1 if k else col
            raise ManifestSyntaxError("expected an entry 'key = value'", ln, where,
                                      frozenset({"'='"} if k else {"<key>", "'[name]'"}))
        if not out:
            raise SemanticError("entry outside of any section", ln, col)
        out[-1][2].append(Entry(m.group(1), body[m.end():], ln, m.end() + 1))
    return out


def parse_manifest(text: str) -> Manifest:
    sections = _read_sections(text)
    man = Manifest(sections=[s for s, _, _ in sections])
    by_name = {s: entries for s, _, entries in sections}
    for sname, _, entries in sections:
        seen = set()
        for e in entries:
            if e.key not in KEYS[sname]:
                raise SemanticError(f"unknown key {e.key!r} in [{sname}]", e.line, e.col - 1)
            if e.key in seen:
                raise SemanticError(f"duplicate key {e.key!r}", e.line, e.col - 1)
            seen.add(e.key)

    # [manifold] first: it fixes the frame size and the radical for all expressions
    for e in by_name.get("manifold", []):
        if e.key == "name":
            man.name = e.text.strip()
        else:
            setattr(man, e.key, _int(e))
    if man.radical:
        try:
            set_radical(man.radical)
        except ValueError as exc:
            raise SemanticError(str(exc), *_pos(by_name["manifold"], "radical")) from exc
    needs_n = any(s in by_name for s in ("poisson", "splitting", "deformation", "gauge"))
    if needs_n and man.n <= 0:
        raise SemanticError("[manifold] must declare n >= 1")
    ctx = man.context
    tctx = ExprContext(man.n, man.n, npoly=1)

    for e in by_name.get("poisson", []):
        if e.key == "Pi":
            man.Pi = parse_multivector(e.text, ctx, 2, e.line, e.col)
        else:
            man.rank = _int(e)
    for e in by_name.get("splitting", []):
        frames = parse_frames(e.text, ctx, e.line, e.col)
        if e.key == "TF":
            man.leaves = frames
        else:
            man.complements[e.key] = frames
    for e in by_name.get("deformation", []):
        man.Z = parse_series(e.text, ctx, 2, e.line, e.col)
    for e in by_name.get("gauge", []):
        deg = 2 if e.key == "W" else 1
        S = parse_series(e.text, tctx, deg, e.line, e.col)
        if e.key == "W":
            man.gauge_W = S
        else:
            man.gauge_X = S
    if (man.gauge_W is None) != (man.gauge_X is None):
        raise SemanticError("[gauge] needs both W and X")
    if man.gauge_W is not None and man.gauge_W.order != man.gauge_X.order:
        raise SemanticError("[gauge] W and X must have the same order")
    for e in by_name.get("task", []):
        kind = KEYS["task"][e.key]
        if kind == "names":
            man.checks = [w.strip() for w in e.text.split(",") if w.strip()]
        elif kind == "int":
            man.params[e.key] = _int(e)
        elif kind == "ints":
            man.params[e.key] = [_int(Entry(e.key, p, e.line, c)) for p, c in _split_top(e.text, ",", e.col)]
        elif kind == "slope":
            man.params[e.key] = parse_slope(e.text, e.line, e.col)

    _validate(man, by_name)
    return man


def _pos(entries: list[Entry], key: str) -> tuple[int, int]:
    for e in entries:
        if e.key == key:
            return e.line, e.col
    return 0, 0


def _int(e: Entry) -> int:
    text = e.text.strip()
    if not re.fullmatch(r"-?\d+", text):
        off = len(e.text) - len(e.text.lstrip())
        raise ManifestTypeError(f"{e.key} must be an integer", e.line, e.col + off)
    return int(text)


def _validate(man: Manifest, by_name: dict) -> None:
    if man.Pi is not None and man.leaves is not None:
        if man.rank is not None and man.rank != len(man.leaves):
            raise SemanticError(f"rank {man.rank} does not match {len(man.leaves)} leaf vectors",
                                *_pos(by_name["poisson"], "rank"))
        for name, frame in man.complements.items():
            if len(frame) + len(man.leaves) != man.n:
                raise SemanticError(f"complement {name} has {len(frame)} vectors, expected "
                                    f"{man.n - len(man.leaves)}", *_pos(by_name["splitting"], name))


def parse_slope(text: str, line: int = 1, col0: int = 1):
    """A real constant expression or liouville(k) for the approximants of sum 10^(-j!)."""
    from ..kronecker import Slope

    m = re.fullmatch(r"\s*liouville\s*\(\s*(\d+)\s*\)\s*", text)
    if m:
        return Slope.liouville(int(m.group(1)))
    x = parse_scalar(text, ExprContext(0, 0), line, col0)
    if not x.is_real():
        raise ManifestTypeError("slopes must be real", line, col0)
    return Slope.exact(x)


def load_manifest(path) -> Manifest:
    with open(path, encoding="utf-8") as fh:
        return parse_manifest(fh.read())

