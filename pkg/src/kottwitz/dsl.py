"""A small line-oriented language for root data, Galois actions and queries.

Example::

    group g {
      rank 2
      simple_roots [ (1,-1) ]
      simple_coroots [ (1,-1) ]
      roots auto
      galois trivial
      xi (1/2,-1/2)
    }
    query {
      group g
      mu (1,0)
      command stratify
      output table
    }

``catalog gl (4)`` may replace the explicit data inside a group block.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .catalog import MAX_RANK, CatalogError, build
from .lattice import IntMatrix, dot, format_rational
from .rootdatum import BasedRootDatum, GaloisAction, RootDatumError, dominant_rep
from .sets import GroupDatum, InvalidDatum

log = logging.getLogger(__name__)

COMMANDS = ("enumerate", "dual", "minute", "stratify", "dualize", "hn-check")
OUTPUTS = ("table", "json")
MAX_GALOIS_ORDER = 24


class DSLError(ValueError):
    """Syntax or validation error at a position in the source text."""

    def __init__(self, message: str, line: int, col: int, expected: Optional[str] = None):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        text = f"line {line}, column {col}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class DSLValidationError(DSLError):
    def __init__(self, message, line, col, axiom: str):
        super().__init__(message, line, col)
        self.axiom = axiom


@dataclass(frozen=True)
class Scenario:
    group: GroupDatum
    mu: Tuple[int, ...]
    command: str = "enumerate"
    output: str = "table"


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<decimal>-?\d+\.\d*)
  | (?P<rat>-?\d+/\d+)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<sym>[{}\[\]();,:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, rat, sym, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DSLError(f"unexpected character {text[pos]!r}", line, col, "identifier, number or one of { } [ ] ( ) ; , :")
        kind = m.lastgroup
        chunk = m.group()
        if kind == "decimal":
            raise DSLError(f"decimal literal {chunk!r} is not exact", line, col, "integer or rational p/q")
        if kind == "rat" and int(chunk.split("/")[1]) == 0:
            raise DSLError(f"zero denominator in {chunk!r}", line, col, "rational p/q with q > 0")
        if kind not in ("ws", "comment"):
            out.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise DSLError(f"unexpected {found}", tok.line, tok.col, expected)

    def take(self, kind: str, text: Optional[str] = None, expected: Optional[str] = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            self.fail(expected or (repr(text) if text else kind))
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "ident") and self.tok.text == text

    def number(self) -> Fraction:
        t = self.tok
        if t.kind not in ("int", "rat"):
            self.fail("integer or rational p/q")
        self.i += 1
        return Fraction(t.text)

    def integer(self) -> int:
        t = self.take("int", expected="integer")
        return int(t.text)

    def vector(self) -> Tuple[Fraction, ...]:
        self.take("sym", "(")
        out = []
        if not self.at(")"):
            out.append(self.number())
            while self.at(","):
                self.i += 1
                out.append(self.number())
        self.take("sym", ")", expected="',' or ')'")
        return tuple(out)

    def int_vector(self) -> Tuple[int, ...]:
        start = self.tok
        v = self.vector()
        if any(x.denominator != 1 for x in v):
            raise DSLError("integral vector required", start.line, start.col, "integers")
        return tuple(int(x) for x in v)

    def vector_list(self, pairs: bool = False):
        self.take("sym", "[")
        out = []
        if not self.at("]"):
            out.append(self._list_item(pairs))
            while self.at(";"):
                self.i += 1
                out.append(self._list_item(pairs))
        self.take("sym", "]", expected="';' or ']'")
        return out

    def _list_item(self, pairs):
        a = self.int_vector()
        if not pairs:
            return a
        self.take("sym", ":")
        return a, self.int_vector()

    # -- blocks ---------------------------------------------------------

    def document(self):
        groups: Dict[str, Tuple[dict, Token]] = {}
        query = None
        while self.tok.kind != "eof":
            if self.at("group"):
                start = self.tok
                name, stmts = self.group_block()
                if name in groups:
                    raise DSLError(f"group {name!r} defined twice", start.line, start.col)
                groups[name] = (stmts, start)
            elif self.at("query"):
                if query is not None:
                    raise DSLError("only one query block is allowed", self.tok.line, self.tok.col)
                query = self.query_block()
            else:
                self.fail("'group' or 'query'")
        if query is None:
            self.fail("'query' block")
        return groups, query

    def _statements(self, keywords, handler):
        self.take("sym", "{")
        seen: Dict[str, Token] = {}
        while not self.at("}"):
            t = self.tok
            if t.kind != "ident" or t.text not in keywords:
                self.fail(" or ".join(repr(k) for k in keywords) + " or '}'")
            if t.text in seen:
                raise DSLError(f"duplicate {t.text!r} statement", t.line, t.col)
            self.i += 1
            seen[t.text] = t
            handler(t.text)
        close = self.take("sym", "}")
        return seen, close

    def group_block(self):
        self.take("ident", "group")
        name = self.take("ident", expected="group identifier").text
        data: dict = {}

        def handler(kw):
            if kw == "rank":
                data[kw] = self.integer()
            elif kw in ("simple_roots", "simple_coroots"):
                data[kw] = self.vector_list()
            elif kw == "roots":
                if self.at("auto"):
                    self.i += 1
                    data[kw] = "auto"
                elif self.at("["):
                    data[kw] = self.vector_list(pairs=True)
                else:
                    self.fail("'auto' or '['")
            elif kw == "galois":
                if self.at("trivial"):
                    self.i += 1
                    data[kw] = None
                elif self.at("order"):
                    self.i += 1
                    order = self.integer()
                    self.take("ident", "matrix")
                    data[kw] = (order, self.vector_list())
                else:
                    self.fail("'trivial' or 'order'")
            elif kw == "xi":
                if self.at("zero"):
                    self.i += 1
                    data[kw] = None
                else:
                    data[kw] = self.vector()
            elif kw == "catalog":
                cname = self.take("ident", expected="catalog group name").text
                data[kw] = (cname, self.int_vector())

        keywords = ("rank", "simple_roots", "simple_coroots", "roots", "galois", "xi", "catalog")
        seen, close = self._statements(keywords, handler)
        data["_seen"] = seen
        data["_close"] = close
        return name, data

    def query_block(self):
        start = self.take("ident", "query")
        data: dict = {"_start": start}

        def handler(kw):
            if kw == "group":
                data[kw] = self.take("ident", expected="group identifier")
            elif kw == "mu":
                data["_mu_tok"] = self.tok
                data[kw] = self.int_vector()
            elif kw == "command":
                t = self.take("ident", expected=" | ".join(COMMANDS))
                if t.text not in COMMANDS:
                    self.fail(" | ".join(COMMANDS), t)
                data[kw] = t.text
            elif kw == "output":
                t = self.take("ident", expected="table | json")
                if t.text not in OUTPUTS:
                    self.fail("table | json", t)
                data[kw] = t.text

        seen, close = self._statements(("group", "mu", "command", "output"), handler)
        for req in ("group", "mu"):
            if req not in seen:
                raise DSLError(f"query is missing {req!r}", close.line, close.col, repr(req))
        return data


def _build_group(name: str, data: dict) -> GroupDatum:
    seen: Dict[str, Token] = data["_seen"]
    close: Token = data["_close"]
    if "catalog" in data:
        clash = [k for k in ("rank", "simple_roots", "simple_coroots", "roots", "galois") if k in seen]
        if clash:
            t = seen[clash[0]]
            raise DSLError(f"{clash[0]!r} cannot be combined with 'catalog'", t.line, t.col)
        cname, params = data["catalog"]
        t = seen["catalog"]
        try:
            rd, g = build(cname, params)
        except CatalogError as exc:
            raise DSLError(str(exc), t.line, t.col, "a catalog group") from None
    else:
        for req in ("rank", "simple_roots", "simple_coroots"):
            if req not in seen:
                raise DSLError(f"group {name!r} is missing {req!r}", close.line, close.col, repr(req))
        rank = data["rank"]
        t = seen["rank"]
        if not 1 <= rank <= MAX_RANK:
            raise DSLError(f"rank {rank} out of range", t.line, t.col, f"1 <= rank <= {MAX_RANK}")
        for kw in ("simple_roots", "simple_coroots"):
            for v in data[kw]:
                if len(v) != rank:
                    t = seen[kw]
                    raise DSLError(f"{kw} vector {v} has length {len(v)}", t.line, t.col, f"length {rank}")
        if len(data["simple_roots"]) != len(data["simple_coroots"]):
            t = seen["simple_coroots"]
            raise DSLError("simple_roots and simple_coroots differ in number", t.line, t.col)
        if len(data["simple_roots"]) > rank:
            t = seen["simple_roots"]
            raise DSLError("more simple roots than the rank", t.line, t.col)
        for a, ac in zip(data["simple_roots"], data["simple_coroots"]):
            if dot(a, ac) != 2:
                t = seen["simple_coroots"]
                raise DSLValidationError(
                    f"violates <alpha^vee,alpha> = 2: simple root {a} with coroot {ac} pairs to {dot(a, ac)}",
                    t.line,
                    t.col,
                    "<alpha^vee,alpha> != 2",
                )
        try:
            rd = BasedRootDatum.from_simple(rank, data["simple_roots"], data["simple_coroots"])
        except RootDatumError as exc:
            t = seen["simple_roots"]
            raise DSLValidationError(str(exc), t.line, t.col, "finite root system") from None
        g = GaloisAction.trivial(rank)
        if data.get("galois") is not None:
            order, rows = data["galois"]
            t = seen["galois"]
            if not 1 <= order <= MAX_GALOIS_ORDER:
                raise DSLError(f"Galois order {order} out of range", t.line, t.col, f"1..{MAX_GALOIS_ORDER}")
            if len(rows) != rank or any(len(r) != rank for r in rows):
                raise DSLError("Galois matrix has the wrong shape", t.line, t.col, f"{rank}x{rank} matrix")
            m = IntMatrix.from_rows(rows, cols=rank)
            power = m
            for k in range(1, order):
                if power == IntMatrix.identity(rank):
                    raise DSLValidationError(
                        f"matrix has order {k}, not {order}", t.line, t.col, "exact Galois order"
                    )
                power = power @ m
            g = GaloisAction(m, order)
        explicit = data.get("roots")
        if explicit not in (None, "auto"):
            given = {tuple(r): tuple(c) for r, c in explicit}
            if given != dict(zip(rd.roots, rd.coroots)):
                t = seen["roots"]
                raise DSLValidationError(
                    "explicit root list differs from the closure of the simple data",
                    t.line,
                    t.col,
                    "roots agree with closure",
                )
    xi = data.get("xi")
    if xi is not None and len(xi) != rd.rank:
        t = seen["xi"]
        raise DSLError(f"xi has length {len(xi)}", t.line, t.col, f"length {rd.rank}")
    try:
        return GroupDatum.make(rd, g, xi, name)
    except InvalidDatum as exc:
        t = seen.get("xi") if exc.violations and exc.violations[0].axiom.startswith("xi") else None
        t = t or seen.get("simple_roots") or seen.get("catalog") or close
        v = exc.violations[0]
        raise DSLValidationError(f"violates {v.axiom}: {v.witness}", t.line, t.col, v.axiom) from None


def parse(text: str) -> Scenario:
    p = _Parser(text)
    groups, query = p.document()
    gtok: Token = query["group"]
    if gtok.text not in groups:
        raise DSLError(f"unknown group {gtok.text!r}", gtok.line, gtok.col, "a defined group")
    # only the referenced group is built; others are still syntax-checked
    gd = _build_group(gtok.text, groups[gtok.text][0])
    mu = query["mu"]
    mt = query["_mu_tok"]
    if len(mu) != gd.rd.rank:
        raise DSLError(f"mu has length {len(mu)}", mt.line, mt.col, f"length {gd.rd.rank}")
    mu = normalize_mu(gd, mu)
    return Scenario(gd, mu, query.get("command", "enumerate"), query.get("output", "table"))


def normalize_mu(gd: GroupDatum, mu) -> Tuple[int, ...]:
    dom, _ = dominant_rep(gd.rd, tuple(int(x) for x in mu))
    dom = tuple(int(x) for x in dom)
    if dom != tuple(mu):
        log.warning("mu = %s is not dominant; using its dominant representative %s", tuple(mu), dom)
    return dom


# ---------------------------------------------------------------------------
# serializer
# ---------------------------------------------------------------------------


def _vec(v) -> str:
    return "(" + ",".join(format_rational(Fraction(x)) for x in v) + ")"


def _vec_list(vs) -> str:
    return "[ " + " ; ".join(_vec(v) for v in vs) + " ]" if vs else "[ ]"


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")


def serialize(s: Scenario) -> str:
    gd = s.group
    name = gd.name if _IDENT.match(gd.name or "") else "G"
    lines = [f"group {name} {{", f"  rank {gd.rd.rank}"]
    lines.append(f"  simple_roots {_vec_list(gd.rd.simple_roots)}")
    lines.append(f"  simple_coroots {_vec_list(gd.rd.simple_coroots)}")
    lines.append("  roots auto")
    if gd.g.is_trivial():
        lines.append("  galois trivial")
    else:
        lines.append(f"  galois order {gd.g.order} matrix {_vec_list(gd.g.generator.to_rows())}")
    lines.append("  xi zero" if gd.quasi_split else f"  xi {_vec(gd.xi)}")
    lines.append("}")
    lines.append("")
    lines.append("query {")
    lines.append(f"  group {name}")
    lines.append(f"  mu {_vec(s.mu)}")
    lines.append(f"  command {s.command}")
    lines.append(f"  output {s.output}")
    lines.append("}")
    return "\n".join(lines) + "\n"
