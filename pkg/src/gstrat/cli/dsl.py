"""Lexer, AST, recursive-descent parser and pretty-printer for the strat DSL.

    script   := stmt*
    stmt     := "let" ID "=" expr ";" | "print" expr ";" | "emit" ("dot"|"json") expr ";"
    expr     := NAME "(" args ")" | ID
    subgroup := "<" tuple ("," tuple)* ">"
    tuple    := INT | "(" INT ("," INT)* ")"

Comments run from '#' to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from ..errors import GStratError


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


class ParseError(GStratError):
    def __init__(self, message: str, span: Span, expected: frozenset = frozenset()):
        self.span = span
        self.expected = frozenset(expected)
        detail = message
        if self.expected:
            detail += ", expected " + " | ".join(sorted(self.expected))
        super().__init__(f"{span}: syntax error: {detail}")


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(frozen=True)
class SubgroupLit:
    generators: tuple[tuple[int, ...], ...]
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(frozen=True)
class Ref:
    name: str
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    span: Span = field(default=Span(0, 0), compare=False)


Expr = Union[Ref, Call]


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(frozen=True)
class Print:
    expr: Expr
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(frozen=True)
class Emit:
    fmt: str
    expr: Expr
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(frozen=True)
class Script:
    statements: tuple


# argument kinds: "expr", "nat" (INT >= 0), "pos" (INT >= 1), "subgroup"
SIGNATURES: dict[str, tuple[str, ...]] = {
    "euclidean": ("nat",),
    "circle": ("pos",),
    "rotsphere": ("pos",),
    "cone": ("expr",),
    "product": ("expr", "expr"),
    "quotient": ("expr", "subgroup"),
    "unfold": ("expr",),
    "unfold_all": ("expr",),
    "depth": ("expr",),
    "validate": ("expr",),
    "iso": ("expr", "expr"),
}

KEYWORDS = {"let", "print", "emit"}
EMIT_FORMATS = ("dot", "json")


# ---------------------------------------------------------------- lexer


@dataclass(frozen=True)
class Token:
    kind: str  # "ID", "INT", "EOF" or the punctuation itself
    text: str
    span: Span


_TOKEN_RE = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<int>-?\d+)"
                       r"|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),;=<>])")


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "int":
            tokens.append(Token("INT", m.group(), span))
        elif kind == "id":
            tokens.append(Token("ID", m.group(), span))
        elif kind == "punct":
            tokens.append(Token(m.group(), m.group(), span))
        pos = m.end()
    tokens.append(Token("EOF", "", Span(line, pos - line_start + 1)))
    return tokens


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str, bound: set[str]):
        self.tokens = tokenize(text)
        self.i = 0
        self.bound = bound

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(f"unexpected {found}", t.span, frozenset(expected))

    def expect(self, kind: str, shown: str | None = None) -> Token:
        if self.tok.kind != kind:
            self.fail({shown or f"'{kind}'"})
        t = self.tok
        self.i += 1
        return t

    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "EOF":
            stmts.append(self.statement())
        return Script(tuple(stmts))

    def statement(self):
        t = self.tok
        if t.kind == "ID" and t.text == "let":
            self.i += 1
            name_tok = self.expect("ID", "identifier")
            name = name_tok.text
            if name in KEYWORDS or name in SIGNATURES:
                raise ParseError(f"{name!r} is reserved and cannot be bound", name_tok.span)
            if name in self.bound:
                raise ParseError(f"identifier {name!r} is already bound", name_tok.span)
            self.expect("=")
            e = self.expr()
            self.expect(";")
            self.bound.add(name)
            return Let(name, e, t.span)
        if t.kind == "ID" and t.text == "print":
            self.i += 1
            e = self.expr()
            self.expect(";")
            return Print(e, t.span)
        if t.kind == "ID" and t.text == "emit":
            self.i += 1
            if self.tok.kind != "ID" or self.tok.text not in EMIT_FORMATS:
                self.fail({f"'{f}'" for f in EMIT_FORMATS})
            fmt = self.tok.text
            self.i += 1
            e = self.expr()
            self.expect(";")
            return Emit(fmt, e, t.span)
        self.fail({"'let'", "'print'", "'emit'"})

    def expr(self):
        t = self.tok
        if t.kind != "ID" or t.text in KEYWORDS:
            self.fail({"expr"})
        self.i += 1
        if self.tok.kind == "(":
            if t.text not in SIGNATURES:
                raise ParseError(f"unknown function {t.text!r}", t.span)
            return self.call(t)
        if t.text in SIGNATURES:
            self.fail({"'('"})
        if t.text not in self.bound:
            raise ParseError(f"unbound identifier {t.text!r}", t.span)
        return Ref(t.text, t.span)

    def call(self, name_tok: Token) -> Call:
        self.expect("(")
        kinds = SIGNATURES[name_tok.text]
        args = []
        for j, kind in enumerate(kinds):
            if j:
                self.expect(",")
            args.append(self.argument(kind))
        if self.tok.kind == ",":
            raise ParseError(f"{name_tok.text} takes {len(kinds)} argument(s)", self.tok.span)
        self.expect(")")
        return Call(name_tok.text, tuple(args), name_tok.span)

    def argument(self, kind: str):
        if kind == "expr":
            return self.expr()
        if kind == "subgroup":
            return self.subgroup()
        t = self.expect("INT", "integer")
        value = int(t.text)
        low = 0 if kind == "nat" else 1
        if value < low:
            raise ParseError(f"integer {value} out of range (need >= {low})", t.span)
        return IntLit(value, t.span)

    def subgroup(self) -> SubgroupLit:
        start = self.expect("<", "subgroup literal '<...>'")
        gens = [self.group_tuple()]
        while self.tok.kind == ",":
            self.i += 1
            gens.append(self.group_tuple())
        self.expect(">")
        return SubgroupLit(tuple(gens), start.span)

    def group_tuple(self) -> tuple[int, ...]:
        if self.tok.kind == "INT":
            return (int(self.expect("INT").text),)
        if self.tok.kind != "(":
            self.fail({"integer", "'('"})
        self.i += 1
        parts = [int(self.expect("INT", "integer").text)]
        while self.tok.kind == ",":
            self.i += 1
            parts.append(int(self.expect("INT", "integer").text))
        self.expect(")")
        return tuple(parts)


def parse(text: str, bound: set[str] | None = None) -> Script:
    """Parse a script; `bound` carries names defined earlier (REPL) and is updated in place."""
    names = set() if bound is None else bound
    scratch = set(names)
    script = _Parser(text, scratch).script()
    names |= scratch
    return script


# ---------------------------------------------------------------- pretty-printer


def format_expr(e) -> str:
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, SubgroupLit):
        return "<" + ", ".join(_format_tuple(g) for g in e.generators) + ">"
    return f"{e.name}(" + ", ".join(format_expr(a) for a in e.args) + ")"


def _format_tuple(g: tuple[int, ...]) -> str:
    return str(g[0]) if len(g) == 1 else "(" + ", ".join(map(str, g)) + ")"


def format_statement(s) -> str:
    if isinstance(s, Let):
        return f"let {s.name} = {format_expr(s.expr)};"
    if isinstance(s, Print):
        return f"print {format_expr(s.expr)};"
    return f"emit {s.fmt} {format_expr(s.expr)};"


def format_script(script: Script) -> str:
    return "".join(format_statement(s) + "\n" for s in script.statements)
