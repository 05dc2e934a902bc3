"""Lexer and recursive-descent parser for model files.

Grammar::

    model := (stmt ";")*
    stmt  := "var" NAME "in" dom | "constraint" cexpr
    dom   := item ("," item)*
    item  := INT ".." INT | INT | "{" dom "}"
    cexpr := NAME "!=" NAME (("+" | "-") INT)?
           | "alldiff" "(" NAME ("," NAME)+ ")"
           | "table" "(" NAME ("," NAME)* ")" "in" "{" tuple ("," tuple)* "}"
    tuple := "(" INT ("," INT)* ")"

``#`` starts a comment running to the end of the line. Integers may carry
a leading minus sign.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import AllDiff, DomGroup, DomRange, DomValue, ModelAst, Name, NotEqual, Pos, Table, VarDecl


class ModelError(Exception):
    def __init__(self, message: str, pos: Pos):
        super().__init__(f"{pos}: {message}")
        self.message = message
        self.pos = pos

    @property
    def line(self) -> int:
        return self.pos.line

    @property
    def col(self) -> int:
        return self.pos.col


class ModelSyntaxError(ModelError):
    def __init__(self, message: str, pos: Pos, expected: frozenset[str] = frozenset()):
        if expected:
            message = f"{message}; expected one of {', '.join(sorted(expected))}"
        super().__init__(message, pos)
        self.expected = expected


class UndeclaredVariable(ModelError):
    pass


class DuplicateName(ModelError):
    pass


class ArityMismatch(ModelError):
    pass


KEYWORDS = {"var", "in", "constraint"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<INT>[0-9]+)
  | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>\.\.|!=|[;,{}()+\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "INT", "NAME", a keyword, a symbol, or "EOF"
    text: str
    pos: Pos

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        pos = Pos(line, i - line_start + 1)
        if m is None:
            raise ModelSyntaxError(f"unexpected character {text[i]!r}", pos)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "NAME":
            word = m.group()
            tokens.append(Token(word if word in KEYWORDS else "NAME", word, pos))
        elif kind == "INT":
            tokens.append(Token("INT", m.group(), pos))
        elif kind == "sym":
            tokens.append(Token(m.group(), m.group(), pos))
        i = m.end()
    tokens.append(Token("EOF", "", Pos(line, i - line_start + 1)))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, *expected: str):
        raise ModelSyntaxError(f"unexpected {self.tok.describe()}", self.tok.pos, frozenset(expected))

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, kind: str) -> Token:
        tok = self.accept(kind)
        if tok is None:
            self.error(kind)
        return tok

    # -- productions -----------------------------------------------------------

    def parse_model(self) -> ModelAst:
        variables, constraints = [], []
        while self.tok.kind != "EOF":
            if self.tok.kind == "var":
                variables.append(self.parse_var())
            elif self.tok.kind == "constraint":
                constraints.append(self.parse_constraint())
            else:
                self.error("var", "constraint", "EOF")
            self.expect(";")
        return ModelAst(tuple(variables), tuple(constraints))

    def parse_var(self) -> VarDecl:
        start = self.expect("var").pos
        name = self.parse_name()
        self.expect("in")
        return VarDecl(name, self.parse_dom(), start)

    def parse_name(self) -> Name:
        tok = self.expect("NAME")
        return Name(tok.text, tok.pos)

    def parse_int(self) -> int:
        if self.tok.kind == "-" and self.peek().kind == "INT":
            self.i += 1
            return -int(self.expect("INT").text)
        if self.tok.kind != "INT":
            self.error("INT")
        return int(self.expect("INT").text)

    def parse_dom(self) -> tuple:
        items = [self.parse_item()]
        while self.accept(","):
            items.append(self.parse_item())
        return tuple(items)

    def parse_item(self):
        pos = self.tok.pos
        if self.accept("{"):
            group = DomGroup(self.parse_dom(), pos)
            self.expect("}")
            return group
        if self.tok.kind not in ("INT", "-"):
            self.error("INT", "{")
        lo = self.parse_int()
        if self.accept(".."):
            return DomRange(lo, self.parse_int(), pos)
        return DomValue(lo, pos)

    def parse_constraint(self):
        self.expect("constraint")
        pos = self.tok.pos
        head = self.tok
        if head.kind == "NAME" and head.text in ("alldiff", "table") and self.peek().kind == "(":
            self.i += 1
            return self.parse_alldiff(pos) if head.text == "alldiff" else self.parse_table(pos)
        left = self.parse_name()
        self.expect("!=")
        right = self.parse_name()
        offset = 0
        if self.accept("+"):
            offset = self.parse_int()
        elif self.accept("-"):
            offset = -self.parse_int()
        elif self.tok.kind != ";":
            self.error("+", "-", ";")
        return NotEqual(left, right, offset, pos)

    def parse_name_list(self) -> tuple[Name, ...]:
        self.expect("(")
        names = [self.parse_name()]
        while self.accept(","):
            names.append(self.parse_name())
        self.expect(")")
        return tuple(names)

    def parse_alldiff(self, pos: Pos) -> AllDiff:
        open_pos = self.tok.pos
        names = self.parse_name_list()
        if len(names) < 2:
            raise ModelSyntaxError("alldiff needs at least two variables", open_pos, frozenset({","}))
        return AllDiff(names, pos)

    def parse_table(self, pos: Pos) -> Table:
        names = self.parse_name_list()
        self.expect("in")
        self.expect("{")
        tuples = [self.parse_tuple(len(names))]
        while self.accept(","):
            tuples.append(self.parse_tuple(len(names)))
        self.expect("}")
        return Table(names, tuple(tuples), pos)

    def parse_tuple(self, arity: int) -> tuple[int, ...]:
        pos = self.expect("(").pos
        values = [self.parse_int()]
        while self.accept(","):
            values.append(self.parse_int())
        self.expect(")")
        if len(values) != arity:
            raise ArityMismatch(f"tuple has {len(values)} values, table has arity {arity}", pos)
        return tuple(values)


def check(model: ModelAst) -> None:
    """Semantic checks: unique declarations, declared and distinct constraint arguments."""
    declared: dict[str, Name] = {}
    for v in model.variables:
        if v.name.text in declared:
            raise DuplicateName(f"variable {v.name.text!r} declared twice "
                                f"(first at {declared[v.name.text].pos})", v.name.pos)
        declared[v.name.text] = v.name
    for c in model.constraints:
        seen = set()
        for n in c.names:
            if n.text not in declared:
                raise UndeclaredVariable(f"undeclared variable {n.text!r}", n.pos)
            if n.text in seen:
                raise DuplicateName(f"variable {n.text!r} repeated in one constraint", n.pos)
            seen.add(n.text)


def parse(text: str) -> ModelAst:
    model = Parser(text).parse_model()
    check(model)
    return model
