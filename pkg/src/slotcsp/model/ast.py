"""Syntax tree of the model language, and its printer.

Source positions ride along on every node but are excluded from
equality, so a model printed and parsed again compares equal to the
original tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..domain import FiniteDomain


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NOWHERE = Pos(0, 0)


def _pos():
    return field(default=NOWHERE, compare=False, repr=False)


@dataclass(frozen=True)
class Name:
    text: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class DomValue:
    value: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class DomRange:
    lo: int
    hi: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class DomGroup:
    items: tuple[DomItem, ...]
    pos: Pos = _pos()


DomItem = Union[DomValue, DomRange, DomGroup]


def evaluate(items: tuple[DomItem, ...]) -> FiniteDomain:
    d = FiniteDomain()
    for item in items:
        if isinstance(item, DomValue):
            d = d | FiniteDomain.singleton(item.value)
        elif isinstance(item, DomRange):
            d = d | FiniteDomain.interval(item.lo, item.hi)
        else:
            d = d | evaluate(item.items)
    return d


@dataclass(frozen=True)
class VarDecl:
    name: Name
    domain: tuple[DomItem, ...]
    pos: Pos = _pos()

    def value(self) -> FiniteDomain:
        return evaluate(self.domain)


@dataclass(frozen=True)
class NotEqual:
    left: Name
    right: Name
    offset: int = 0
    pos: Pos = _pos()

    @property
    def names(self) -> tuple[Name, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class AllDiff:
    names: tuple[Name, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Table:
    names: tuple[Name, ...]
    tuples: tuple[tuple[int, ...], ...]
    pos: Pos = _pos()


ConstraintDecl = Union[NotEqual, AllDiff, Table]


@dataclass(frozen=True)
class ModelAst:
    variables: tuple[VarDecl, ...] = ()
    constraints: tuple[ConstraintDecl, ...] = ()


# -- printing ------------------------------------------------------------------


def _dom(items) -> str:
    out = []
    for item in items:
        if isinstance(item, DomValue):
            out.append(str(item.value))
        elif isinstance(item, DomRange):
            out.append(f"{item.lo}..{item.hi}")
        else:
            out.append("{" + _dom(item.items) + "}")
    return ", ".join(out)


def _names(names) -> str:
    return ", ".join(n.text for n in names)


def render_constraint(c: ConstraintDecl) -> str:
    if isinstance(c, NotEqual):
        tail = ""
        if c.offset > 0:
            tail = f" + {c.offset}"
        elif c.offset < 0:
            tail = f" - {-c.offset}"
        return f"{c.left.text} != {c.right.text}{tail}"
    if isinstance(c, AllDiff):
        return f"alldiff({_names(c.names)})"
    rows = ", ".join("(" + ", ".join(map(str, t)) + ")" for t in c.tuples)
    return f"table({_names(c.names)}) in {{{rows}}}"


def render(model: ModelAst) -> str:
    lines = [f"var {v.name.text} in {_dom(v.domain)};" for v in model.variables]
    lines += [f"constraint {render_constraint(c)};" for c in model.constraints]
    return "\n".join(lines) + ("\n" if lines else "")
