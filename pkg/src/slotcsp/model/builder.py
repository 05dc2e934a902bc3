"""Turn a parsed model (or the n-queens generator) into wired components."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..constraint import (
    DEFAULT_TABLE_CAP,
    Constraint,
    Relation,
    alldiff_instantiation,
    diff3,
    not_equal,
    table_constraint,
)
from ..domain import FiniteDomain
from ..errors import CapacityError
from ..events import Bus
from ..scheduler import Scheduler
from ..search import RoundRobinEnumerator
from ..variable import IntegralVariable
from .ast import AllDiff, ModelAst, NotEqual, Table


@dataclass
class Model:
    bus: Bus
    variables: list[IntegralVariable]
    constraints: list[Constraint]
    scheduler: Scheduler
    enumerator: RoundRobinEnumerator = field(repr=False)

    def run(self) -> bool:
        return self.scheduler.run()

    def solutions(self):
        """Propagate, then stream every solution as a dict keyed by variable name."""
        if not self.scheduler.run():
            return
        yield from self.enumerator.solutions()

    def solve_all(self) -> list[dict[str, int]]:
        return list(self.solutions())

    def count(self) -> int:
        return sum(1 for _ in self.solutions())

    def domains(self) -> dict[str, FiniteDomain]:
        return {v.id: v.domain for v in self.variables}


def _assemble(bus, variables, constraints, scheme, policy, seed) -> Model:
    scheduler = Scheduler(bus, scheme=scheme, policy=policy, seed=seed)
    for c in constraints:
        scheduler.post(c)
    enumerator = RoundRobinEnumerator(bus, scheduler, variables)
    return Model(bus, variables, constraints, scheduler, enumerator)


def build(ast: ModelAst, scheme: str = "constraint", complete: bool = False,
          cap: int = DEFAULT_TABLE_CAP, policy: str = "fifo", seed: int | None = None,
          bus: Bus | None = None) -> Model:
    bus = bus or Bus()
    variables = [IntegralVariable(bus, d.name.text, d.value()) for d in ast.variables]
    by_name = {v.id: v for v in variables}
    constraints = []
    for decl in ast.constraints:
        if isinstance(decl, NotEqual):
            c = not_equal(bus, by_name[decl.left.text], by_name[decl.right.text], decl.offset,
                          complete=complete, cap=cap)
        elif isinstance(decl, AllDiff):
            c = alldiff_instantiation(bus, [by_name[n.text] for n in decl.names])
        elif isinstance(decl, Table):
            if len(decl.tuples) > cap:
                raise CapacityError(f"table has {len(decl.tuples)} tuples, cap is {cap}")
            rel = Relation(len(decl.names), frozenset(decl.tuples))
            c = table_constraint(bus, [by_name[n.text] for n in decl.names], rel)
        else:
            raise TypeError(f"unknown constraint node {decl!r}")
        constraints.append(c)
    return _assemble(bus, variables, constraints, scheme, policy, seed)


def build_nqueens(n: int, scheme: str = "constraint", complete: bool = False,
                  policy: str = "fifo", seed: int | None = None, bus: Bus | None = None) -> Model:
    """Queens x1..xn over 1..n, one diff3 per pair of columns i < j with offset j - i."""
    if n < 1:
        raise ValueError("n must be positive")
    bus = bus or Bus()
    xs = [IntegralVariable(bus, f"x{i}", FiniteDomain.interval(1, n)) for i in range(1, n + 1)]
    constraints = []
    for i in range(n):
        for k, j in enumerate(range(i + 1, n), start=1):
            constraints.append(diff3(bus, xs[i], xs[j], k, complete=complete))
    return _assemble(bus, xs, constraints, scheme, policy, seed)
