"""Propagation driver.

The scheduler keeps the propagation set: a queue of schedulable items
plus a membership set, so an item is never queued twice. :meth:`Scheduler.run`
pops items and invokes them until the set is empty (a fixpoint) or a
failure shows up, either as an invoke returning False or as a variable
announcing an empty domain.

Two connection schemes are available:

``"constraint"``
    variable events reach the constraints, which ask for reinvocation;
    the queue holds constraints.
``"variable"``
    variable events reach a :class:`VariableItem`, which asks for its own
    reinvocation; popping it invokes every constraint watching the variable.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Protocol

from .constraint import SCHEDULABLE, Constraint
from .domain import FiniteDomain
from .errors import DuplicateError, ReentrancyError
from .events import Bus, Port
from .variable import DOMAIN, Variable

SCHEMES = ("constraint", "variable")
POLICIES = ("fifo", "lifo", "random")


class Schedulable(Protocol):
    name: str

    def invoke(self) -> bool: ...


@dataclass
class Stats:
    pops: int = 0
    invocations: int = 0
    prunings: int = 0

    def __str__(self) -> str:
        return f"pops={self.pops} invocations={self.invocations} prunings={self.prunings}"


class VariableItem:
    """A variable as a unit of scheduling, for the variable-oriented scheme."""

    def __init__(self, bus: Bus, variable: Variable):
        self.bus = bus
        self.variable = variable
        self.name = bus.fresh_owner(f"q[{variable.id}]#")
        self.watchers: list[Constraint] = []
        self._events: set[str] = set()
        self.notified = bus.input_port(self.name, "get_notified", DOMAIN, self._on_event)
        self.ask_for_reinvocation = bus.output_port(self.name, "ask_for_reinvocation", SCHEDULABLE)
        self.stats: Stats | None = None

    def watch(self, constraint: Constraint) -> None:
        self.watchers.append(constraint)
        if constraint.watch not in self._events:
            self._events.add(constraint.watch)
            self.bus.connect(self.variable.port(constraint.watch), self.notified)

    def _on_event(self, _domain: FiniteDomain) -> None:
        self.bus.emit(self.ask_for_reinvocation, self)

    def invoke(self) -> bool:
        for c in self.watchers:
            if self.stats is not None:
                self.stats.invocations += 1
            if not c.invoke():
                return False
        return True

    def __repr__(self) -> str:
        return f"<VariableItem {self.variable.id} x{len(self.watchers)}>"


def variable_scheme_adapter(bus: Bus, constraints: Iterable[Constraint]) -> dict[str, VariableItem]:
    """Wrap every variable in scope of ``constraints`` as a schedulable item."""
    items: dict[str, VariableItem] = {}
    for c in constraints:
        for v in c.variables:
            if v.id not in items:
                items[v.id] = VariableItem(bus, v)
            items[v.id].watch(c)
    return items


class Scheduler:
    def __init__(self, bus: Bus, scheme: str = "constraint", policy: str = "fifo",
                 seed: int | None = None, name: str | None = None):
        if scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {scheme!r}")
        if policy not in POLICIES:
            raise ValueError(f"unknown pop policy {policy!r}")
        self.bus = bus
        self.scheme = scheme
        self.policy = policy
        self._rng = random.Random(seed)
        self.name = bus.register_owner(name) if name else bus.fresh_owner("scheduler")
        self.reinvoke = bus.input_port(self.name, "reinvoke", SCHEDULABLE, self.schedule)
        self.posted: list[Constraint] = []
        self._posted_ids: set[str] = set()
        self.variables: dict[str, Variable] = {}
        self.items: dict[str, VariableItem] = {}
        self._queue: deque = deque()
        self._members: set[int] = set()
        self._running = False
        self._empty_seen = False
        self.stats = Stats()

    # -- registration --------------------------------------------------------

    def _watch_variable(self, v: Variable) -> None:
        if v.id in self.variables:
            return
        self.variables[v.id] = v
        port = self.bus.input_port(self.name, f"watch[{v.id}]", DOMAIN, self._on_domain_changed)
        self.bus.connect(v.domain_changed, port)

    def _on_domain_changed(self, d: FiniteDomain) -> None:
        if self._running:
            self.stats.prunings += 1
        if d.is_empty():
            self._empty_seen = True

    def post(self, c: Constraint) -> None:
        if c.id in self._posted_ids:
            raise DuplicateError(f"{c.id} is already posted")
        self._posted_ids.add(c.id)
        self.posted.append(c)
        for v in c.variables:
            self._watch_variable(v)

        if c.immediate:
            for v in c.variables:
                self.bus.connect(v.port(c.watch), c.get_notified[v.id])

        if self.scheme == "constraint":
            if not c.immediate:
                for v in c.variables:
                    self.bus.connect(v.port(c.watch), c.get_notified[v.id])
                self.bus.connect(c.ask_for_reinvocation, self.reinvoke)
            self.schedule(c)
        else:
            for v in c.variables:
                item = self.items.get(v.id)
                if item is None:
                    item = self.items[v.id] = VariableItem(self.bus, v)
                    item.stats = self.stats
                    self.bus.connect(item.ask_for_reinvocation, self.reinvoke)
                item.watch(c)
                self.schedule(item)

    # -- the propagation set ---------------------------------------------------

    @property
    def active(self) -> list:
        return list(self._queue)

    def schedule(self, item: Schedulable) -> None:
        key = id(item)
        if key in self._members:
            return
        self._members.add(key)
        self._queue.append(item)

    def _pop(self) -> Schedulable:
        if self.policy == "fifo":
            item = self._queue.popleft()
        elif self.policy == "lifo":
            item = self._queue.pop()
        else:
            i = self._rng.randrange(len(self._queue))
            self._queue.rotate(-i)
            item = self._queue.popleft()
            self._queue.rotate(i)
        self._members.discard(id(item))
        return item

    def clear(self) -> None:
        self._queue.clear()
        self._members.clear()

    @property
    def failed(self) -> bool:
        return any(v.domain.is_empty() for v in self.variables.values())

    def run(self) -> bool:
        """Propagate to a fixpoint. False if some domain became empty."""
        if self._running:
            raise ReentrancyError(f"{self.name} is already running")
        self._running = True
        self._empty_seen = False
        try:
            ok = not self.failed
            while ok and self._queue:
                item = self._pop()
                self.stats.pops += 1
                # popped before invoking: its own effects may queue it again
                if isinstance(item, Constraint):
                    self.stats.invocations += 1
                ok = item.invoke() and not self._empty_seen
            if not ok:
                self.clear()
            return ok
        finally:
            self._running = False
            self._empty_seen = False

    def __repr__(self) -> str:
        return f"<Scheduler {self.name} {self.scheme}/{self.policy} posted={len(self.posted)}>"


class FifoScheduler(Scheduler):
    def __init__(self, bus: Bus, scheme: str = "constraint", **kw):
        super().__init__(bus, scheme=scheme, policy="fifo", **kw)
