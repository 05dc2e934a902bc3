"""Enumeration with a backtrack stack.

The :class:`TrailStack` listens to the ``trailing`` slot of each variable
and saves the outgoing domain the first time a variable changes after a
choice point. Restoring goes through ``reinit_domain`` so that undoing a
choice emits no propagation events.

:class:`RoundRobinEnumerator` picks the next uninstantiated variable
cyclically in declaration order, tries values in ascending order, and
reruns the scheduler after every assignment. The search loop is
iterative: its depth is bounded by the number of variables only through
an explicit stack.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .domain import FiniteDomain
from .errors import StateError
from .events import Bus, Connection, Port
from .scheduler import Scheduler
from .variable import DOMAIN, Variable


class TrailStack:
    def __init__(self, bus: Bus, name: str | None = None):
        self.bus = bus
        self.name = bus.register_owner(name) if name else bus.fresh_owner("trail")
        self.frames: list[tuple[str, FiniteDomain]] = []
        self.marks: list[int] = []
        self._saved: list[set[str]] = []
        self._save: dict[str, Port] = {}
        self._restore: dict[str, Port] = {}
        self._conns: list[Connection] = []

    def prepare(self, variables: Sequence[Variable]) -> None:
        """Create the save/restore ports for ``variables`` without connecting them."""
        for v in variables:
            if v.id not in self._save:
                self._save[v.id] = self.bus.input_port(self.name, f"save[{v.id}]", DOMAIN,
                                                       lambda d, vid=v.id: self.save(vid, d))
                self._restore[v.id] = self.bus.output_port(self.name, f"restore[{v.id}]", DOMAIN)

    def attach(self, variables: Sequence[Variable]) -> None:
        """Connect to the variables' trailing and reinit slots."""
        if self._conns:
            return
        self.prepare(variables)
        for v in variables:
            self._conns.append(self.bus.connect(v.trailing, self._save[v.id]))
            self._conns.append(self.bus.connect(self._restore[v.id], v.reinit_domain))

    def detach(self) -> None:
        for conn in self._conns:
            self.bus.disconnect(conn)
        self._conns.clear()

    def save(self, var_id: str, old: FiniteDomain) -> None:
        if not self.marks or var_id in self._saved[-1]:
            return
        self._saved[-1].add(var_id)
        self.frames.append((var_id, old))

    def push_mark(self) -> int:
        self.marks.append(len(self.frames))
        self._saved.append(set())
        return len(self.marks)

    def restore_to_mark(self) -> None:
        """Undo every change since the newest mark, keeping the mark."""
        base = self.marks[-1]
        while len(self.frames) > base:
            var_id, dom = self.frames.pop()
            self.bus.emit(self._restore[var_id], dom)
        self._saved[-1].clear()

    def pop_to_mark(self) -> None:
        self.restore_to_mark()
        self.marks.pop()
        self._saved.pop()

    def __len__(self) -> int:
        return len(self.frames)

    def is_empty(self) -> bool:
        return not self.frames and not self.marks


@dataclass
class _ChoicePoint:
    index: int
    values: deque


class RoundRobinEnumerator:
    IDLE, SEARCHING, EXHAUSTED = "idle", "searching", "exhausted"

    def __init__(self, bus: Bus, scheduler: Scheduler, variables: Sequence[Variable],
                 name: str | None = None):
        self.bus = bus
        self.scheduler = scheduler
        self.variables = list(variables)
        self.name = bus.register_owner(name) if name else bus.fresh_owner("enumerator")
        self.trail = TrailStack(bus, name=f"{self.name}.trail")
        self.trail.prepare(self.variables)
        self.state = self.IDLE
        self.cursor = 0
        self.solutions_found = 0
        self._stack: list[_ChoicePoint] = []
        self._assign: dict[str, Port] = {}
        for v in self.variables:
            self._assign[v.id] = bus.output_port(self.name, f"assign[{v.id}]", DOMAIN)
            bus.connect(self._assign[v.id], v.get_domain)

    # -- public protocol -------------------------------------------------------

    def first_solution(self) -> bool:
        """Start the search. The caller is expected to have run the scheduler."""
        if self.state == self.SEARCHING:
            self._abandon()
        self.solutions_found = 0
        if self.scheduler.active and not self.scheduler.run():
            return self._finish()
        if self.scheduler.failed:
            return self._finish()
        self.trail.attach(self.variables)
        self.state = self.SEARCHING
        return self._search(resume=False)

    def next_solution(self) -> bool:
        if self.state == self.IDLE:
            raise StateError("next_solution() called before first_solution()")
        if self.state == self.EXHAUSTED:
            return False
        return self._search(resume=True)

    def solutions(self) -> Iterator[dict[str, int]]:
        found = self.first_solution()
        while found:
            yield self.assignment()
            found = self.next_solution()

    def solve_all(self) -> list[dict[str, int]]:
        return list(self.solutions())

    def count_solutions(self) -> int:
        return sum(1 for _ in self.solutions())

    def assignment(self) -> dict[str, int]:
        return {v.id: v.domain.value() for v in self.variables}

    # -- search loop -----------------------------------------------------------

    def _select(self) -> int | None:
        n = len(self.variables)
        start = self._stack[-1].index + 1 if self._stack else 0
        for k in range(n):
            i = (start + k) % n
            if not self.variables[i].domain.is_singleton():
                return i
        return None

    def _advance(self) -> bool:
        """Try the next candidate of the newest choice point, backtracking as needed."""
        while self._stack:
            cp = self._stack[-1]
            self.trail.restore_to_mark()
            if not cp.values:
                self._stack.pop()
                self.trail.pop_to_mark()
                continue
            value = cp.values.popleft()
            var = self.variables[cp.index]
            self.cursor = cp.index
            self.bus.emit(self._assign[var.id], FiniteDomain.singleton(value))
            if self.scheduler.run():
                return True
        return False

    def _search(self, resume: bool) -> bool:
        if resume and not self._advance():
            return self._finish()
        while True:
            i = self._select()
            if i is None:
                self.solutions_found += 1
                return True
            self.trail.push_mark()
            self._stack.append(_ChoicePoint(i, deque(self.variables[i].domain)))
            if not self._advance():
                return self._finish()

    def _finish(self) -> bool:
        if self.state == self.SEARCHING:
            self.trail.detach()
        self.state = self.EXHAUSTED
        return False

    def _abandon(self) -> None:
        while self._stack:
            self._stack.pop()
            self.trail.pop_to_mark()
        self.trail.detach()
        self.state = self.IDLE
