"""Constraints and their narrowing operators.

A :class:`Constraint` is wired to its variables through ports. On
invocation it pulls the scope domains with share requests, pushes a
:class:`DomainMessage` down its marshalled ``narrow`` slot, where the
attached narrowing operators tighten it in attachment order, then sends
every narrowed domain back to the owning variable.

Constraints do not decide when they run. A variable event reaching
``get_notified`` either asks for reinvocation (deferred, the default)
or invokes the constraint on the spot (``immediate=True``). Immediate
mode is meant for instantiation events; on ``domain_changed`` a cycle
of immediate constraints re-enters a variable slot and raises
:class:`~slotcsp.errors.ReentrancyError`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .domain import FiniteDomain
from .errors import CapacityError, NotFoundError, ScopeError
from .events import Bus, Connection, DomainMessage, Port
from .variable import DOMAIN, DOMAIN_REQUEST, Variable

MESSAGE = "domain_message"
SCHEDULABLE = "schedulable"

DEFAULT_TABLE_CAP = 10**6


# -- relations ---------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        for t in self.tuples:
            if len(t) != self.arity:
                raise ValueError(f"tuple {t} does not have arity {self.arity}")

    @classmethod
    def extensional(cls, tuples: Iterable[Sequence[int]], arity: int | None = None) -> Relation:
        tuples = frozenset(tuple(t) for t in tuples)
        if arity is None:
            if not tuples:
                raise ValueError("arity required for an empty relation")
            arity = len(next(iter(tuples)))
        return cls(arity, tuples)

    @classmethod
    def from_predicate(cls, domains: Sequence[FiniteDomain], predicate: Callable[..., bool],
                       cap: int = DEFAULT_TABLE_CAP) -> Relation:
        """Tabulate ``predicate`` over the product of ``domains``."""
        total = 1
        for d in domains:
            total *= d.size()
        if total > cap:
            raise CapacityError(f"table expansion needs {total} tuples, cap is {cap}")
        tuples = frozenset(t for t in itertools.product(*domains) if predicate(*t))
        return cls(len(domains), tuples)

    def __contains__(self, t: tuple[int, ...]) -> bool:
        return t in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)


# -- pure narrowing functions ------------------------------------------------


def hyperarc_revise(rel: Relation, domains: Sequence[FiniteDomain]) -> list[FiniteDomain]:
    """Project the tuples of ``rel`` lying inside the box onto each coordinate."""
    if len(domains) != rel.arity:
        raise ScopeError(f"relation arity {rel.arity} but {len(domains)} domains given")
    supports: list[set[int]] = [set() for _ in domains]
    for t in rel.tuples:
        if all(v in d for v, d in zip(t, domains)):
            for s, v in zip(supports, t):
                s.add(v)
    return [FiniteDomain.from_values(s) for s in supports]


def out_of(d: int, cst: int, dx: FiniteDomain) -> FiniteDomain:
    """``dx`` without ``d``, ``d + cst`` and ``d - cst``."""
    return dx.remove(d).remove(d + cst).remove(d - cst)


# -- narrowing operators -----------------------------------------------------


def _wipe(msg: DomainMessage, scope: Sequence[str]) -> DomainMessage:
    # an empty input box supports nothing; emptying all of it keeps operators monotone
    return msg.replace({v: FiniteDomain() for v in scope})


class NarrowingOperator:
    """A component on a constraint's marshalled channel.

    Subclasses implement :meth:`narrow`, which must be contracting and
    must never drop a tuple of the constraint's relation.
    """

    kind = "cno"

    def __init__(self, scope: Sequence[str]):
        self.scope = tuple(scope)
        self.port: Port | None = None
        self.bus: Bus | None = None
        self.name = type(self).__name__

    def bind(self, bus: Bus) -> Port:
        if self.port is None:
            self.bus = bus
            self.name = bus.fresh_owner(self.kind)
            self.port = bus.input_port(self.name, "receive", MESSAGE, self.__call__)
        elif self.bus is not bus:
            raise ScopeError(f"{self.name} already belongs to another bus")
        return self.port

    def __call__(self, msg: DomainMessage) -> DomainMessage:
        return self.narrow(msg)

    def narrow(self, msg: DomainMessage) -> DomainMessage:
        raise NotImplementedError


class HyperArcRevise(NarrowingOperator):
    kind = "revise"

    def __init__(self, relation: Relation, scope: Sequence[str]):
        super().__init__(scope)
        if len(self.scope) != relation.arity:
            raise ScopeError(f"relation arity {relation.arity} but scope has {len(self.scope)} variables")
        self.relation = relation

    def narrow(self, msg: DomainMessage) -> DomainMessage:
        narrowed = hyperarc_revise(self.relation, [msg[v] for v in self.scope])
        return msg.replace(dict(zip(self.scope, narrowed)))


class OutOf(NarrowingOperator):
    """Once ``source`` is instantiated to d, remove d + o from ``target`` for each offset o."""

    kind = "out_of"

    def __init__(self, target: str, source: str, offsets: Iterable[int]):
        super().__init__((target, source))
        self.target = target
        self.source = source
        self.offsets = tuple(sorted(set(offsets)))

    @classmethod
    def diagonal(cls, target: str, source: str, cst: int) -> OutOf:
        return cls(target, source, (0, cst, -cst))

    def narrow(self, msg: DomainMessage) -> DomainMessage:
        src = msg[self.source]
        if src.is_empty():
            return _wipe(msg, self.scope)
        if not src.is_singleton():
            return msg
        d = src.value()
        dx = msg[self.target].remove_all(d + o for o in self.offsets)
        return msg.replace({self.target: dx})


class AllDiffInstantiation(NarrowingOperator):
    """Remove each instantiated value from every other domain of the scope."""

    kind = "alldiff"

    def narrow(self, msg: DomainMessage) -> DomainMessage:
        doms = {v: msg[v] for v in self.scope}
        if any(d.is_empty() for d in doms.values()):
            return _wipe(msg, self.scope)
        done: set[str] = set()
        while True:
            fresh = [v for v in self.scope if v not in done and doms[v].is_singleton()]
            if not fresh:
                break
            for v in fresh:
                done.add(v)
                if not doms[v].is_singleton():
                    continue  # emptied by an earlier removal in this sweep
                value = doms[v].value()
                for w in self.scope:
                    if w != v:
                        doms[w] = doms[w].remove(value)
        return msg.replace(doms)


# -- constraints -------------------------------------------------------------


class Constraint:
    def __init__(self, bus: Bus, variables: Sequence[Variable], *, watch: str = "domain_changed",
                 immediate: bool = False, name: str | None = None, label: str = ""):
        if not variables:
            raise ScopeError("a constraint needs at least one variable")
        ids = [v.id for v in variables]
        if len(set(ids)) != len(ids):
            raise ScopeError(f"repeated variable in scope {ids}")
        self.bus = bus
        self.id = bus.register_owner(name) if name else bus.fresh_owner("c")
        self.name = self.id
        self.label = label
        self.variables = tuple(variables)
        self.scope = tuple(ids)
        self.watch = watch
        self.immediate = immediate
        for v in variables:
            v.port(watch)  # fail early on a missing slot

        self.narrow = bus.output_port(self.id, "narrow", MESSAGE)
        self.ask_for_reinvocation = bus.output_port(self.id, "ask_for_reinvocation", SCHEDULABLE)
        self.get_notified: dict[str, Port] = {}
        self._ask_domain: dict[str, Port] = {}
        self._send_domain: dict[str, Port] = {}
        for v in variables:
            self.get_notified[v.id] = bus.input_port(
                self.id, f"get_notified[{v.id}]", DOMAIN,
                lambda d, vid=v.id: self.on_notified(vid, d))
            self._ask_domain[v.id] = bus.output_port(self.id, f"ask_domain[{v.id}]", DOMAIN_REQUEST)
            self._send_domain[v.id] = bus.output_port(self.id, f"send_domain[{v.id}]", DOMAIN)
            bus.connect(self._ask_domain[v.id], v.sharing_domain)
            bus.connect(self._send_domain[v.id], v.get_domain)
        self._cnos: dict[int, tuple[NarrowingOperator, Connection]] = {}
        self.invocations = 0
        self.prunings = 0

    @property
    def cnos(self) -> list[NarrowingOperator]:
        return [n for n, _ in self._cnos.values()]

    def attach_cno(self, cno: NarrowingOperator) -> None:
        extra = set(cno.scope) - set(self.scope)
        if extra:
            raise ScopeError(f"{cno.name} works on {sorted(extra)} outside the scope of {self.id}")
        if id(cno) in self._cnos:
            raise ScopeError(f"{cno.name} is already attached to {self.id}")
        conn = self.bus.connect(self.narrow, cno.bind(self.bus))
        self._cnos[id(cno)] = (cno, conn)

    def detach_cno(self, cno: NarrowingOperator) -> None:
        entry = self._cnos.pop(id(cno), None)
        if entry is None:
            raise NotFoundError(f"{cno.name} is not attached to {self.id}")
        self.bus.disconnect(entry[1])

    def on_notified(self, var_id: str, domain: FiniteDomain) -> None:
        if var_id not in self.scope:
            raise ScopeError(f"{self.id} notified by {var_id}, which is not in its scope")
        if self.immediate:
            self.invoke()
        else:
            self.bus.emit(self.ask_for_reinvocation, self)

    def current_message(self) -> DomainMessage:
        return DomainMessage(tuple((vid, self.bus.share(self._ask_domain[vid])) for vid in self.scope))

    def invoke(self) -> bool:
        """Narrow the scope once; False means a failure was detected."""
        self.invocations += 1
        msg = self.current_message()
        result = self.bus.emit_marshalled(self.narrow, msg)
        ok = not result.failure
        for vid, dom in result.domains:
            # re-read: an earlier push may already have narrowed this one
            current = self.bus.share(self._ask_domain[vid])
            new = current & dom
            if new != current:
                self.prunings += 1
                self.bus.emit(self._send_domain[vid], new)
            if new.is_empty():
                ok = False
        return ok

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"<Constraint {self.id}{tag} on {','.join(self.scope)}>"


def table_constraint(bus: Bus, variables: Sequence[Variable], relation: Relation, **kw) -> Constraint:
    c = Constraint(bus, variables, label="table", **kw)
    c.attach_cno(HyperArcRevise(relation, c.scope))
    return c


def _table_for_offset(x: Variable, y: Variable, offsets: Sequence[int], cap: int) -> Relation:
    return Relation.from_predicate([x.domain, y.domain],
                                   lambda a, b: all(a != b + o for o in offsets), cap)


def not_equal(bus: Bus, x: Variable, y: Variable, offset: int = 0, *, complete: bool = False,
              cap: int = DEFAULT_TABLE_CAP, **kw) -> Constraint:
    """``x != y + offset``.

    Instantiation-driven by default. With ``complete`` the constraint also
    carries a hyper-arc table and reacts to every domain change.
    """
    c = Constraint(bus, [x, y], watch="domain_changed" if complete else "instantiated",
                   label=f"{x.id} != {y.id}{offset:+d}" if offset else f"{x.id} != {y.id}", **kw)
    c.attach_cno(OutOf(x.id, y.id, (offset,)))
    c.attach_cno(OutOf(y.id, x.id, (-offset,)))
    if complete:
        c.attach_cno(HyperArcRevise(_table_for_offset(x, y, (offset,), cap), c.scope))
    return c


def diff3(bus: Bus, x: Variable, y: Variable, i: int, *, complete: bool = False,
          cap: int = DEFAULT_TABLE_CAP, **kw) -> Constraint:
    """``x != y``, ``x != y + i`` and ``x != y - i`` as one constraint."""
    if x.id == y.id:
        raise ScopeError("diff3 needs two distinct variables")
    c = Constraint(bus, [x, y], watch="domain_changed" if complete else "instantiated",
                   label=f"diff3({x.id},{y.id},{i})", **kw)
    c.attach_cno(OutOf.diagonal(x.id, y.id, i))
    c.attach_cno(OutOf.diagonal(y.id, x.id, i))
    if complete:
        c.attach_cno(HyperArcRevise(_table_for_offset(x, y, (0, i, -i), cap), c.scope))
    return c


def alldiff_instantiation(bus: Bus, variables: Sequence[Variable], **kw) -> Constraint:
    if len(variables) < 2:
        raise ScopeError("alldiff needs at least two variables")
    c = Constraint(bus, variables, watch="instantiated", label="alldiff", **kw)
    c.attach_cno(AllDiffInstantiation(c.scope))
    return c
