"""In-process signal/slot bus.

Components own *ports*. Output ports emit, input ports carry a handler.
A sender never sees who is connected; it only names its own output port.
Dispatch is synchronous and depth-first: a handler that emits on another
port has that nested dispatch finish before the outer one resumes.

Three dispatch styles exist:

* :meth:`Bus.emit` broadcasts a payload to every listener.
* :meth:`Bus.emit_marshalled` threads a :class:`DomainMessage` through the
  listeners as a pipeline and stops at the first failure.
* :meth:`Bus.share` is a pull request answered by exactly one listener.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator

from .domain import FiniteDomain
from .errors import (
    DuplicateError,
    NotFoundError,
    PortKindError,
    ReentrancyError,
    ShareCardinalityError,
)


class Direction(enum.Enum):
    OUTPUT = "output"
    INPUT = "input"


@dataclass(frozen=True)
class Port:
    owner: str
    name: str
    direction: Direction
    kind: str

    def __str__(self) -> str:
        return f"{self.owner}.{self.name}"


@dataclass(frozen=True)
class Connection:
    id: int
    source: Port
    target: Port
    order: int


@dataclass(frozen=True)
class DomainMessage:
    """Domains travelling through a constraint's narrowing pipeline."""

    domains: tuple[tuple[str, FiniteDomain], ...]
    failure: bool = False

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, FiniteDomain]]) -> DomainMessage:
        return cls(tuple(pairs))

    def __getitem__(self, var_id: str) -> FiniteDomain:
        for vid, dom in self.domains:
            if vid == var_id:
                return dom
        raise KeyError(var_id)

    def ids(self) -> tuple[str, ...]:
        return tuple(vid for vid, _ in self.domains)

    def replace(self, updates: dict[str, FiniteDomain]) -> DomainMessage:
        """Return a copy with some domains swapped; failure follows emptiness."""
        doms = tuple((vid, updates.get(vid, dom)) for vid, dom in self.domains)
        failed = self.failure or any(d.is_empty() for _, d in doms)
        return DomainMessage(doms, failed)

    def fail(self) -> DomainMessage:
        return DomainMessage(self.domains, True)

    def __str__(self) -> str:
        body = ",".join(f"{vid}={dom}" for vid, dom in self.domains)
        return f"[{body}]" + (" FAIL" if self.failure else "")


def summarize(payload: Any) -> str:
    if payload is None:
        return "-"
    name = getattr(payload, "name", None)
    if isinstance(name, str) and not isinstance(payload, (FiniteDomain, DomainMessage)):
        return name
    return str(payload)


@dataclass
class _Outlet:
    connections: list[Connection] = field(default_factory=list)
    dispatching: bool = False


Spy = Callable[[Port, Port, Any], None]


class Bus:
    """Registry of ports and the connections between them."""

    def __init__(self) -> None:
        self._handlers: dict[Port, Callable[..., Any]] = {}
        self._outlets: dict[Port, _Outlet] = {}
        self._live: dict[int, Connection] = {}
        self._ids = itertools.count(1)
        self._order = itertools.count()
        self._counters: dict[str, Iterator[int]] = {}
        self._owners: set[str] = set()
        self._spies: list[Spy] = []

    # -- identity -------------------------------------------------------

    def register_owner(self, owner: str) -> str:
        if owner in self._owners:
            raise DuplicateError(f"component id {owner!r} already used on this bus")
        self._owners.add(owner)
        return owner

    def fresh_owner(self, prefix: str) -> str:
        counter = self._counters.setdefault(prefix, itertools.count(1))
        while True:
            owner = f"{prefix}{next(counter)}"
            if owner not in self._owners:
                return self.register_owner(owner)

    # -- ports -----------------------------------------------------------

    def output_port(self, owner: str, name: str, kind: str) -> Port:
        port = Port(owner, name, Direction.OUTPUT, kind)
        if port in self._outlets:
            raise DuplicateError(f"duplicate port {port}")
        self._outlets[port] = _Outlet()
        return port

    def input_port(self, owner: str, name: str, kind: str, handler: Callable[..., Any]) -> Port:
        port = Port(owner, name, Direction.INPUT, kind)
        if port in self._handlers:
            raise DuplicateError(f"duplicate port {port}")
        self._handlers[port] = handler
        return port

    def ports(self) -> list[Port]:
        return list(self._outlets) + list(self._handlers)

    def output_ports(self) -> list[Port]:
        return list(self._outlets)

    def listeners(self, source: Port) -> list[Connection]:
        return list(self._outlet(source).connections)

    def _outlet(self, port: Port) -> _Outlet:
        try:
            return self._outlets[port]
        except KeyError:
            raise NotFoundError(f"no output port {port}") from None

    # -- wiring ------------------------------------------------------------

    def connect(self, source: Port, target: Port) -> Connection:
        if source.direction is not Direction.OUTPUT or target.direction is not Direction.INPUT:
            raise PortKindError(f"cannot connect {source} ({source.direction.value}) "
                                f"to {target} ({target.direction.value})")
        if source.kind != target.kind:
            raise PortKindError(f"kind mismatch: {source} carries {source.kind!r}, "
                                f"{target} expects {target.kind!r}")
        outlet = self._outlet(source)
        if target not in self._handlers:
            raise NotFoundError(f"no input port {target}")
        conn = Connection(next(self._ids), source, target, next(self._order))
        # copy-on-write so a dispatch in progress keeps its own snapshot
        outlet.connections = outlet.connections + [conn]
        self._live[conn.id] = conn
        return conn

    def disconnect(self, conn: Connection) -> None:
        if self._live.pop(conn.id, None) is None:
            raise NotFoundError(f"connection {conn.id} is not live")
        outlet = self._outlets[conn.source]
        outlet.connections = [c for c in outlet.connections if c.id != conn.id]

    def is_live(self, conn: Connection) -> bool:
        return conn.id in self._live

    # -- observation -------------------------------------------------------

    def add_spy(self, spy: Spy) -> None:
        """Call ``spy(source, target, payload)`` before every delivery."""
        self._spies.append(spy)

    def remove_spy(self, spy: Spy) -> None:
        self._spies.remove(spy)

    # -- dispatch ------------------------------------------------------------

    def _begin(self, source: Port) -> tuple[_Outlet, list[Connection]]:
        if source.direction is not Direction.OUTPUT:
            raise PortKindError(f"{source} is not an output port")
        outlet = self._outlet(source)
        if outlet.dispatching:
            raise ReentrancyError(f"{source} emitted while already dispatching")
        outlet.dispatching = True
        return outlet, outlet.connections

    def _deliver(self, conn: Connection, payload: Any) -> Any:
        for spy in self._spies:
            spy(conn.source, conn.target, payload)
        return self._handlers[conn.target](payload)

    def emit(self, source: Port, payload: Any = None) -> None:
        outlet, conns = self._begin(source)
        try:
            for conn in conns:
                self._deliver(conn, payload)
        finally:
            outlet.dispatching = False

    def emit_marshalled(self, source: Port, msg: DomainMessage) -> DomainMessage:
        outlet, conns = self._begin(source)
        try:
            for conn in conns:
                if msg.failure:
                    break
                msg = self._deliver(conn, msg)
        finally:
            outlet.dispatching = False
        return msg

    def share(self, source: Port, request: Any = None) -> Any:
        conns = self._outlet(source).connections
        if len(conns) != 1:
            raise ShareCardinalityError(f"{source} has {len(conns)} responders, expected 1")
        return self._deliver(conns[0], request)


class TraceWriter:
    """Spy that writes one ``EMIT <port> -> <port> <payload>`` line per delivery."""

    def __init__(self, stream):
        self.stream = stream
        self.lines = 0

    def __call__(self, source: Port, target: Port, payload: Any) -> None:
        self.stream.write(f"EMIT {source} -> {target} {summarize(payload)}\n")
        self.lines += 1
