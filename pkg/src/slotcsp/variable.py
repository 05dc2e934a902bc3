"""Variable components.

A variable owns a domain and exposes it through ports only:

* ``get_domain`` (in): replace the domain, signalling the change;
* ``sharing_domain`` (in): answer a share request with a snapshot;
* ``reinit_domain`` (in): replace the domain silently (backtracking);
* ``trailing`` (out): the old domain, sent just before a modification;
* ``domain_changed`` (out): the new domain, sent after a modification.

:class:`IntegralVariable` adds ``min_changed``, ``max_changed``,
``hull_changed`` and ``instantiated``.
"""

from __future__ import annotations

from .domain import FiniteDomain
from .events import Bus, Port

DOMAIN = "domain"
# pull requests answered with a domain snapshot
DOMAIN_REQUEST = "domain_request"

DERIVED_EVENTS = ("min_changed", "max_changed", "hull_changed", "instantiated")


def _bound(d: FiniteDomain, which: str) -> int | None:
    if d.is_empty():
        return None
    return d.min() if which == "min" else d.max()


def derived_events(old: FiniteDomain, new: FiniteDomain) -> list[str]:
    """Names of the derived events a change from ``old`` to ``new`` fires.

    The result is ordered min, max, hull, instantiated. An emptiness
    transition counts as a change of both bounds and of the hull.
    """
    fired = []
    if _bound(old, "min") != _bound(new, "min"):
        fired.append("min_changed")
    if _bound(old, "max") != _bound(new, "max"):
        fired.append("max_changed")
    if old.hull() != new.hull():
        fired.append("hull_changed")
    if new.is_singleton() and not old.is_singleton():
        fired.append("instantiated")
    return fired


class Variable:
    output_events: tuple[str, ...] = ("trailing", "domain_changed")

    def __init__(self, bus: Bus, name: str, domain: FiniteDomain):
        self.bus = bus
        self.id = bus.register_owner(name)
        self.name = name
        self._domain = domain

        self.get_domain = bus.input_port(self.id, "get_domain", DOMAIN, self.receive_get_domain)
        self.sharing_domain = bus.input_port(self.id, "sharing_domain", DOMAIN_REQUEST, self._answer_share)
        self.reinit_domain = bus.input_port(self.id, "reinit_domain", DOMAIN, self.receive_reinit)
        self._outputs: dict[str, Port] = {
            event: bus.output_port(self.id, event, DOMAIN) for event in self.output_events
        }

    @property
    def domain(self) -> FiniteDomain:
        return self._domain

    def port(self, event: str) -> Port:
        try:
            return self._outputs[event]
        except KeyError:
            raise KeyError(f"{type(self).__name__} {self.name} has no output slot {event!r}") from None

    @property
    def trailing(self) -> Port:
        return self._outputs["trailing"]

    @property
    def domain_changed(self) -> Port:
        return self._outputs["domain_changed"]

    # -- slot handlers ------------------------------------------------------

    def receive_get_domain(self, d: FiniteDomain) -> None:
        old = self._domain
        if d == old:
            return
        self.bus.emit(self._outputs["trailing"], old)
        self._domain = d
        self.bus.emit(self._outputs["domain_changed"], d)
        self._emit_derived(old, d)

    def _emit_derived(self, old: FiniteDomain, new: FiniteDomain) -> None:
        pass

    def receive_reinit(self, d: FiniteDomain) -> None:
        # not an event: no trailing, no domain_changed
        self._domain = d

    def receive_share(self) -> FiniteDomain:
        return self._domain

    def _answer_share(self, _request=None) -> FiniteDomain:
        return self._domain

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}={self._domain})"


class IntegralVariable(Variable):
    output_events = Variable.output_events + DERIVED_EVENTS

    def _emit_derived(self, old: FiniteDomain, new: FiniteDomain) -> None:
        for event in derived_events(old, new):
            self.bus.emit(self._outputs[event], new)
