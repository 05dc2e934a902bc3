"""Finite-domain constraint solving built from components that talk over a signal/slot bus."""

from .constraint import (
    AllDiffInstantiation,
    Constraint,
    HyperArcRevise,
    NarrowingOperator,
    OutOf,
    Relation,
    alldiff_instantiation,
    diff3,
    hyperarc_revise,
    not_equal,
    out_of,
    table_constraint,
)
from .domain import EMPTY, FiniteDomain, interval
from .events import Bus, Connection, DomainMessage, Port, TraceWriter
from .scheduler import FifoScheduler, Scheduler, VariableItem, variable_scheme_adapter
from .search import RoundRobinEnumerator, TrailStack
from .variable import IntegralVariable, Variable, derived_events

__version__ = "0.1.0"
