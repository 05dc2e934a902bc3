"""Bridges between oracle CSPs and engine instances, shared by the test modules."""

import itertools
import random
from pathlib import Path

from slotcsp import Bus, IntegralVariable, Relation, RoundRobinEnumerator, Scheduler, table_constraint
from slotcsp.domain import FiniteDomain
from slotcsp.model import Model
from slotcsp.oracle import DenseCsp, random_csp


def corpus(count=200, seed=20240501):
    rng = random.Random(seed)
    return [random_csp(rng) for _ in range(count)]


def engine_from_dense(csp, scheme="constraint", policy="fifo", seed=None, bus=None):
    bus = bus or Bus()
    xs = [IntegralVariable(bus, name, FiniteDomain.from_values(d))
          for name, d in zip(csp.names, csp.domains)]
    constraints = []
    for c in csp.constraints:
        rel = Relation(len(c.scope), frozenset(c.relation))
        constraints.append(table_constraint(bus, [xs[i] for i in c.scope], rel))
    scheduler = Scheduler(bus, scheme=scheme, policy=policy, seed=seed)
    for c in constraints:
        scheduler.post(c)
    return Model(bus, xs, constraints, scheduler, RoundRobinEnumerator(bus, scheduler, xs))


def box(domains):
    """A list of domains as a box; any empty component makes the whole box empty."""
    domains = list(domains)
    if any(d.is_empty() for d in domains):
        return None
    return tuple(domains)


def as_tuple(solution, names):
    return tuple(solution[n] for n in names)


MODELS = Path(__file__).parent / "data" / "models"


def valid_models():
    return sorted((MODELS / "valid").glob("*.csp"))


def invalid_models():
    return sorted((MODELS / "invalid").glob("*.csp"))


def expectation(path):
    """(error class name, line, col) from an ``# expect:`` header."""
    header = path.read_text().splitlines()[0]
    _, _, rest = header.partition("expect:")
    cls, pos = rest.split()
    line, col = pos.split(":")
    return cls, int(line), int(col)


def dense_from_ast(ast):
    """Oracle CSP with the same meaning as a parsed model, built without the engine."""
    from slotcsp.model.ast import AllDiff, NotEqual

    names = [v.name.text for v in ast.variables]
    index = {n: i for i, n in enumerate(names)}
    csp = DenseCsp(names, [frozenset(v.value()) for v in ast.variables])
    for c in ast.constraints:
        if isinstance(c, NotEqual):
            csp.add((index[c.left.text], index[c.right.text]),
                    lambda a, b, off=c.offset: a != b + off)
        elif isinstance(c, AllDiff):
            scope = [index[n.text] for n in c.names]
            for i, j in itertools.combinations(scope, 2):
                csp.add((i, j), lambda a, b: a != b)
        else:
            csp.add([index[n.text] for n in c.names], c.tuples)
    return csp
