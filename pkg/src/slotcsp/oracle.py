"""Brute-force reference answers for small CSPs.

Nothing here touches the bus, variables or schedulers: domains are plain
value sets and constraints are tuple sets or predicates, enumerated in
full. Test suites compare the propagation engine against these results.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from .domain import FiniteDomain
from .errors import CapacityError

DEFAULT_CAP = 10**7

Membership = Union[frozenset, Callable[..., bool]]


@dataclass(frozen=True)
class DenseConstraint:
    scope: tuple[int, ...]  # variable indices
    relation: Membership

    def holds(self, values: Sequence[int]) -> bool:
        if callable(self.relation):
            return bool(self.relation(*values))
        return tuple(values) in self.relation


@dataclass
class DenseCsp:
    names: list[str]
    domains: list[frozenset[int]]
    constraints: list[DenseConstraint] = field(default_factory=list)
    cap: int = DEFAULT_CAP

    def add(self, scope: Sequence[int], relation) -> None:
        if not callable(relation):
            relation = frozenset(tuple(t) for t in relation)
        self.constraints.append(DenseConstraint(tuple(scope), relation))

    def _check(self, sizes) -> None:
        total = math.prod(sizes)
        if total > self.cap:
            raise CapacityError(f"{total} tuples to enumerate, cap is {self.cap}")


def _project(csp: DenseCsp, c: DenseConstraint, doms: list[set[int]]) -> list[set[int]]:
    cols = [doms[i] for i in c.scope]
    csp._check(len(col) for col in cols)
    support: list[set[int]] = [set() for _ in c.scope]
    for t in itertools.product(*(sorted(col) for col in cols)):
        if c.holds(t):
            for s, v in zip(support, t):
                s.add(v)
    return support


def brute_force_hyperarc(csp: DenseCsp, order: Sequence[int] | None = None) -> list[FiniteDomain]:
    """Greatest box on which every constraint is hyper-arc consistent.

    Sweeps the constraints (in ``order`` if given) replacing each scope
    domain by its projection of the supported tuples, until a full sweep
    changes nothing.
    """
    doms = [set(d) for d in csp.domains]
    sweep = list(order) if order is not None else list(range(len(csp.constraints)))
    changed = True
    while changed:
        changed = False
        for k in sweep:
            c = csp.constraints[k]
            support = _project(csp, c, doms)
            for i, s in zip(c.scope, support):
                # a variable repeated in scope keeps only values supported everywhere
                new = doms[i] & s
                if new != doms[i]:
                    doms[i] = new
                    changed = True
    return [FiniteDomain.from_values(d) for d in doms]


def enumerate_solutions(csp: DenseCsp) -> set[tuple[int, ...]]:
    csp._check(len(d) for d in csp.domains)
    sols = set()
    for t in itertools.product(*(sorted(d) for d in csp.domains)):
        if all(c.holds([t[i] for i in c.scope]) for c in csp.constraints):
            sols.add(t)
    return sols


def queens_solutions(n: int) -> set[tuple[int, ...]]:
    """All n-queens placements, column i holding the row of queen i (1-based rows)."""
    sols = set()
    for perm in itertools.permutations(range(1, n + 1)):
        if all(abs(perm[i] - perm[j]) != j - i for i in range(n) for j in range(i + 1, n)):
            sols.add(perm)
    return sols


def random_csp(rng: random.Random, max_vars: int = 4, max_dom: int = 6,
               max_constraints: int = 5, value_range: int = 8) -> DenseCsp:
    """A small random CSP with extensional constraints of arity 2 or 3.

    Domains are random subsets (holes allowed) of ``0..value_range-1``.
    Relation tuples are drawn over the whole value range, so some fall
    outside the domains.
    """
    n = rng.randint(2, max_vars)
    names = [f"v{i}" for i in range(n)]
    domains = [frozenset(rng.sample(range(value_range), rng.randint(1, max_dom))) for _ in range(n)]
    csp = DenseCsp(names, domains)
    for _ in range(rng.randint(1, max_constraints)):
        arity = rng.randint(2, min(3, n))
        scope = rng.sample(range(n), arity)
        density = rng.choice((0.15, 0.3, 0.5, 0.8))
        # draw from the domains plus a margin so that some tuples are unsupported
        pools = [sorted(csp.domains[i] | {rng.randrange(value_range)}) for i in scope]
        tuples = [t for t in itertools.product(*pools) if rng.random() < density]
        csp.add(scope, tuples)
    return csp
