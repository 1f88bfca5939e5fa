"""Fixpoint propagation engine: FIFO queue over propagators, exact
affected-variable reporting via a domain-size snapshot taken at entry."""

from __future__ import annotations

from collections import deque
from typing import Optional, Sequence

from .domain import DomainStore, SHRUNK, WOULD_EMPTY
from .propagators import Propagator

# Pseudo propagator id reported when posting a decision itself wipes a domain
# (cannot happen for decisions drawn from current domains, but kept for safety).
DECISION = -1


class PropagationResult:
    """Outcome of one fixpoint run.

    ``failed`` is the id of the propagator that emptied a domain, ``DECISION``
    if the seeding decision did, or None when consistent.  ``affected`` lists
    exactly the variables whose domain shrank since the call began; on failure
    it still lists the variables shrunk before the wipeout.
    """

    __slots__ = ("failed", "affected")

    def __init__(self, failed: Optional[int], affected: list[int]):
        self.failed = failed
        self.affected = affected

    @property
    def ok(self) -> bool:
        return self.failed is None

    def __repr__(self) -> str:
        state = "Consistent" if self.ok else f"Failed({self.failed})"
        return f"PropagationResult({state}, affected={self.affected})"


class Engine:
    """Runs propagators to a fixpoint over a store.

    Holds only static data (propagator list and var -> watching propagators),
    so one engine per solve is cheap and nothing is shared mutable.
    """

    def __init__(self, nvars: int, propagators: Sequence[Propagator]):
        self.nvars = nvars
        self.propagators = list(propagators)
        watchers: list[list[int]] = [[] for _ in range(nvars)]
        for p in self.propagators:
            for x in p.scope:
                watchers[x].append(p.pid)
        self.watchers = watchers

    def propagate(
        self,
        store: DomainStore,
        decision: Optional[tuple[str, int, int]] = None,
        seed_all: bool = False,
        seed_vars: Sequence[int] = (),
        extra: Sequence[int] = (),
    ) -> PropagationResult:
        """Run to fixpoint from a seed.

        ``decision`` is ("eq", x, v) or ("ne", x, v) and is applied to the
        store first; its own domain change counts toward ``affected``.
        ``seed_all`` schedules every propagator (root propagation);
        ``seed_vars`` schedules the watchers of given variables; ``extra``
        schedules explicit propagator ids (e.g. an objective bound).
        """
        domains = store.domains
        sizes0 = [d.size for d in domains]
        props = self.propagators
        watchers = self.watchers
        queue: deque[int] = deque()
        scheduled = bytearray(len(props))

        def sched_var(x: int) -> None:
            for q in watchers[x]:
                if not scheduled[q]:
                    scheduled[q] = 1
                    queue.append(q)

        if decision is not None:
            kind, x, v = decision
            out = store.assign(x, v) if kind == "eq" else store.remove_value(x, v)
            if out is WOULD_EMPTY:
                return PropagationResult(DECISION, [])
            if out is SHRUNK:
                sched_var(x)
        if seed_all:
            for p in props:
                scheduled[p.pid] = 1
                queue.append(p.pid)
        for x in seed_vars:
            sched_var(x)
        for pid in extra:
            if not scheduled[pid]:
                scheduled[pid] = 1
                queue.append(pid)

        while queue:
            pid = queue.popleft()
            scheduled[pid] = 0
            changed = props[pid].propagate(store)
            if changed is None:
                affected = [
                    x for x in range(self.nvars) if domains[x].size < sizes0[x]
                ]
                return PropagationResult(pid, affected)
            for x in changed:
                sched_var(x)

        affected = [x for x in range(self.nvars) if domains[x].size < sizes0[x]]
        return PropagationResult(None, affected)
