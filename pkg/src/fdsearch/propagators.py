"""Propagators: contracting, sound filters over a DomainStore.

``propagate`` returns the list of variables it shrank, or None on failure
(a wipeout); the store is left untouched by the op that would have emptied
a domain, so the caller's trail stays consistent.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .domain import DomainStore, SHRUNK, WOULD_EMPTY


def _ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


class Propagator:
    """Base class; subclasses define filtering and a full-assignment check."""

    kind = "abstract"
    __slots__ = ("pid", "scope")

    def __init__(self, scope: Sequence[int]):
        scope = list(scope)
        if not scope:
            raise ValueError("propagator scope must be non-empty")
        if len(set(scope)) != len(scope):
            raise ValueError("propagator scope must be duplicate-free")
        self.pid = -1  # set by Model.post
        self.scope = scope

    def propagate(self, store: DomainStore) -> Optional[list[int]]:
        raise NotImplementedError

    def satisfied(self, values: Sequence[int]) -> bool:
        """Semantic check against a full assignment (values indexed by VarId)."""
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(pid={self.pid}, scope={self.scope})"


class _Linear(Propagator):
    """Bounds-consistent filtering for sum(a_i * x_i) (= | <=) b."""

    is_eq = False
    __slots__ = ("coeffs", "rhs")

    def __init__(self, coeffs: Sequence[int], scope: Sequence[int], rhs: int):
        super().__init__(scope)
        coeffs = list(coeffs)
        if len(coeffs) != len(self.scope):
            raise ValueError("one coefficient per variable required")
        if any(c == 0 for c in coeffs):
            raise ValueError("zero coefficients are not allowed")
        self.coeffs = coeffs
        self.rhs = rhs

    def propagate(self, store: DomainStore) -> Optional[list[int]]:
        domains = store.domains
        cs = self.coeffs
        xs = self.scope
        b = self.rhs
        is_eq = self.is_eq
        n = len(xs)
        changed: list[int] = []
        term_lo = [0] * n
        term_hi = [0] * n
        while True:
            lo = 0
            hi = 0
            for i in range(n):
                c = cs[i]
                d = domains[xs[i]]
                if c > 0:
                    tlo, thi = c * d.min, c * d.max
                else:
                    tlo, thi = c * d.max, c * d.min
                term_lo[i] = tlo
                term_hi[i] = thi
                lo += tlo
                hi += thi
            if lo > b or (is_eq and hi < b):
                return None
            progress = False
            for i in range(n):
                c = cs[i]
                x = xs[i]
                ub_num = b - (lo - term_lo[i])  # c*x <= ub_num
                if c > 0:
                    out = store.tighten_max(x, ub_num // c)
                else:
                    out = store.tighten_min(x, _ceil_div(ub_num, c))
                if out is WOULD_EMPTY:
                    return None
                if out is SHRUNK:
                    changed.append(x)
                    progress = True
                if is_eq:
                    lb_num = b - (hi - term_hi[i])  # c*x >= lb_num
                    if c > 0:
                        out = store.tighten_min(x, _ceil_div(lb_num, c))
                    else:
                        out = store.tighten_max(x, lb_num // c)
                    if out is WOULD_EMPTY:
                        return None
                    if out is SHRUNK:
                        changed.append(x)
                        progress = True
            if not progress:
                break
        if len(changed) > 1:
            changed = list(dict.fromkeys(changed))
        return changed

    def _dot(self, values: Sequence[int]) -> int:
        return sum(c * values[x] for c, x in zip(self.coeffs, self.scope))


class LinearEq(_Linear):
    """sum(a_i * x_i) == b with bounds consistency."""

    kind = "linear_eq"
    is_eq = True
    __slots__ = ()

    def satisfied(self, values: Sequence[int]) -> bool:
        return self._dot(values) == self.rhs


class LinearLeq(_Linear):
    """sum(a_i * x_i) <= b with bounds consistency."""

    kind = "linear_leq"
    is_eq = False
    __slots__ = ()

    def satisfied(self, values: Sequence[int]) -> bool:
        return self._dot(values) <= self.rhs


class AllDifferent(Propagator):
    """Value-based alldifferent (forward checking, not domain-consistent).

    Whenever a scope variable is bound, its value is pruned from the other
    scope domains; repeats until no new variable becomes bound.
    """

    kind = "alldifferent"
    __slots__ = ("_base",)

    def __init__(self, scope: Sequence[int]):
        super().__init__(scope)
        self._base = None  # min anchor over scope, resolved lazily

    def propagate(self, store: DomainStore) -> Optional[list[int]]:
        domains = store.domains
        scope = self.scope
        base = self._base
        if base is None:
            base = self._base = min(domains[x].anchor for x in scope)
        changed: list[int] = []
        while True:
            seen = 0
            for x in scope:
                d = domains[x]
                if d.size == 1:
                    bit = 1 << (d.min - base)
                    if seen & bit:
                        return None
                    seen |= bit
            progress = False
            for x in scope:
                d = domains[x]
                if d.size > 1:
                    out = store.remove_bits(x, seen >> (d.anchor - base))
                    if out is WOULD_EMPTY:
                        return None
                    if out is SHRUNK:
                        changed.append(x)
                        if d.size == 1:
                            progress = True
            if not progress:
                break
        return changed

    def satisfied(self, values: Sequence[int]) -> bool:
        vals = [values[x] for x in self.scope]
        return len(set(vals)) == len(vals)


class BinaryKnapsackAtmost(Propagator):
    """sum(w_i * x_i) <= capacity over 0/1 variables.

    Filters to the strength of the feasibility DP over reachable residual
    weights: for a pure at-most constraint with non-negative weights that
    collapses to pruning value 1 from every item whose weight exceeds the
    capacity left after the items already committed to 1 (the singleton
    {i} is always the best completion), which is per-constraint domain
    consistency here.
    """

    kind = "binary_knapsack_atmost"
    __slots__ = ("weights", "capacity")

    def __init__(self, weights: Sequence[int], scope: Sequence[int], capacity: int):
        super().__init__(scope)
        weights = list(weights)
        if len(weights) != len(self.scope):
            raise ValueError("one weight per variable required")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be non-negative")
        self.weights = weights
        self.capacity = capacity

    def propagate(self, store: DomainStore) -> Optional[list[int]]:
        domains = store.domains
        mandatory = 0
        free: list[tuple[int, int]] = []
        for w, x in zip(self.weights, self.scope):
            d = domains[x]
            if d.size == 1:
                if d.min == 1:
                    mandatory += w
            else:
                free.append((w, x))
        slack = self.capacity - mandatory
        if slack < 0:
            return None
        changed: list[int] = []
        for w, x in free:
            if w > slack:
                out = store.assign(x, 0)
                if out is WOULD_EMPTY:
                    return None
                if out is SHRUNK:
                    changed.append(x)
        return changed

    def satisfied(self, values: Sequence[int]) -> bool:
        return (
            sum(w * values[x] for w, x in zip(self.weights, self.scope))
            <= self.capacity
        )


class BinaryLess(Propagator):
    """x < y (strict) or x <= y, by bounds tightening.

    Constant bounds (x <= c) are plain domain tightening at model build
    time or a one-variable LinearLeq; no dedicated propagator is needed.
    """

    kind = "binary_less"
    __slots__ = ("strict",)

    def __init__(self, x: int, y: int, strict: bool = True):
        super().__init__([x, y])
        self.strict = strict

    def propagate(self, store: DomainStore) -> Optional[list[int]]:
        x, y = self.scope
        off = 1 if self.strict else 0
        domains = store.domains
        changed: list[int] = []
        out = store.tighten_max(x, domains[y].max - off)
        if out is WOULD_EMPTY:
            return None
        if out is SHRUNK:
            changed.append(x)
        out = store.tighten_min(y, domains[x].min + off)
        if out is WOULD_EMPTY:
            return None
        if out is SHRUNK:
            changed.append(y)
        return changed

    def satisfied(self, values: Sequence[int]) -> bool:
        x, y = self.scope
        return values[x] < values[y] if self.strict else values[x] <= values[y]


class ObjectiveBound(Propagator):
    """Branch-and-bound incumbent bound on the objective variable.

    ``bound`` is deliberately not trailed: it only ever tightens, and the
    new bound must keep holding after backtracks and across restarts.
    """

    kind = "objective_bound"
    __slots__ = ("maximize", "bound")

    def __init__(self, var: int, maximize: bool):
        super().__init__([var])
        self.maximize = maximize
        self.bound: Optional[int] = None

    def update(self, incumbent: int) -> None:
        self.bound = incumbent + 1 if self.maximize else incumbent - 1

    def propagate(self, store: DomainStore) -> Optional[list[int]]:
        if self.bound is None:
            return []
        x = self.scope[0]
        if self.maximize:
            out = store.tighten_min(x, self.bound)
        else:
            out = store.tighten_max(x, self.bound)
        if out is WOULD_EMPTY:
            return None
        return [x] if out is SHRUNK else []

    def satisfied(self, values: Sequence[int]) -> bool:
        return True
