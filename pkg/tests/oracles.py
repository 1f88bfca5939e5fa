"""Independent reference implementations used as test oracles.

Everything here evaluates constraint semantics directly from propagator
parameters (kind, coefficients, bounds); none of it calls the library's
filtering code, so agreement is meaningful.
"""

from __future__ import annotations

import itertools
import random

from fdsearch import (
    AllDifferent,
    BinaryKnapsackAtmost,
    BinaryLess,
    LinearEq,
    LinearLeq,
    Model,
)

Domains = list[set[int]]


def holds(prop, values: dict[int, int]) -> bool:
    """Semantic truth of a constraint under a (possibly partial) assignment
    covering its scope."""
    kind = prop.kind
    if kind == "linear_eq":
        return sum(c * values[x] for c, x in zip(prop.coeffs, prop.scope)) == prop.rhs
    if kind == "linear_leq":
        return sum(c * values[x] for c, x in zip(prop.coeffs, prop.scope)) <= prop.rhs
    if kind == "alldifferent":
        vals = [values[x] for x in prop.scope]
        return len(set(vals)) == len(vals)
    if kind == "binary_knapsack_atmost":
        return (
            sum(w * values[x] for w, x in zip(prop.weights, prop.scope))
            <= prop.capacity
        )
    if kind == "binary_less":
        x, y = prop.scope
        return values[x] < values[y] if prop.strict else values[x] <= values[y]
    raise ValueError(f"no oracle for {kind}")


def generate_and_test(model: Model) -> set[tuple[int, ...]]:
    """All solutions by enumerating the cross product of initial domains."""
    domains = [
        sorted(model.initial_domain(x).values()) for x in range(model.num_vars)
    ]
    solutions = set()
    for combo in itertools.product(*domains):
        values = dict(enumerate(combo))
        if all(holds(p, values) for p in model.propagators):
            solutions.add(combo)
    return solutions


def exact_filter(prop, domains: Domains) -> Domains | None:
    """Per-constraint domain consistency by support enumeration; None on a
    wipeout."""
    scope = prop.scope
    local = [sorted(domains[x]) for x in scope]
    keep: list[set[int]] = [set() for _ in scope]
    for combo in itertools.product(*local):
        if holds(prop, dict(zip(scope, combo))):
            for i, v in enumerate(combo):
                keep[i].add(v)
    if any(not k for k in keep):
        return None
    out = [set(d) for d in domains]
    for i, x in enumerate(scope):
        out[x] = keep[i]
    return out


def bounds_filter_linear(prop, domains: Domains) -> Domains | None:
    """Bounds consistency for a linear (in)equality by per-value scanning of
    the interval hull, iterated to a fixpoint."""
    is_eq = prop.kind == "linear_eq"
    out = [set(d) for d in domains]
    scope = prop.scope
    coeffs = prop.coeffs
    while True:
        changed = False
        for i, x in enumerate(scope):
            if not out[x]:
                return None
            rest_lo = rest_hi = 0
            for j, y in enumerate(scope):
                if j == i:
                    continue
                c = coeffs[j]
                lo, hi = min(out[y]), max(out[y])
                rest_lo += min(c * lo, c * hi)
                rest_hi += max(c * lo, c * hi)

            def supported(v: int) -> bool:
                own = coeffs[i] * v
                if is_eq:
                    return rest_lo + own <= prop.rhs <= rest_hi + own
                return rest_lo + own <= prop.rhs

            vals = sorted(out[x])
            while vals and not supported(vals[0]):
                vals.pop(0)
                changed = True
            while vals and not supported(vals[-1]):
                vals.pop()
                changed = True
            if not vals:
                return None
            out[x] = set(vals)
        if not changed:
            return out


def forward_check_alldiff(prop, domains: Domains) -> Domains | None:
    """Forward-checking closure for alldifferent."""
    out = [set(d) for d in domains]
    scope = prop.scope
    while True:
        bound: dict[int, int] = {}
        for x in scope:
            if len(out[x]) == 1:
                v = next(iter(out[x]))
                if v in bound.values():
                    return None
                bound[x] = v
        changed = False
        for x in scope:
            if len(out[x]) > 1:
                for v in bound.values():
                    if v in out[x]:
                        out[x].discard(v)
                        changed = True
                if not out[x]:
                    return None
        if not changed:
            return out


def reference_filter(prop, domains: Domains) -> Domains | None:
    """Filtering at each propagator's declared consistency level."""
    kind = prop.kind
    if kind in ("linear_eq", "linear_leq"):
        return bounds_filter_linear(prop, domains)
    if kind == "alldifferent":
        return forward_check_alldiff(prop, domains)
    # knapsack-atmost and binary_less achieve per-constraint domain consistency
    return exact_filter(prop, domains)


# -- random instance generators --


def random_domain(rng: random.Random, lo=-3, hi=6, max_size=5) -> list[int]:
    size = rng.randint(1, max_size)
    return sorted(rng.sample(range(lo, hi + 1), size))


def random_csp(rng: random.Random, max_vars=6, max_constraints=5) -> Model:
    m = Model("random-csp")
    nvars = rng.randint(1, max_vars)
    for _ in range(nvars):
        m.add_var_values(random_domain(rng))
    for _ in range(rng.randint(0, max_constraints)):
        kind = rng.choice(["linear_eq", "linear_leq", "binary_less", "alldiff"])
        if kind == "alldiff":
            k = rng.randint(2, min(4, nvars)) if nvars >= 2 else 1
            if k < 2:
                continue
            m.post(AllDifferent(rng.sample(range(nvars), k)))
        elif kind == "binary_less":
            if nvars < 2:
                continue
            x, y = rng.sample(range(nvars), 2)
            m.post(BinaryLess(x, y, strict=rng.random() < 0.5))
        else:
            k = rng.randint(1, min(3, nvars))
            scope = rng.sample(range(nvars), k)
            coeffs = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in scope]
            mid = sum(
                c * rng.choice(sorted(m.initial_domain(x).values()))
                for c, x in zip(coeffs, scope)
            )
            rhs = mid + rng.randint(-2, 2)
            cls = LinearEq if kind == "linear_eq" else LinearLeq
            m.post(cls(coeffs, scope, rhs))
    return m


def random_propagator_instance(rng: random.Random, kind: str):
    """A single-propagator model plus its initial domains, for filtering
    equivalence checks."""
    m = Model(f"random-{kind}")
    if kind == "binary_knapsack_atmost":
        n = rng.randint(1, 6)
        for _ in range(n):
            m.add_var_values(rng.choice([[0], [1], [0, 1]]))
        weights = [rng.randint(0, 6) for _ in range(n)]
        cap = rng.randint(0, max(1, sum(weights) // rng.choice([1, 2, 3])))
        m.post(BinaryKnapsackAtmost(weights, list(range(n)), cap))
    elif kind == "binary_less":
        m.add_var_values(random_domain(rng))
        m.add_var_values(random_domain(rng))
        m.post(BinaryLess(0, 1, strict=rng.random() < 0.5))
    elif kind == "alldifferent":
        n = rng.randint(2, 4)
        for _ in range(n):
            m.add_var_values(random_domain(rng, lo=0, hi=5, max_size=4))
        m.post(AllDifferent(list(range(n))))
    else:
        n = rng.randint(1, 4)
        for _ in range(n):
            m.add_var_values(random_domain(rng, max_size=6))
        coeffs = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(n)]
        mid = sum(
            c * rng.choice(sorted(m.initial_domain(x).values()))
            for x, c in enumerate(coeffs)
        )
        rhs = mid + rng.randint(-3, 3)
        cls = LinearEq if kind == "linear_eq" else LinearLeq
        m.post(cls(coeffs, list(range(n)), rhs))
    domains = [set(m.initial_domain(x).values()) for x in range(m.num_vars)]
    return m, domains
