"""Model container: variables with initial domains, propagators, optional
objective.  Models are immutable by convention once built; every solve
creates its own DomainStore copy."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .domain import DomainStore, FiniteDomain, VarId
from .propagators import Propagator


class ModelError(ValueError):
    """A model violates a structural invariant."""


class Model:
    def __init__(self, name: str = "model"):
        self.name = name
        self._specs: list[tuple[int, int]] = []  # (anchor, mask) per variable
        self.var_names: list[str] = []
        self.propagators: list[Propagator] = []
        self.objective: Optional[tuple[VarId, str]] = None  # (var, "max"|"min")
        self._branch_vars: Optional[list[VarId]] = None

    # -- construction --

    def add_var(self, lo: int, hi: Optional[int] = None, name: str = "") -> VarId:
        """Declare a variable with domain [lo, hi] (or the singleton {lo})."""
        if hi is None:
            hi = lo
        if hi < lo:
            raise ModelError(f"empty initial domain [{lo}, {hi}]")
        self._specs.append((lo, (1 << (hi - lo + 1)) - 1))
        self.var_names.append(name or f"x{len(self._specs) - 1}")
        return len(self._specs) - 1

    def add_var_values(self, values: Iterable[int], name: str = "") -> VarId:
        d = FiniteDomain.from_values(values)
        self._specs.append((d.anchor, d.mask))
        self.var_names.append(name or f"x{len(self._specs) - 1}")
        return len(self._specs) - 1

    def add_vars(self, n: int, lo: int, hi: int, prefix: str = "x") -> list[VarId]:
        return [self.add_var(lo, hi, f"{prefix}{i}") for i in range(n)]

    def post(self, prop: Propagator) -> int:
        """Register a propagator; returns its dense PropagatorId."""
        for x in prop.scope:
            if not 0 <= x < len(self._specs):
                raise ModelError(f"scope refers to undeclared variable {x}")
        prop.pid = len(self.propagators)
        self.propagators.append(prop)
        return prop.pid

    def maximize(self, var: VarId) -> None:
        self._set_objective(var, "max")

    def minimize(self, var: VarId) -> None:
        self._set_objective(var, "min")

    def _set_objective(self, var: VarId, direction: str) -> None:
        if not 0 <= var < len(self._specs):
            raise ModelError(f"objective variable {var} not declared")
        self.objective = (var, direction)

    def set_branch_vars(self, vars: Sequence[VarId]) -> None:
        """Restrict search decisions (and heuristic statistics) to these
        variables; auxiliaries must then be fixed by propagation."""
        for x in vars:
            if not 0 <= x < len(self._specs):
                raise ModelError(f"branch variable {x} not declared")
        self._branch_vars = list(vars)

    # -- queries --

    @property
    def num_vars(self) -> int:
        return len(self._specs)

    @property
    def branch_vars(self) -> list[VarId]:
        if self._branch_vars is not None:
            return self._branch_vars
        return list(range(len(self._specs)))

    def initial_domain(self, x: VarId) -> FiniteDomain:
        anchor, mask = self._specs[x]
        d = FiniteDomain(anchor, anchor)
        d._set_mask(mask)
        return d

    def new_store(self) -> DomainStore:
        return DomainStore.from_specs(self._specs)

    def audit(self) -> None:
        """Validate structural invariants; raises ModelError on violation."""
        for anchor, mask in self._specs:
            if mask == 0:
                raise ModelError("empty initial domain")
        for pid, p in enumerate(self.propagators):
            if p.pid != pid:
                raise ModelError(f"propagator {pid} has stale id {p.pid}")
            if len(set(p.scope)) != len(p.scope) or not p.scope:
                raise ModelError(f"propagator {pid} has invalid scope")
            for x in p.scope:
                if not 0 <= x < len(self._specs):
                    raise ModelError(f"propagator {pid} scope out of range")
        if self.objective is not None:
            var, direction = self.objective
            if direction not in ("max", "min"):
                raise ModelError(f"bad objective direction {direction!r}")
            if not 0 <= var < len(self._specs):
                raise ModelError("objective variable out of range")

    def check_assignment(self, values: Sequence[int]) -> bool:
        """Evaluate every propagator's semantics on a full assignment."""
        return all(p.satisfied(values) for p in self.propagators)

    def __repr__(self) -> str:
        return (
            f"Model({self.name!r}, vars={self.num_vars}, "
            f"constraints={len(self.propagators)})"
        )
