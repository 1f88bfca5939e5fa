"""Depth-first search with dynamic re-selection, geometric restarts and
branch and bound.

Branching is the binary decomposition of labeling: try x=v, and on
exhaustion of that subtree post x != v and re-select (the heuristic scores
may have changed).  Heuristic statistics persist across backtracks and
restarts; the objective bound is posted at the root and survives restarts.
"""

from __future__ import annotations

import enum
import math
import random
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .domain import WOULD_EMPTY
from .engine import Engine, PropagationResult
from .heuristics import ActivitySearch, HeuristicConfig, build_heuristic
from .model import Model
from .propagators import ObjectiveBound


class Status(enum.Enum):
    SOLUTION_FOUND = "solution"
    PROVED_INFEASIBLE = "infeasible"
    PROVED_OPTIMAL = "optimal"
    TIMED_OUT = "timeout"


@dataclass
class RestartPolicy:
    """No restarts, or geometric rounds: l0 failures in round 0 and
    l_{i+1} = ceil(rho * l_i) after; l0 defaults to 3 * |branch vars|."""

    rho: Optional[float] = None
    initial_limit: Optional[int] = None

    @classmethod
    def none(cls) -> "RestartPolicy":
        return cls()

    @classmethod
    def geometric(cls, rho: float, initial_limit: Optional[int] = None) -> "RestartPolicy":
        if rho <= 1.0:
            raise ValueError("geometric restart factor must be > 1")
        return cls(rho=rho, initial_limit=initial_limit)

    @property
    def enabled(self) -> bool:
        return self.rho is not None


class RestartController:
    """Counts search-phase failures within a round and signals restarts."""

    def __init__(self, policy: RestartPolicy, default_initial: int):
        self.policy = policy
        self.limit = policy.initial_limit or max(1, default_initial)
        self.failures_this_round = 0

    def on_failure(self) -> bool:
        """Returns True (RestartNow) exactly when the round's failure count
        reaches the current limit."""
        if not self.policy.enabled:
            return False
        self.failures_this_round += 1
        return self.failures_this_round >= self.limit

    def new_round(self) -> None:
        # the 1e-9 slack keeps exact products exact (30 * 1.1 must give 33)
        self.limit = math.ceil(self.limit * self.policy.rho - 1e-9)
        self.failures_this_round = 0


@dataclass
class SearchStats:
    status: Status = Status.TIMED_OUT
    choice_points: int = 0
    failures: int = 0
    restarts: int = 0
    probes: int = 0
    wall_time: float = 0.0
    solutions: list[tuple[Optional[int], float]] = field(default_factory=list)
    best_objective: Optional[int] = None
    best_assignment: Optional[list[int]] = None
    all_solutions: Optional[list[tuple[int, ...]]] = None


class _Timeout(Exception):
    pass


class _Solver:
    """One solve call: owns the store, engine, heuristic state and RNG."""

    def __init__(
        self,
        model: Model,
        config: HeuristicConfig,
        restart: RestartPolicy,
        seed: int,
        timeout: Optional[float],
        max_failures: Optional[int],
        all_solutions: bool,
        probe_only: bool = False,
    ):
        model.audit()
        if all_solutions and (restart.enabled or model.objective is not None):
            raise ValueError("all-solutions mode requires no restarts and no objective")
        self.model = model
        self.store = model.new_store()
        self.rng = random.Random(seed)
        self.all_solutions = all_solutions
        self.probe_only = probe_only
        self.max_failures = max_failures
        self.timeout = timeout
        self.restart_policy = restart
        self.stats = SearchStats()
        if all_solutions:
            self.stats.all_solutions = []

        props = list(model.propagators)
        self.bound: Optional[ObjectiveBound] = None
        self._extra: tuple[int, ...] = ()
        if model.objective is not None:
            var, direction = model.objective
            self.bound = ObjectiveBound(var, maximize=direction == "max")
            self.bound.pid = len(props)
            props.append(self.bound)
            self._extra = (self.bound.pid,)
        self.engine = Engine(model.num_vars, props)
        self.heuristic = build_heuristic(model, config, self.rng)

        self._t0 = 0.0
        self._deadline: Optional[float] = None
        self._ticks = 0
        self._restart_requested = False

    # -- services used by heuristics during initialization --

    def propagate(self, decision=None, seed_all=False, seed_vars=()) -> PropagationResult:
        self._ticks += 1
        if self._ticks & 255 == 0:
            self.check_deadline()
        return self.engine.propagate(
            self.store, decision, seed_all=seed_all, seed_vars=seed_vars,
            extra=self._extra,
        )

    def check_deadline(self) -> None:
        if self._deadline is not None and time.perf_counter() >= self._deadline:
            raise _Timeout

    def shave_root(self, x: int, v: int) -> bool:
        """Permanently remove a root value that failed singleton probing;
        False when this proves root infeasibility."""
        if self.store.level != 0:
            raise RuntimeError("shaving is only valid at the root")
        if self.store.remove_value(x, v) is WOULD_EMPTY:
            return False
        return self.propagate(seed_vars=(x,)).ok

    def note_probe_solution(self) -> bool:
        """A probe reached a leaf; record it.  Returns True when probing
        should stop (first solution of a satisfaction search)."""
        if self.all_solutions or self.probe_only:
            return False  # enumeration/probing must not short-circuit
        self._record_solution()
        return self.model.objective is None

    # -- solution bookkeeping --

    def _record_solution(self) -> bool:
        """Record the current (fully bound) store.  Returns True when the
        search is done (satisfaction mode, single solution wanted)."""
        values = self.store.assignment()
        t = time.perf_counter() - self._t0
        stats = self.stats
        if self.model.objective is not None:
            obj = values[self.model.objective[0]]
            stats.solutions.append((obj, t))
            stats.best_objective = obj
            stats.best_assignment = values
            self.bound.update(obj)
            return False
        stats.best_assignment = values
        if self.all_solutions:
            stats.all_solutions.append(tuple(values))
            return False
        stats.solutions.append((None, t))
        return True

    # -- the search proper --

    def run(self) -> SearchStats:
        self._t0 = time.perf_counter()
        if self.timeout is not None:
            self._deadline = self._t0 + self.timeout
        stats = self.stats
        try:
            root = self.propagate(seed_all=True)
            if not root.ok:
                return self._finish(Status.PROVED_INFEASIBLE)
            if not self.heuristic.initialize(self):
                # shaving emptied a domain: nothing (better) exists
                return self._finish(self._exhausted_status())
            if self.probe_only:
                return self._finish(Status.SOLUTION_FOUND)
            if (
                stats.best_assignment is not None
                and self.model.objective is None
                and not self.all_solutions
            ):
                return self._finish(Status.SOLUTION_FOUND)  # probe solution
            return self._finish(self._dfs())
        except _Timeout:
            return self._finish(Status.TIMED_OUT)

    def _finish(self, status: Status) -> SearchStats:
        self.stats.status = status
        self.stats.wall_time = time.perf_counter() - self._t0
        return self.stats

    def _free_vars(self) -> list[int]:
        domains = self.store.domains
        return [x for x in self.model.branch_vars if domains[x].size > 1]

    def _try_branch(self, kind: str, x: int, v: int, controller) -> bool:
        """Push a level, post the branch, propagate, feed the heuristic.
        On failure restores the level, counts the failure, and may flag a
        restart.  Returns whether the branch is consistent."""
        store = self.store
        heur = self.heuristic
        level = store.push_level()
        log_before = 0.0
        if heur.needs_log_size and kind == "eq":
            log_before = store.search_space_log_size()
        res = self.propagate((kind, x, v))
        heur.on_search_fixpoint(kind, x, v, res, store, log_before)
        if res.ok:
            return True
        store.restore_to(level)
        self.stats.failures += 1
        if self.max_failures is not None and self.stats.failures >= self.max_failures:
            raise _Timeout
        if controller.on_failure():
            self._restart_requested = True
        return False

    def _dfs(self) -> Status:
        store = self.store
        heur = self.heuristic
        stats = self.stats
        controller = RestartController(
            self.restart_policy, 3 * len(self.model.branch_vars)
        )
        pending: list[tuple[int, int, int]] = []  # (level before push, x, v)

        while True:
            free = self._free_vars()
            if not free:
                if self._record_solution():
                    return Status.SOLUTION_FOUND
                exhausted = not self._backtrack(pending, controller)
            else:
                x = heur.select_variable(free, store)
                v = heur.select_value(x, store)
                level_before = store.level
                stats.choice_points += 1
                if self._try_branch("eq", x, v, controller):
                    pending.append((level_before, x, v))
                    continue
                if self._restart_requested:
                    exhausted = False
                elif self._try_branch("ne", x, v, controller):
                    continue
                else:
                    exhausted = (
                        not self._restart_requested
                        and not self._backtrack(pending, controller)
                    )
            if self._restart_requested:
                self._restart_requested = False
                stats.restarts += 1
                controller.new_round()
                pending.clear()
                if store.level >= 1:
                    store.restore_to(1)
                continue
            if exhausted:
                break
        return self._exhausted_status()

    def _exhausted_status(self) -> Status:
        stats = self.stats
        if self.model.objective is not None:
            if stats.best_objective is not None:
                return Status.PROVED_OPTIMAL
            return Status.PROVED_INFEASIBLE
        if stats.best_assignment is not None:
            return Status.SOLUTION_FOUND
        return Status.PROVED_INFEASIBLE

    def _backtrack(self, pending, controller) -> bool:
        """Work through pending refutations; True once a consistent node is
        reached, False when the tree is exhausted (or a restart triggered)."""
        while pending:
            level_before, x, v = pending.pop()
            self.store.restore_to(level_before + 1)
            if self._try_branch("ne", x, v, controller):
                return True
            if self._restart_requested:
                return False
        return False


def solve(
    model: Model,
    heuristic: Union[str, HeuristicConfig] = "abs",
    *,
    restart: Optional[RestartPolicy] = None,
    seed: int = 0,
    timeout: Optional[float] = None,
    max_failures: Optional[int] = None,
    all_solutions: bool = False,
) -> SearchStats:
    """Solve a model.

    Satisfaction models stop at the first solution (or enumerate all of
    them with ``all_solutions=True``); models with an objective run branch
    and bound to optimality.  Identical (model, heuristic, restart, seed)
    give an identical search tree.
    """
    config = HeuristicConfig(kind=heuristic) if isinstance(heuristic, str) else heuristic
    restart = restart or RestartPolicy.none()
    solver = _Solver(
        model, config, restart, seed, timeout, max_failures, all_solutions
    )
    return solver.run()


def branch_and_bound(model: Model, heuristic="abs", **kwargs) -> SearchStats:
    """Optimize a model with an objective (thin wrapper over ``solve``)."""
    if model.objective is None:
        raise ValueError("branch_and_bound requires a model with an objective")
    return solve(model, heuristic, **kwargs)


def probe_activities(
    model: Model,
    config: Optional[HeuristicConfig] = None,
    seed: int = 0,
    timeout: Optional[float] = None,
) -> tuple[Optional[list[float]], Optional[list[bool]], SearchStats]:
    """Run only the activity-probing initialization.

    Returns (activities, fixed_at_root flags, stats); activities is None when
    the root is infeasible.  Used by the activity-distribution analysis.
    """
    config = config or HeuristicConfig(kind="abs", value_heuristic=False)
    if config.kind != "abs":
        raise ValueError("probing is defined by the activity heuristic")
    solver = _Solver(
        model, config, RestartPolicy.none(), seed, timeout,
        None, False, probe_only=True,
    )
    stats = solver.run()
    if stats.status is not Status.SOLUTION_FOUND:
        return None, None, stats
    heur = solver.heuristic
    assert isinstance(heur, ActivitySearch)
    fixed = [d.size == 1 for d in solver.store.domains]
    return list(heur.activity), fixed, stats
