"""Black-box variable/value selection: impact-based search, activity-based
search, and the weighted-degree heuristic, fed by propagation events.

Each heuristic owns its statistics for exactly one solve; nothing here is
trailed, so learned statistics persist across backtracks and restarts.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .domain import DomainStore
from .model import Model

# Two-sided 95% Student-t critical values, df = 1..30; 1.960 beyond.
_T_95 = (
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201, 2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
)


def t_critical(df: int) -> float:
    """Two-sided 95% Student-t critical value for ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if df <= 30:
        return _T_95[df - 1]
    return 1.960


@dataclass
class HeuristicConfig:
    """Knobs shared by the three heuristics (defaults match the benchmark
    harness defaults: alpha=8, gamma=0.999, delta=0.2)."""

    kind: str = "abs"  # "abs" | "ibs" | "wdeg"
    alpha: float = 8.0
    gamma: float = 0.999
    delta: float = 0.2
    value_heuristic: bool = True
    min_probes: int = 10
    probe_cap: int = 1000
    mean_epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if self.kind not in ("abs", "ibs", "wdeg"):
            raise ValueError(f"unknown heuristic {self.kind!r}")
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")
        if not 0 <= self.gamma <= 1:
            raise ValueError("gamma must be in [0, 1]")
        if not 0 < self.delta < 1:
            raise ValueError("delta must be in (0, 1)")
        if self.min_probes < 2:
            raise ValueError("min_probes must be >= 2")


class ProbeAccumulator:
    """Streaming per-variable mean/variance of per-probe activity vectors
    (Welford), plus running means of per-assignment activity.

    One ``fold`` per probe; untouched variables contribute 0 for that probe.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.count = 0
        self.mean = [0.0] * nvars
        self.m2 = [0.0] * nvars
        self.assignment_mean: dict[tuple[int, int], list[float]] = {}

    def fold(
        self,
        vector: Sequence[float],
        decisions: Sequence[tuple[tuple[int, int], int]] = (),
    ) -> None:
        """Fold one probe's activity vector and its (x=v, |affected|) log."""
        self.count += 1
        n = self.count
        mean = self.mean
        m2 = self.m2
        for x in range(self.nvars):
            v = vector[x]
            delta = v - mean[x]
            mean[x] += delta / n
            m2[x] += delta * (v - mean[x])
        for key, a_k in decisions:
            cell = self.assignment_mean.get(key)
            if cell is None:
                self.assignment_mean[key] = [1.0, float(a_k)]
            else:
                cell[0] += 1.0
                cell[1] += (a_k - cell[1]) / cell[0]

    def stddev(self, x: int) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2[x] / (self.count - 1))

    def max_halfwidth_ratio(self, mean_epsilon: float = 1e-6) -> float:
        """max over variables of t * stddev / (sqrt(n) * mean); variables
        with mean <= mean_epsilon are exempt (a relative band around 0 is
        unattainable)."""
        n = self.count
        if n < 2:
            return math.inf
        t = t_critical(n - 1)
        sqrt_n = math.sqrt(n)
        worst = 0.0
        for x in range(self.nvars):
            mu = self.mean[x]
            if mu <= mean_epsilon:
                continue
            ratio = t * self.stddev(x) / (sqrt_n * mu)
            if ratio > worst:
                worst = ratio
        return worst

    def should_stop(self, delta: float, min_probes: int, mean_epsilon: float = 1e-6) -> bool:
        if self.count < min_probes:
            return False
        return self.max_halfwidth_ratio(mean_epsilon) <= delta


def _argbest(candidates: Sequence[int], scores: Sequence[float], rng, largest: bool) -> int:
    """Uniform random element of the argmax (or argmin) set."""
    best = scores[0]
    ties = [candidates[0]]
    for i in range(1, len(candidates)):
        s = scores[i]
        if s == best:
            ties.append(candidates[i])
        elif (s > best) if largest else (s < best):
            best = s
            ties = [candidates[i]]
    if len(ties) == 1:
        return ties[0]
    return ties[rng.randrange(len(ties))]


class SearchHeuristic:
    """Interface the search loop drives; one instance per solve."""

    needs_log_size = False

    def __init__(self, model: Model, config: HeuristicConfig, rng):
        self.model = model
        self.config = config
        self.rng = rng

    def initialize(self, solver) -> bool:
        """Root initialization; returns False when it proves infeasibility."""
        return True

    def select_variable(self, free: Sequence[int], store: DomainStore) -> int:
        raise NotImplementedError

    def select_value(self, x: int, store: DomainStore) -> int:
        raise NotImplementedError

    def on_search_fixpoint(self, kind, x, v, result, store, log_before) -> None:
        """Called after every search-phase fixpoint (decisions and
        refutations), including failed ones."""


class ImpactSearch(SearchHeuristic):
    """Impact-based search.

    Assignment impacts I(x=a) = 1 - S(after)/S(before) are estimated at the
    root by simulating every assignment exactly (no domain partitioning) and
    maintained during search with the alpha-weighted update.  Branches on
    the variable whose labeling is estimated to leave the least search
    space, i.e. the smallest sum of (1 - impact) over the live values, then
    on a value of least impact.
    """

    needs_log_size = True

    def __init__(self, model, config, rng):
        super().__init__(model, config, rng)
        self.impact: dict[tuple[int, int], float] = {}

    def initialize(self, solver) -> bool:
        store = solver.store
        probes = 0
        for x in self.model.branch_vars:
            d = store.domains[x]
            if d.size <= 1:
                continue
            for a in list(d.values()):
                if d.size <= 1:
                    break
                if a not in d:
                    continue  # shaved away by an earlier failed probe
                solver.check_deadline()
                log_before = store.search_space_log_size()
                level = store.push_level()
                res = solver.propagate(("eq", x, a))
                probes += 1
                if res.ok:
                    impact = 1.0 - math.exp(store.search_space_log_size() - log_before)
                    store.restore_to(level)
                    self.impact[(x, a)] = impact
                else:
                    store.restore_to(level)
                    self.impact[(x, a)] = 1.0
                    if not solver.shave_root(x, a):
                        solver.stats.probes += probes
                        return False
        solver.stats.probes += probes
        return True

    def variable_score(self, x: int, store: DomainStore) -> float:
        """Estimated remaining space under labeling x: sum of (1 - impact)
        over current domain values; unknown values count a full 1."""
        impact = self.impact
        total = 0.0
        for a in store.domains[x].values():
            total += 1.0 - impact.get((x, a), 0.0)
        return total

    def select_variable(self, free, store):
        scores = [self.variable_score(x, store) for x in free]
        return _argbest(free, scores, self.rng, largest=False)

    def select_value(self, x, store):
        impact = self.impact
        values = list(store.domains[x].values())
        scores = [impact.get((x, a), 0.0) for a in values]
        return _argbest(values, scores, self.rng, largest=False)

    def on_search_fixpoint(self, kind, x, v, result, store, log_before):
        if kind != "eq":
            return  # refutations carry no assignment to score
        if result.ok:
            impact = 1.0 - math.exp(store.search_space_log_size() - log_before)
        else:
            impact = 1.0
        old = self.impact.get((x, v))
        if old is None:
            self.impact[(x, v)] = impact
        else:
            alpha = self.config.alpha
            self.impact[(x, v)] = (old * (alpha - 1.0) + impact) / alpha


class ActivitySearch(SearchHeuristic):
    """Activity-based search.

    A(x) counts, with decay gamma on free variables, how often propagation
    filters x's domain.  Activities are initialized by random probes until
    the 95% t-distribution confidence interval of every variable's mean
    activity is within delta of that mean.  Branches on the largest
    A(x)/|D(x)|; the optional value heuristic picks the least assignment
    activity.
    """

    def __init__(self, model, config, rng):
        super().__init__(model, config, rng)
        self.activity = [0.0] * model.num_vars
        self.assignment_activity: Optional[dict[tuple[int, int], float]] = (
            {} if config.value_heuristic else None
        )

    def initialize(self, solver) -> bool:
        cfg = self.config
        store = solver.store
        rng = self.rng
        branch_vars = self.model.branch_vars
        nvars = self.model.num_vars
        acc = ProbeAccumulator(nvars)
        stop = False
        if all(store.domains[x].size == 1 for x in branch_vars):
            stop = True  # nothing to probe
        while not stop and acc.count < cfg.probe_cap:
            solver.check_deadline()
            vector = [0] * nvars
            decisions: list[tuple[tuple[int, int], int]] = []
            base = store.push_level()
            first_decision: Optional[tuple[int, int]] = None
            failed_first = False
            step = 0
            while True:
                free = [x for x in branch_vars if store.domains[x].size > 1]
                if not free:
                    stop = solver.note_probe_solution()
                    break
                x = free[rng.randrange(len(free))]
                vals = list(store.domains[x].values())
                v = vals[rng.randrange(len(vals))]
                if step == 0:
                    first_decision = (x, v)
                res = solver.propagate(("eq", x, v))
                for y in res.affected:
                    vector[y] += 1  # gamma=1 during probes: no aging
                decisions.append(((x, v), len(res.affected)))
                if not res.ok:
                    failed_first = step == 0
                    break
                step += 1
            store.restore_to(base)
            if failed_first:
                # root + (x=v) fails: singleton-consistency shaving
                fx, fv = first_decision
                if not solver.shave_root(fx, fv):
                    solver.stats.probes += acc.count + 1
                    return False
            acc.fold(vector, decisions)
            if acc.should_stop(cfg.delta, cfg.min_probes, cfg.mean_epsilon):
                break
        self.activity = list(acc.mean)
        if self.assignment_activity is not None:
            self.assignment_activity = {
                key: cell[1] for key, cell in acc.assignment_mean.items()
            }
        solver.stats.probes += acc.count
        return True

    def select_variable(self, free, store):
        domains = store.domains
        activity = self.activity
        scores = [activity[x] / domains[x].size for x in free]
        return _argbest(free, scores, self.rng, largest=True)

    def select_value(self, x, store):
        values = list(store.domains[x].values())
        table = self.assignment_activity
        if table is None:
            return values[0]  # ascending domain order
        scores = [table.get((x, a), 0.0) for a in values]
        return _argbest(values, scores, self.rng, largest=False)

    def on_search_fixpoint(self, kind, x, v, result, store, log_before):
        gamma = self.config.gamma
        activity = self.activity
        domains = store.domains
        for y in range(len(activity)):
            if domains[y].size > 1:
                activity[y] *= gamma
        for y in result.affected:
            activity[y] += 1.0
        table = self.assignment_activity
        if kind == "eq" and table is not None:
            a_k = float(len(result.affected))
            old = table.get((x, v))
            if old is None:
                table[(x, v)] = a_k
            else:
                alpha = self.config.alpha
                table[(x, v)] = (old * (alpha - 1.0) + a_k) / alpha


class WeightedDegreeSearch(SearchHeuristic):
    """Weighted-degree heuristic.

    Every constraint starts at weight 1 and is incremented when its
    propagation wipes out a domain.  Branches on the smallest
    |D(x)| / sum of weights of x's constraints with more than one
    uninstantiated variable; values are tried in ascending domain order.
    """

    def __init__(self, model, config, rng):
        super().__init__(model, config, rng)
        self.weights = [1] * len(model.propagators)
        self._var_props: list[list[int]] = [[] for _ in range(model.num_vars)]
        for p in model.propagators:
            for x in p.scope:
                self._var_props[x].append(p.pid)

    def variable_ratio(self, x: int, store: DomainStore) -> float:
        """|D(x)| / wdeg(x) over constraints with >1 uninstantiated variable;
        +inf when no constraint qualifies."""
        domains = store.domains
        wdeg = 0
        for pid in self._var_props[x]:
            future = sum(
                1 for y in self.model.propagators[pid].scope if domains[y].size > 1
            )
            if future > 1:
                wdeg += self.weights[pid]
        return domains[x].size / wdeg if wdeg else math.inf

    def select_variable(self, free, store):
        domains = store.domains
        props = self.model.propagators
        weights = self.weights
        future_counts = [0] * len(props)
        for p in props:
            cnt = 0
            for y in p.scope:
                if domains[y].size > 1:
                    cnt += 1
                    if cnt > 1:
                        break
            future_counts[p.pid] = cnt
        scores = []
        for x in free:
            wdeg = 0
            for pid in self._var_props[x]:
                if future_counts[pid] > 1:
                    wdeg += weights[pid]
            scores.append(domains[x].size / wdeg if wdeg else math.inf)
        return _argbest(free, scores, self.rng, largest=False)

    def select_value(self, x, store):
        return store.domains[x].min

    def on_search_fixpoint(self, kind, x, v, result, store, log_before):
        pid = result.failed
        if pid is not None and 0 <= pid < len(self.weights):
            self.weights[pid] += 1


def build_heuristic(model: Model, config: HeuristicConfig, rng) -> SearchHeuristic:
    cls = {
        "ibs": ImpactSearch,
        "abs": ActivitySearch,
        "wdeg": WeightedDegreeSearch,
    }[config.kind]
    return cls(model, config, rng)


def write_activity_csv(path, rows: Sequence[tuple[int, float]]) -> None:
    """Serialize (VarId, activity) pairs for activity-distribution analysis."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["var", "activity"])
        for var, act in rows:
            writer.writerow([var, f"{act:.9g}"])
