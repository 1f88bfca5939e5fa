"""Branch and bound on the multi-knapsack optimization models.

Each improving solution posts a persistent objective bound (it survives
backtracking and restarts); exhaustion then proves optimality.

Run:  python demos/04_knapsack_branch_and_bound.py
"""

from fdsearch import (
    build_knapsack_cop,
    build_knapsack_csp,
    load_bundled_instance,
    solve,
)

inst = load_bundled_instance("1-3")
print(f"instance {inst.name}: {inst.n_items} items, {inst.n_constraints} constraints, "
      f"recorded optimum {inst.optimum}\n")

stats = solve(build_knapsack_cop(inst), "abs", seed=0, timeout=60)
print("optimization run (activity-based search):")
print(f"  status        {stats.status.value}")
print(f"  optimum       {stats.best_objective}")
print(f"  choice points {stats.choice_points}, failures {stats.failures}")
print("  improving solutions (objective @ seconds):")
for objective, t in stats.solutions:
    print(f"    {objective:>5} @ {t:.3f}s")

chosen = [i for i in range(inst.n_items) if stats.best_assignment[i] == 1]
print(f"  items taken   {chosen}")

print("\nsatisfaction variant: profit pinned to the optimum as an equality")
csp = solve(build_knapsack_csp(inst), "wdeg", seed=0, timeout=60)
print(f"  status {csp.status.value} after {csp.choice_points} choice points "
      f"({csp.wall_time:.2f}s)")
