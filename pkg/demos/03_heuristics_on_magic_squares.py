"""The three black-box heuristics side by side on magic squares.

Activity-based search probes the space first and branches on activity per
domain value; impact-based search simulates every root assignment and
branches where the estimated remaining space is smallest; weighted-degree
learns constraint weights from failures.

Run:  python demos/03_heuristics_on_magic_squares.py
"""

from fdsearch import RestartPolicy, build_magic_square, check_magic_square, solve

N = 6
print(f"magic square {N}x{N}, fast geometric restarts (rho=1.1), 3 seeds each\n")
print(f"{'heuristic':>9} {'seed':>4} {'status':>9} {'choice pts':>10} "
      f"{'failures':>8} {'restarts':>8} {'probes':>6} {'time':>7}")

for heuristic in ("abs", "ibs", "wdeg"):
    for seed in (0, 1, 2):
        stats = solve(
            build_magic_square(N),
            heuristic,
            restart=RestartPolicy.geometric(1.1),
            seed=seed,
            timeout=30,
        )
        assert stats.best_assignment is None or check_magic_square(N, stats.best_assignment)
        print(
            f"{heuristic:>9} {seed:>4} {stats.status.value:>9} "
            f"{stats.choice_points:>10} {stats.failures:>8} "
            f"{stats.restarts:>8} {stats.probes:>6} {stats.wall_time:>6.2f}s"
        )

print("\none solved square (abs, seed 0):")
stats = solve(build_magic_square(N), "abs", restart=RestartPolicy.geometric(1.1), seed=0)
vals = stats.best_assignment
for i in range(N):
    print("   " + " ".join(f"{vals[i * N + j]:>3}" for j in range(N)))
