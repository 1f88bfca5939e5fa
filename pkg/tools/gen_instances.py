#!/usr/bin/env python3
"""Regenerate the bundled multi-knapsack instances.

Deterministic instances at the classic benchmark sizes (10..39 items,
5/10 constraints), written in the plain text format the package parses.
The recorded optimum is computed exactly with an integer program (HiGHS
via scipy) and, where enumeration is cheap, cross-checked by brute force.
Not a package dependency: run it only to rebuild ``src/fdsearch/data``.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import LinearConstraint, milp

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "fdsearch" / "data"

# name -> (items, constraints, rng seed, capacity fraction of total weight)
LAYOUT = {
    "1-2": (10, 10, 2, 0.50),
    "1-3": (15, 10, 3, 0.50),
    "1-4": (20, 10, 4, 0.50),
    "1-5": (28, 10, 5, 0.50),
    "1-6": (39, 5, 6, 0.50),
}


def generate(n: int, m: int, seed: int, cap_fraction: float):
    rng = random.Random(seed)
    weights = [[rng.randint(5, 50) for _ in range(n)] for _ in range(m)]
    profits = []
    for j in range(n):
        avg = sum(weights[i][j] for i in range(m)) / m
        profits.append(int(round(avg)) + rng.randint(5, 25))
    capacities = [int(round(cap_fraction * sum(row))) for row in weights]
    return profits, weights, capacities


def exact_optimum_milp(profits, weights, capacities) -> int:
    n = len(profits)
    constraint = LinearConstraint(np.array(weights), -np.inf, np.array(capacities))
    res = milp(
        c=-np.array(profits, dtype=float),
        constraints=constraint,
        integrality=np.ones(n),
        bounds=(0, 1),
    )
    if not res.success:
        raise RuntimeError(f"MILP failed: {res.message}")
    return int(round(-res.fun))


def exact_optimum_bruteforce(profits, weights, capacities) -> int:
    n = len(profits)
    codes = np.arange(1 << n, dtype=np.uint32)
    bits = ((codes[:, None] >> np.arange(n, dtype=np.uint32)) & 1).astype(np.int64)
    loads = bits @ np.array(weights, dtype=np.int64).T
    feasible = (loads <= np.array(capacities, dtype=np.int64)).all(axis=1)
    values = bits @ np.array(profits, dtype=np.int64)
    return int(values[feasible].max())


def write_instance(name: str, profits, weights, capacities, optimum: int) -> Path:
    n = len(profits)
    m = len(weights)
    lines = [f"{n} {m}", " ".join(map(str, profits))]
    lines += [" ".join(map(str, row)) for row in weights]
    lines.append(" ".join(map(str, capacities)))
    lines.append(str(optimum))
    path = DATA_DIR / f"knap{name}.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def main() -> int:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for name, (n, m, seed, frac) in LAYOUT.items():
        profits, weights, capacities = generate(n, m, seed, frac)
        opt = exact_optimum_milp(profits, weights, capacities)
        if n <= 20:
            brute = exact_optimum_bruteforce(profits, weights, capacities)
            if brute != opt:
                raise RuntimeError(f"{name}: MILP {opt} != brute force {brute}")
        path = write_instance(name, profits, weights, capacities, opt)
        print(f"{path.name}: n={n} m={m} optimum={opt}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
