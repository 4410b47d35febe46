"""Friedman test and Nemenyi groups over a benchmark grid.

Uses the reference mean accuracies bundled with the test suite when run
from the repository root, and a small synthetic benchmark otherwise.

Run: python3 demos/03_significance.py
"""

import sys
from pathlib import Path

import numpy as np

from pater.stats import critical_difference, friedman_nemenyi, rank_table

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
try:
    from reference_results import ALGORITHMS, TABLE
    grid = np.array([row[1] for row in TABLE])
    datasets = [row[0] for row in TABLE]
except ImportError:
    from pater.evaluation import cross_validate
    from pater.synthetic import imbalanced_gaussians

    ALGORITHMS = ("perceptron", "pa", "pater1", "wpater1")
    datasets = [f"synth-{r}" for r in (0.05, 0.1, 0.3, 0.6)]
    sets = [imbalanced_gaussians(300, r, seed=1, name=n) for r, n in
            zip((0.05, 0.1, 0.3, 0.6), datasets)]
    grid = np.array([[cross_validate(a, ds, runs=3).mean for a in ALGORITHMS] for ds in sets])

table = rank_table(grid, ALGORITHMS, datasets)
print("average ranks:", {a: round(float(r), 2) for a, r in zip(ALGORITHMS, table.average_ranks)})

res = friedman_nemenyi(grid, ALGORITHMS)
print(f"Friedman chi2 = {res.friedman_statistic:.3f}, p = {res.p_value:.3g}")
print(f"CD(k={len(ALGORITHMS)}, N={len(datasets)}) = {res.critical_difference:.4f}")
for g in res.groups:
    print("  indistinguishable:", " -- ".join(g))

# CD shrinks with more datasets and grows with more algorithms.
for k in (3, 6, 10):
    print(f"k={k}: " + "  ".join(f"N={n}:{critical_difference(k, n):.3f}" for n in (10, 31, 100)))
