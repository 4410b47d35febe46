"""Class weights on a skewed stream: sweep the alpha grid and compare with unit weights.

Run: python3 demos/02_imbalance_sweep.py
"""

from pater.evaluation import DEFAULT_GRID, cross_validate, sweep_weights
from pater.synthetic import imbalanced_gaussians

ds = imbalanced_gaussians(n_neg=1000, ratio=0.05, seed=0)
print(f"{len(ds)} samples, {ds.n_pos} positives, ratio {ds.imbalance_ratio:.3f}")

for algo in ("pater1", "pater2"):
    rep = cross_validate(algo, ds, seed=0)
    print(f"{algo:8s} accuracy {rep.mean:6.2f}  balanced {rep.mean_balanced_accuracy:6.2f}")

for algo in ("wpater1", "wpater2"):
    res = sweep_weights(algo, ds, grid=DEFAULT_GRID, metric="balanced", seed=0)
    print(f"\n{algo}: balanced accuracy per configuration")
    for side, g, score in res.scores:
        cfg = f"(a-={g}, a+=1)" if side == "N" else f"(a-=1, a+={g})"
        print(f"  {side} {cfg:18s} {score:6.2f}")
    print(f"  best {res.best_weights} -> {res.best_score:.2f}; "
          f"best weight {res.best_weight}, needed weight {res.needed_weight}, "
          f"match={res.match}")
