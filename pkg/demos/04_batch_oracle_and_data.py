"""Closed-form batch TER solution, data loading and the fold protocol.

Run: python3 demos/04_batch_oracle_and_data.py
"""

import numpy as np

from pater import LearnerState, run_stream
from pater.batch import BatchDesign, normal_residual, ter_closed_form
from pater.data import dump_libsvm, load_libsvm, load_registry, make_folds, zscore_apply, zscore_fit
from pater.synthetic import imbalanced_gaussians

ds = imbalanced_gaussians(n_neg=400, ratio=0.25, seed=2).with_bias()

design = BatchDesign.from_samples(ds.X, ds.y)
w_batch = ter_closed_form(design)
print("batch solution:", np.round(w_batch, 4),
      f"(normal-equation residual {normal_residual(design, w_batch):.1e})")

state = LearnerState.new("pater1", ds.dimension)
run_stream(state, ds.X, ds.y)
cos = state.weights @ w_batch / np.linalg.norm(state.weights) / np.linalg.norm(w_batch)
print("online PATER-I:", np.round(state.weights, 4), f"cosine to batch {cos:.3f}")

# LIBSVM text round trip
text = dump_libsvm(ds.subset(np.arange(3)))
print("\nLIBSVM text of the first three rows:\n" + text)
print("reloaded identical:", np.array_equal(load_libsvm(text).X, ds.X[:3]))

# Stratified 2-fold splits with per-fold normalization
split = make_folds(ds, seed=0, runs=1)[0]
stats = zscore_fit(ds.X[split.train_indices])
test = zscore_apply(stats, ds.X[split.test_indices])
print(f"\nfold sizes {len(split.train_indices)}/{len(split.test_indices)}, "
      f"positives {int((ds.y[split.train_indices] == 1).sum())}/"
      f"{int((ds.y[split.test_indices] == 1).sum())}; "
      f"test-fold means after train-fold scaling: {np.round(test.mean(axis=0), 3)}")

reg = load_registry()
print(f"\nregistry: {len(reg)} entries, e.g.")
for name in ("Credit-app", "Mushroom", "Ozone-one"):
    e = reg[name]
    print(f"  {name:12s} {e.expected_cases} cases, {e.expected_features} features, "
          f"ratio {e.expected_ratio}")
