"""Train the six online learners on one separable stream and watch them converge.

Run: python3 demos/01_online_learners.py
"""

import numpy as np

from pater import LearnerState, Variant, run_stream
from pater.evaluation import CumulativeTrace
from pater.synthetic import two_gaussians

ds = two_gaussians(n_per_class=300, margin=1.0, seed=4)
print(f"stream: {len(ds)} samples, d={ds.dimension}, ratio n+/n- = {ds.imbalance_ratio:.2f}\n")

for variant in Variant:
    state = LearnerState.new(variant, ds.dimension)
    preds, records = run_stream(state, ds.X, ds.y, collect_records=True)
    trace = CumulativeTrace.from_correct(preds == ds.y)
    taus = np.array([r.tau for r in records])
    checkpoints = "  ".join(f"t={t}:{trace.cumulative_accuracy[t - 1]:.3f}"
                            for t in (10, 50, 200, len(trace)))
    print(f"{variant.display_name:10s} {checkpoints}   "
          f"negative steps: {np.sum(taus < 0):3d}   w = {np.round(state.weights, 3)}")

# The TER-family keeps constant-memory class summaries.
state = LearnerState.new("pater2", ds.dimension)
run_stream(state, ds.X, ds.y)
a = state.aggregates
print(f"\nclass means after the stream: z- = {np.round(a.z_neg, 3)}, z+ = {np.round(a.z_pos, 3)}")
print(f"accumulated losses: k- = {a.k_neg:.4f}, k+ = {a.k_pos:.4f}")
