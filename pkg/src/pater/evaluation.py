"""Benchmark protocol: repeated 2-fold CV, prequential traces, weight sweeps.

One online pass is made over each training fold; the final weights are
frozen and scored on the held-out fold. CPU time covers the update loop
only (no loading, normalization or scoring).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .batch import BatchTER
from .data import Dataset, make_folds, zscore_apply, zscore_fit
from .exceptions import ProtocolError
from .learners import ClassWeights, LearnerState, UNIT_WEIGHTS, Variant, run_stream

#: Pseudo-algorithm name for the closed-form batch solution.
BATCH_TER = "ter-batch"

#: Class-weight grid used by the weighted variants.
DEFAULT_GRID = (0.01, 0.1, 0.3, 0.5, 0.9, 0.99)

NORMALIZE_MODES = ("per-fold", "global", "none")


@dataclass(frozen=True)
class ConfusionMatrix:
    tn: int
    fp: int
    fn: int
    tp: int

    @classmethod
    def from_predictions(cls, y_true, y_pred):
        y_true = np.asarray(y_true)
        y_pred = np.asarray(y_pred)
        neg = y_true == -1
        pos = ~neg
        return cls(
            tn=int(np.count_nonzero(neg & (y_pred == -1))),
            fp=int(np.count_nonzero(neg & (y_pred == 1))),
            fn=int(np.count_nonzero(pos & (y_pred == -1))),
            tp=int(np.count_nonzero(pos & (y_pred == 1))),
        )

    @property
    def n_neg(self):
        return self.tn + self.fp

    @property
    def n_pos(self):
        return self.fn + self.tp

    @property
    def total(self):
        return self.n_neg + self.n_pos

    @property
    def accuracy(self):
        """Percentage of correct predictions."""
        return 100.0 * (self.tn + self.tp) / self.total


def _rates(cm):
    if cm.n_neg == 0 or cm.n_pos == 0:
        raise ProtocolError(
            f"per-class rates undefined: n-={cm.n_neg}, n+={cm.n_pos}"
        )
    return cm.n_neg, cm.n_pos


def balanced_accuracy(cm):
    n_neg, n_pos = _rates(cm)
    return 0.5 * (cm.tn / n_neg + cm.tp / n_pos)


def weighted_accuracy(cm, class_weights):
    n_neg, n_pos = _rates(cm)
    return class_weights.alpha_neg * cm.tn / n_neg + class_weights.alpha_pos * cm.tp / n_pos


def wter(cm, class_weights):
    n_neg, n_pos = _rates(cm)
    return class_weights.alpha_neg * cm.fp / n_neg + class_weights.alpha_pos * cm.fn / n_pos


@dataclass(frozen=True)
class CumulativeTrace:
    steps: np.ndarray
    cumulative_accuracy: np.ndarray

    @classmethod
    def from_correct(cls, correct):
        correct = np.asarray(correct, dtype=np.int64)
        steps = np.arange(1, correct.size + 1)
        return cls(steps, np.cumsum(correct) / steps)

    def __len__(self):
        return self.steps.size

    @property
    def final(self):
        return float(self.cumulative_accuracy[-1]) if self.steps.size else float("nan")

    def to_csv(self):
        lines = ["step,cumulative_accuracy"]
        lines.extend(f"{s},{a!r}" for s, a in zip(self.steps.tolist(),
                                                  self.cumulative_accuracy.tolist()))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FoldResult:
    accuracy: float
    confusion: ConfusionMatrix
    trace: CumulativeTrace | None
    cpu_seconds: float
    weights: np.ndarray = field(repr=False, default=None)


def evaluate_fold(algorithm, train_X, train_y, test_X, test_y, class_weights=None,
                  clip_tau=False, seed=None):
    """Train one online pass on the training fold and score the test fold.

    Parameters
    ----------
    algorithm : Variant, str
        A learner variant or :data:`BATCH_TER`.
    seed : int, optional
        If given, the training stream is permuted with this seed first;
        otherwise it is consumed in the order supplied.

    Returns
    -------
    FoldResult
        ``trace`` is the prequential accuracy over the training stream
        (None for the batch solution).
    """
    train_X = np.asarray(train_X, dtype=np.float64)
    test_X = np.asarray(test_X, dtype=np.float64)
    train_y = np.asarray(train_y)
    test_y = np.asarray(test_y)
    if train_X.shape[0] == 0 or test_X.shape[0] == 0:
        raise ProtocolError("training and test folds must be non-empty")
    if seed is not None:
        order = np.random.default_rng(seed).permutation(train_X.shape[0])
        train_X, train_y = train_X[order], train_y[order]

    if algorithm == BATCH_TER:
        start = time.process_time()
        model = BatchTER(ridge=1e-10).fit(train_X, train_y)
        cpu = time.process_time() - start
        pred = model.predict(test_X)
        cm = ConfusionMatrix.from_predictions(test_y, pred)
        return FoldResult(cm.accuracy, cm, None, cpu, model.coef_)

    variant = Variant.parse(algorithm)
    state = LearnerState.new(variant, train_X.shape[1],
                             class_weights if variant.is_weighted else None, clip_tau)
    start = time.process_time()
    preq = run_stream(state, train_X, train_y)
    cpu = time.process_time() - start
    trace = CumulativeTrace.from_correct(preq == train_y)
    pred = np.where(test_X @ state.weights >= 0.0, 1, -1)
    cm = ConfusionMatrix.from_predictions(test_y, pred)
    return FoldResult(cm.accuracy, cm, trace, cpu, state.weights.copy())


@dataclass
class AccuracyReport:
    algorithm: str
    dataset: str
    per_run_accuracy: list
    mean: float
    stddev: float
    mean_cpu_seconds: float
    per_run_balanced_accuracy: list = field(default_factory=list)
    class_weights: ClassWeights = UNIT_WEIGHTS
    traces: list = field(default_factory=list, repr=False)

    @property
    def mean_balanced_accuracy(self):
        vals = [v for v in self.per_run_balanced_accuracy if v == v]
        return float(np.mean(vals)) if vals else float("nan")

    def to_record(self):
        """Deterministic fields only (CPU time excluded)."""
        return {
            "algorithm": self.algorithm,
            "dataset": self.dataset,
            "alpha_neg": self.class_weights.alpha_neg,
            "alpha_pos": self.class_weights.alpha_pos,
            "runs": len(self.per_run_accuracy),
            "mean": self.mean,
            "stddev": self.stddev,
            "mean_balanced_accuracy": self.mean_balanced_accuracy,
            "per_run_accuracy": list(self.per_run_accuracy),
        }


def _normalized_folds(dataset, normalize, split):
    X = dataset.X
    tr, te = split.train_indices, split.test_indices
    if normalize == "per-fold":
        stats = zscore_fit(X[tr])
        return zscore_apply(stats, X[tr]), zscore_apply(stats, X[te])
    return X[tr], X[te]


def cross_validate(algorithm, dataset, seed=0, runs=10, class_weights=None,
                   normalize="per-fold", clip_tau=False, keep_traces=False):
    """``runs`` repetitions of stratified 2-fold CV; returns an :class:`AccuracyReport`.

    ``stddev`` is the sample standard deviation (ddof=1) of the
    ``2 * runs`` fold accuracies.
    """
    if normalize not in NORMALIZE_MODES:
        raise ValueError(f"normalize must be one of {NORMALIZE_MODES}, got {normalize!r}")
    if normalize == "global":
        stats = zscore_fit(dataset.X)
        dataset = Dataset(dataset.name, zscore_apply(stats, dataset.X), dataset.y,
                          dict(dataset.meta))
    cw = class_weights or UNIT_WEIGHTS
    if algorithm != BATCH_TER and not Variant.parse(algorithm).is_weighted:
        cw = UNIT_WEIGHTS
    accs, baccs, cpus, traces = [], [], [], []
    for split in make_folds(dataset, seed, runs):
        Xtr, Xte = _normalized_folds(dataset, normalize, split)
        res = evaluate_fold(algorithm, Xtr, dataset.y[split.train_indices], Xte,
                            dataset.y[split.test_indices], cw, clip_tau)
        accs.append(res.accuracy)
        cm = res.confusion
        baccs.append(100.0 * balanced_accuracy(cm) if cm.n_neg and cm.n_pos else float("nan"))
        cpus.append(res.cpu_seconds)
        if keep_traces:
            traces.append((split.run_index, split.fold_index, res.trace))
    name = algorithm if algorithm == BATCH_TER else Variant.parse(algorithm).value
    return AccuracyReport(
        algorithm=name,
        dataset=dataset.name,
        per_run_accuracy=accs,
        mean=float(np.mean(accs)),
        stddev=float(np.std(accs, ddof=1)) if len(accs) > 1 else 0.0,
        mean_cpu_seconds=float(np.mean(cpus)),
        per_run_balanced_accuracy=baccs,
        class_weights=cw,
        traces=traces,
    )


# ---------------------------------------------------------------------------
# class-weight sweep

def needed_weight(ratio):
    """'N' when positives are at least as many as negatives, else 'P'."""
    return "N" if ratio >= 1 else "P"


@dataclass
class SweepResult:
    dataset: str
    algorithm: str
    best_score: float
    best_weights: ClassWeights
    best_weight: str
    needed_weight: str
    scores: list

    @property
    def match(self):
        return self.best_weight == self.needed_weight


def sweep_weights(algorithm, dataset, grid=DEFAULT_GRID, metric="accuracy", **cv_kwargs):
    """Evaluate ``(g, 1)`` and ``(1, g)`` for every ``g`` in ``grid``.

    The winner maximizes the mean of ``metric`` ("accuracy" or
    "balanced"). Exact ties prefer the alpha_pos side ('P'), then the
    smaller ``g``. ``best_weight`` is 'N' if the winner came from varying
    alpha_neg, otherwise 'P'.
    """
    variant = Variant.parse(algorithm)
    if not variant.is_weighted:
        raise ValueError(f"weight sweep needs a weighted variant, got {variant.value}")
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    if metric not in ("accuracy", "balanced"):
        raise ValueError(f"metric must be 'accuracy' or 'balanced', got {metric!r}")
    scores = []
    for g in grid:
        for side, cw in (("N", ClassWeights(g, 1.0)), ("P", ClassWeights(1.0, g))):
            rep = cross_validate(variant, dataset, class_weights=cw, **cv_kwargs)
            score = rep.mean if metric == "accuracy" else rep.mean_balanced_accuracy
            scores.append((side, g, score, cw))
    best = min(scores, key=lambda s: (-s[2], s[0] != "P", s[1]))
    return SweepResult(
        dataset=dataset.name,
        algorithm=variant.value,
        best_score=best[2],
        best_weights=best[3],
        best_weight=best[0],
        needed_weight=needed_weight(dataset.imbalance_ratio),
        scores=[(s, g, v) for s, g, v, _ in scores],
    )
