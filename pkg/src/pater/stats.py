"""Friedman test with Nemenyi critical difference over per-dataset ranks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as st

from .exceptions import ProtocolError

# Studentized range statistic divided by sqrt(2), infinite degrees of
# freedom, for k = 2..10 compared algorithms.
NEMENYI_Q = {
    0.05: (1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164),
    0.10: (1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920),
}


def nemenyi_q(k, alpha=0.05):
    if alpha not in NEMENYI_Q:
        raise ValueError(f"alpha must be one of {sorted(NEMENYI_Q)}, got {alpha}")
    if not 2 <= k <= 10:
        raise ValueError(f"tabulated q values cover 2 <= k <= 10 algorithms, got k={k}")
    return NEMENYI_Q[alpha][k - 2]


def critical_difference(k, n_datasets, alpha=0.05):
    """``q_alpha * sqrt(k (k + 1) / (6 N))``."""
    return nemenyi_q(k, alpha) * math.sqrt(k * (k + 1) / (6.0 * n_datasets))


def _as_grid(scores):
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2:
        raise ProtocolError(f"scores must be an (N datasets, k algorithms) grid, got {scores.shape}")
    if np.isnan(scores).any():
        rows, cols = np.nonzero(np.isnan(scores))
        cells = ", ".join(f"(dataset {r}, algorithm {c})" for r, c in zip(rows, cols))
        raise ProtocolError(f"missing cells: {cells}")
    return scores


def rank_rows(scores, higher_is_better=True):
    """Per-dataset ranks, 1 = best, ties share the average rank."""
    scores = _as_grid(scores)
    keyed = -scores if higher_is_better else scores
    return np.vstack([st.rankdata(row, method="average") for row in keyed])


@dataclass
class RankTable:
    algorithms: list
    datasets: list
    ranks: np.ndarray
    average_ranks: np.ndarray

    def average(self, algorithm):
        return float(self.average_ranks[self.algorithms.index(algorithm)])


def rank_table(scores, algorithms=None, datasets=None, higher_is_better=True):
    ranks = rank_rows(scores, higher_is_better)
    n, k = ranks.shape
    algorithms = list(algorithms) if algorithms is not None else [f"A{j}" for j in range(k)]
    datasets = list(datasets) if datasets is not None else [f"D{i}" for i in range(n)]
    return RankTable(algorithms, datasets, ranks, ranks.mean(axis=0))


def average_ranks_from_table(ranks):
    """Column means of an already-ranked (N, k) table."""
    return _as_grid(ranks).mean(axis=0)


@dataclass
class SignificanceResult:
    algorithms: list
    mean_ranks: dict
    friedman_statistic: float
    p_value: float
    iman_davenport: float
    critical_difference: float
    groups: list

    def same_group(self, a, b):
        return any(a in g and b in g for g in self.groups)


def cd_groups(mean_ranks, cd):
    """Maximal runs of rank-sorted algorithms whose spread is <= ``cd``.

    Two algorithms share a group iff their mean ranks differ by at most
    ``cd``.
    """
    order = sorted(mean_ranks, key=lambda a: (mean_ranks[a], a))
    groups = []
    last_end = -1
    for i, a in enumerate(order):
        j = i
        while j + 1 < len(order) and mean_ranks[order[j + 1]] - mean_ranks[a] <= cd:
            j += 1
        if j > last_end:
            groups.append(tuple(order[i:j + 1]))
            last_end = j
    return groups


def friedman_nemenyi(scores, algorithms=None, alpha=0.05, higher_is_better=True):
    """Friedman chi-square on per-dataset ranks plus Nemenyi CD grouping.

    Parameters
    ----------
    scores : array-like, shape (N datasets, k algorithms)
    higher_is_better : bool
        True for accuracies, False for CPU times.
    """
    scores = _as_grid(scores)
    n, k = scores.shape
    if k < 2 or n < 2:
        raise ProtocolError(f"need k >= 2 algorithms and N >= 2 datasets, got k={k}, N={n}")
    algorithms = list(algorithms) if algorithms is not None else [f"A{j}" for j in range(k)]
    if len(algorithms) != k:
        raise ValueError(f"{len(algorithms)} names for {k} algorithms")
    R = rank_rows(scores, higher_is_better).mean(axis=0)
    chi2 = 12.0 * n / (k * (k + 1)) * (float(np.sum(R ** 2)) - k * (k + 1) ** 2 / 4.0)
    chi2 = max(chi2, 0.0)
    p = float(st.chi2.sf(chi2, k - 1))
    denom = n * (k - 1) - chi2
    ff = (n - 1) * chi2 / denom if denom > 0 else math.inf
    cd = critical_difference(k, n, alpha)
    mean_ranks = {a: float(r) for a, r in zip(algorithms, R)}
    return SignificanceResult(algorithms, mean_ranks, chi2, p, ff, cd,
                              cd_groups(mean_ranks, cd))
