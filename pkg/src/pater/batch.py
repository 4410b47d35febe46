"""Closed-form batch TER solution.

Minimizing the class-normalized squared error

    1/(2 n-) sum_neg (-1 - w.x)^2 + 1/(2 n+) sum_pos (1 - w.x)^2

is a weighted least-squares problem with normal equations
``X^T W X w = X^T W y``, where ``W`` is diagonal with ``1/n-`` on
negative rows and ``1/n+`` on positive rows.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, InvalidLabelError, SingularDesignError


@dataclass(frozen=True)
class BatchDesign:
    """Stacked design: negative rows first, then positive rows."""

    samples: np.ndarray
    labels: np.ndarray
    class_weights_diag: np.ndarray

    @classmethod
    def from_samples(cls, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise DimensionError(f"design shape {X.shape} does not match {y.shape[0]} labels")
        if not np.all((y == 1) | (y == -1)):
            raise InvalidLabelError("labels must be -1 or +1")
        neg = y == -1
        pos = ~neg
        n_neg, n_pos = int(neg.sum()), int(pos.sum())
        if n_neg == 0 or n_pos == 0:
            raise ValueError(
                f"batch TER needs both classes (got n-={n_neg}, n+={n_pos})"
            )
        samples = np.vstack([X[neg], X[pos]])
        labels = np.concatenate([-np.ones(n_neg), np.ones(n_pos)])
        diag = np.concatenate([np.full(n_neg, 1.0 / n_neg), np.full(n_pos, 1.0 / n_pos)])
        return cls(samples, labels, diag)

    @property
    def dim(self):
        return self.samples.shape[1]

    def normal_equations(self):
        """Return ``(X^T W X, X^T W y)``."""
        XW = self.samples * self.class_weights_diag[:, None]
        return XW.T @ self.samples, XW.T @ self.labels


def ter_closed_form(design, ridge=0.0):
    """Solve ``(X^T W X + ridge I) w = X^T W y``.

    Parameters
    ----------
    design : BatchDesign or tuple of (X, y)
    ridge : float, default 0
        Non-negative Tikhonov term. With ``ridge=0`` a rank-deficient
        normal matrix raises :class:`SingularDesignError`.

    Returns
    -------
    ndarray of shape (d,)
    """
    if not isinstance(design, BatchDesign):
        design = BatchDesign.from_samples(*design)
    if ridge < 0 or not np.isfinite(ridge):
        raise ValueError(f"ridge must be non-negative and finite, got {ridge}")
    A, b = design.normal_equations()
    d = design.dim
    if ridge > 0:
        A = A + ridge * np.eye(d)
    else:
        rank = np.linalg.matrix_rank(A)
        if rank < d:
            raise SingularDesignError(int(rank), d)
    try:
        return scipy.linalg.solve(A, b, assume_a="gen")
    except np.linalg.LinAlgError as exc:
        raise SingularDesignError(int(np.linalg.matrix_rank(A)), d) from exc


def normal_residual(design, w, ridge=0.0):
    """Relative residual ``||A w - b|| / (||A|| ||w|| + ||b||)``."""
    if not isinstance(design, BatchDesign):
        design = BatchDesign.from_samples(*design)
    A, b = design.normal_equations()
    A = A + ridge * np.eye(design.dim)
    r = A @ w - b
    scale = np.linalg.norm(A, 2) * np.linalg.norm(w) + np.linalg.norm(b)
    return float(np.linalg.norm(r) / scale) if scale > 0 else float(np.linalg.norm(r))


class BatchTER:
    """Fit/predict wrapper used as a reference classifier."""

    def __init__(self, ridge=0.0):
        self.ridge = ridge
        self.coef_ = None

    def fit(self, X, y):
        self.coef_ = ter_closed_form(BatchDesign.from_samples(X, y), self.ridge)
        return self

    def predict(self, X):
        return np.where(np.asarray(X, dtype=np.float64) @ self.coef_ >= 0.0, 1, -1)
