"""First-order online linear learners for binary classification.

Six update rules share one state container and one prequential step:

* ``perceptron``  mistake-driven additive update
* ``pa``          passive-aggressive hinge correction
* ``pater1``      PA-style total-error-rate minimizer, instantaneous loss
* ``pater2``      same, with recursively accumulated class-mean losses
* ``wpater1``/``wpater2``  class-weighted versions of the two above

The TER family keeps constant-memory class aggregates (counts, running
class means of the samples, running class means of the hinge-style
losses) and moves the weights along the weighted difference of the
class means.

All arithmetic is float64. States are mutated in place; every update
returns an :class:`UpdateRecord` describing the step.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, InvalidLabelError, NumericalFault

#: ``||z_t||^2`` below this is treated as "no separating direction".
ZNORM_EPS = 1e-12


class Variant(str, enum.Enum):
    PERCEPTRON = "perceptron"
    PA = "pa"
    PATER_I = "pater1"
    PATER_II = "pater2"
    WPATER_I = "wpater1"
    WPATER_II = "wpater2"

    @property
    def is_ter(self):
        return self in _TER_VARIANTS

    @property
    def is_weighted(self):
        return self in (Variant.WPATER_I, Variant.WPATER_II)

    @property
    def accumulated(self):
        """True for the ``-II`` variants, whose step uses k-, k+."""
        return self in (Variant.PATER_II, Variant.WPATER_II)

    @property
    def display_name(self):
        return _DISPLAY[self]

    @classmethod
    def parse(cls, name):
        """Resolve a variant from its value or a common alias.

        Raises
        ------
        ValueError
            With the list of valid names if ``name`` is unknown.
        """
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        if key in _ALIASES:
            return _ALIASES[key]
        valid = ", ".join(v.value for v in cls)
        raise ValueError(f"unknown algorithm {name!r}; valid variants: {valid}")


_TER_VARIANTS = frozenset(
    {Variant.PATER_I, Variant.PATER_II, Variant.WPATER_I, Variant.WPATER_II}
)
_DISPLAY = {
    Variant.PERCEPTRON: "PE",
    Variant.PA: "PA",
    Variant.PATER_I: "PATER-I",
    Variant.PATER_II: "PATER-II",
    Variant.WPATER_I: "wPATER-I",
    Variant.WPATER_II: "wPATER-II",
}
_ALIASES = {v.value: v for v in Variant}
_ALIASES.update({d.lower(): v for v, d in _DISPLAY.items()})
_ALIASES.update({"pater-1": Variant.PATER_I, "pater-2": Variant.PATER_II,
                 "wpater-1": Variant.WPATER_I, "wpater-2": Variant.WPATER_II})


@dataclass(frozen=True)
class ClassWeights:
    """Positive weights scaling the false-positive and false-negative terms."""

    alpha_neg: float = 1.0
    alpha_pos: float = 1.0

    def __post_init__(self):
        for name in ("alpha_neg", "alpha_pos"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite real, got {value!r}")

    @property
    def is_unit(self):
        return self.alpha_neg == 1.0 and self.alpha_pos == 1.0


UNIT_WEIGHTS = ClassWeights()


@dataclass
class ClassAggregates:
    """Per-class running statistics of the stream.

    ``z_neg``/``z_pos`` are the class means of the samples seen so far,
    ``k_neg``/``k_pos`` the class means of ``1 + w.x`` (negatives) and
    ``1 - w.x`` (positives), each evaluated with the weights that were
    current when the sample arrived.
    """

    n_neg: int
    n_pos: int
    z_neg: np.ndarray
    z_pos: np.ndarray
    k_neg: float = 0.0
    k_pos: float = 0.0

    @classmethod
    def zeros(cls, dim):
        return cls(0, 0, np.zeros(dim), np.zeros(dim))

    def copy(self):
        return ClassAggregates(self.n_neg, self.n_pos, self.z_neg.copy(),
                               self.z_pos.copy(), self.k_neg, self.k_pos)


@dataclass(frozen=True)
class UpdateRecord:
    tau: float
    loss: float
    weight_delta_norm: float
    skipped: bool


@dataclass
class LearnerState:
    """Weights, class aggregates and configuration of one online learner."""

    weights: np.ndarray
    aggregates: ClassAggregates
    variant: Variant
    class_weights: ClassWeights = UNIT_WEIGHTS
    clip_tau: bool = False
    step_count: int = 0

    @classmethod
    def new(cls, variant, dim, class_weights=None, clip_tau=False):
        """Zero-initialized state.

        Unweighted variants only accept unit class weights.
        """
        variant = Variant.parse(variant)
        if dim < 1:
            raise DimensionError(f"dimension must be positive, got {dim}")
        if class_weights is None:
            class_weights = UNIT_WEIGHTS
        if not variant.is_weighted and not class_weights.is_unit:
            raise ValueError(f"{variant.value} is unweighted; class weights must be (1, 1)")
        return cls(np.zeros(dim), ClassAggregates.zeros(dim), variant,
                   class_weights, bool(clip_tau))

    @property
    def dim(self):
        return self.weights.shape[0]

    def copy(self):
        return LearnerState(self.weights.copy(), self.aggregates.copy(), self.variant,
                            self.class_weights, self.clip_tau, self.step_count)


# ---------------------------------------------------------------------------
# validation helpers

def _check_x(x, dim):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != dim:
        raise DimensionError(f"expected a feature vector of dimension {dim}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("feature vector contains non-finite entries")
    return x


def _check_y(y):
    if y == 1:
        return 1
    if y == -1:
        return -1
    raise InvalidLabelError(f"label must be -1 or +1, got {y!r}")


def _as_w(w):
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1:
        raise DimensionError(f"weight vector must be 1-D, got shape {w.shape}")
    return w


# ---------------------------------------------------------------------------
# losses

def predict(w, x):
    """Return +1 if ``w.x >= 0`` else -1 (ties go to +1)."""
    w = _as_w(w)
    x = _check_x(x, w.shape[0])
    return 1 if float(w @ x) >= 0.0 else -1


def predict_many(w, X):
    """Vectorized :func:`predict` over the rows of ``X``."""
    w = _as_w(w)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != w.shape[0]:
        raise DimensionError(f"expected an (n, {w.shape[0]}) matrix, got shape {X.shape}")
    return np.where(X @ w >= 0.0, 1, -1)


def hinge_loss_pa(w, x, y):
    w = _as_w(w)
    x = _check_x(x, w.shape[0])
    return max(0.0, 1.0 - _check_y(y) * float(w @ x))


def hinge_loss_fp(w, x_neg):
    """Hinge surrogate of a false positive for a negative sample."""
    w = _as_w(w)
    x = _check_x(x_neg, w.shape[0])
    return max(0.0, 1.0 + float(w @ x))


def hinge_loss_fn(w, x_pos):
    """Hinge surrogate of a false negative for a positive sample."""
    w = _as_w(w)
    x = _check_x(x_pos, w.shape[0])
    return max(0.0, 1.0 - float(w @ x))


def ter_loss(w, X, y, class_weights=UNIT_WEIGHTS):
    """Class-normalized hinge TER of ``w`` on a labeled collection.

    ``alpha_neg * mean(fp hinge over negatives) + alpha_pos * mean(fn hinge
    over positives)``. A class absent from the collection contributes 0.
    """
    w = _as_w(w)
    X = np.asarray(X, dtype=np.float64).reshape(-1, w.shape[0])
    y = np.asarray(y).reshape(-1)
    if X.shape[0] != y.shape[0]:
        raise DimensionError(f"{X.shape[0]} samples but {y.shape[0]} labels")
    if y.size and not np.all((y == 1) | (y == -1)):
        raise InvalidLabelError("labels must be -1 or +1")
    scores = X @ w
    total = 0.0
    neg = scores[y == -1]
    pos = scores[y == 1]
    if neg.size:
        total += class_weights.alpha_neg * float(np.maximum(0.0, 1.0 + neg).sum()) / neg.size
    if pos.size:
        total += class_weights.alpha_pos * float(np.maximum(0.0, 1.0 - pos).sum()) / pos.size
    return total


# ---------------------------------------------------------------------------
# update rules

def perceptron_update(state, x, y):
    x = _check_x(x, state.dim)
    y = _check_y(y)
    return _perceptron(state, x, y)


def _perceptron(state, x, y):
    w = state.weights
    mistake = (1 if float(w @ x) >= 0.0 else -1) != y
    state.step_count += 1
    if not mistake:
        return UpdateRecord(0.0, 0.0, 0.0, True)
    w += y * x
    return UpdateRecord(1.0, 1.0, float(np.sqrt(x @ x)), False)


def pa_update(state, x, y):
    x = _check_x(x, state.dim)
    y = _check_y(y)
    return _pa(state, x, y)


def _pa(state, x, y):
    w = state.weights
    loss = 1.0 - y * float(w @ x)
    if loss <= 0.0:
        state.step_count += 1
        return UpdateRecord(0.0, 0.0, 0.0, True)
    sq = float(x @ x)
    if sq == 0.0:
        # zero vector with positive loss: no direction to move in
        state.step_count += 1
        return UpdateRecord(0.0, loss, 0.0, True)
    tau = loss / sq
    if not math.isfinite(tau):
        raise NumericalFault(f"PA step size is {tau} at step {state.step_count + 1}")
    state.step_count += 1
    w += (tau * y) * x
    return UpdateRecord(tau, loss, tau * math.sqrt(sq), False)


def aggregate_step(aggregates, x, y, w_current):
    """Advance the class aggregates by one sample, in place.

    ``w_current`` must be the weight vector *before* this step's update;
    it enters the running loss means ``k_neg``/``k_pos``. The class not
    selected by ``y`` is left untouched. Returns ``w_current . x``.
    """
    dot = float(w_current @ x)
    a = aggregates
    if y == 1:
        n_prev = a.n_pos
        n = n_prev + 1
        r = n_prev / n
        a.z_pos *= r
        a.z_pos += x / n
        a.k_pos = r * a.k_pos + (1.0 - dot) / n
        a.n_pos = n
    else:
        n_prev = a.n_neg
        n = n_prev + 1
        r = n_prev / n
        a.z_neg *= r
        a.z_neg += x / n
        a.k_neg = r * a.k_neg + (1.0 + dot) / n
        a.n_neg = n
    return dot


def pater_tau(state, y, dot):
    """Step size of the TER family for an already-aggregated sample.

    Parameters
    ----------
    state : LearnerState
        Aggregates must already include the current sample.
    y : int
        Label of the current sample.
    dot : float
        ``w_{t-1} . x_t`` with the pre-update weights.

    Returns
    -------
    tau : float
        May be negative unless ``state.clip_tau`` is set. Zero when the
        step is skipped.
    z_t : ndarray
        ``alpha_pos * z_pos - alpha_neg * z_neg``.
    skipped : bool
        True when ``||z_t||^2 < ZNORM_EPS``.
    """
    a = state.aggregates
    cw = state.class_weights
    z_t = cw.alpha_pos * a.z_pos - cw.alpha_neg * a.z_neg
    sq = float(z_t @ z_t)
    if sq < ZNORM_EPS:
        return 0.0, z_t, True
    if state.variant.accumulated:
        num = cw.alpha_neg * a.k_neg + cw.alpha_pos * a.k_pos
    elif y == 1:
        num = cw.alpha_pos / a.n_pos * (1.0 - dot)
    else:
        num = cw.alpha_neg / a.n_neg * (1.0 + dot)
    tau = num / sq
    if state.clip_tau and tau < 0.0:
        tau = 0.0
    return tau, z_t, False


def apply_update(state, tau, z_t):
    """``w <- w + tau * z_t`` and advance the step counter."""
    if not math.isfinite(tau):
        raise NumericalFault(
            f"non-finite step size tau={tau} at step {state.step_count + 1}; "
            f"n-={state.aggregates.n_neg}, n+={state.aggregates.n_pos}, "
            f"||w||={float(np.linalg.norm(state.weights))}"
        )
    if z_t.shape != state.weights.shape:
        raise DimensionError(f"direction has shape {z_t.shape}, weights {state.weights.shape}")
    if tau != 0.0:
        state.weights += tau * z_t
    state.step_count += 1
    return state


def pater_update(state, x, y):
    x = _check_x(x, state.dim)
    y = _check_y(y)
    return _pater(state, x, y)


def _pater(state, x, y):
    dot = aggregate_step(state.aggregates, x, y, state.weights)
    loss = max(0.0, 1.0 - dot) if y == 1 else max(0.0, 1.0 + dot)
    tau, z_t, skipped = pater_tau(state, y, dot)
    apply_update(state, tau, z_t)
    if skipped or tau == 0.0:
        return UpdateRecord(tau, loss, 0.0, skipped)
    return UpdateRecord(tau, loss, abs(tau) * float(np.sqrt(z_t @ z_t)), False)


_DISPATCH = {
    Variant.PERCEPTRON: _perceptron,
    Variant.PA: _pa,
    Variant.PATER_I: _pater,
    Variant.PATER_II: _pater,
    Variant.WPATER_I: _pater,
    Variant.WPATER_II: _pater,
}


def online_step(state, x, y):
    """One prequential step: predict with the current weights, then update.

    Returns
    -------
    record : UpdateRecord
    predicted : int
        The label predicted *before* the update.
    """
    x = _check_x(x, state.dim)
    y = _check_y(y)
    predicted = 1 if float(state.weights @ x) >= 0.0 else -1
    record = _DISPATCH[state.variant](state, x, y)
    return record, predicted


def run_stream(state, X, y, collect_records=False):
    """Feed every row of ``X`` through :func:`online_step`.

    Returns the array of prequential predictions, and the list of
    update records when ``collect_records`` is set.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[1] != state.dim:
        raise DimensionError(f"expected an (n, {state.dim}) matrix, got shape {X.shape}")
    if X.shape[0] != y.shape[0]:
        raise DimensionError(f"{X.shape[0]} samples but {y.shape[0]} labels")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature matrix contains non-finite entries")
    if not np.all((y == 1) | (y == -1)):
        raise InvalidLabelError("labels must be -1 or +1")
    update = _DISPATCH[state.variant]
    w = state.weights
    preds = np.empty(X.shape[0], dtype=np.int8)
    records = [] if collect_records else None
    for i in range(X.shape[0]):
        x = X[i]
        yi = int(y[i])
        preds[i] = 1 if float(w @ x) >= 0.0 else -1
        rec = update(state, x, yi)
        if records is not None:
            records.append(rec)
    if collect_records:
        return preds, records
    return preds


@dataclass
class OnlineLearner:
    """Estimator-style wrapper around :class:`LearnerState`.

    >>> clf = OnlineLearner("wpater1", class_weights=ClassWeights(0.5, 1.0))
    >>> clf.partial_fit([[1.0, 0.0], [0.0, 1.0]], [1, -1]).predict([[2.0, 0.0]])
    array([1])
    """

    variant: Variant | str = Variant.PA
    class_weights: ClassWeights | None = None
    clip_tau: bool = False
    state: LearnerState | None = field(default=None, repr=False)

    def partial_fit(self, X, y):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self.state is None:
            self.state = LearnerState.new(self.variant, X.shape[1], self.class_weights,
                                          self.clip_tau)
        run_stream(self.state, X, np.asarray(y))
        return self

    def fit(self, X, y):
        self.state = None
        return self.partial_fit(X, y)

    @property
    def coef_(self):
        return None if self.state is None else self.state.weights

    def decision_function(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.state.dim:
            raise DimensionError(f"expected {self.state.dim} features, got {X.shape[1]}")
        return X @ self.state.weights

    def predict(self, X):
        return predict_many(self.state.weights, np.atleast_2d(X))
