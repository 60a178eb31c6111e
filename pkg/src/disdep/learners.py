"""Trainable linear models over sparse feature vectors.

Two learners cover the parsers' needs:

* ``train_multiclass`` fits one-vs-rest linear classifiers by
  minimizing the L2-regularized hinge loss in the primal,

      F(w) = (lam/2) ||w||^2 + (1/N) sum_i max(0, 1 - y_i w.x_i),

  with lam = 1/(C*N) and decaying step 1/(lam*t) (epoch-based
  subgradient descent, deterministic given the seed).  A bias term is
  carried per class and regularized like any other weight.

* ``AveragedPerceptronModel`` holds a single weight vector whose
  averaged form is the mean of all post-update snapshots, maintained
  lazily so updates stay sparse.
"""

from dataclasses import dataclass, field

import numpy as np

from .features import FeatureVector


class DegenerateError(ValueError):
    """Training input admits no meaningful model (single class)."""


def hinge_objective(w, X, y, lam):
    """Regularized hinge objective over dense data, the quantity the
    trainer descends (bias folded into X by the caller if wanted)."""
    margins = y * (X @ w)
    return 0.5 * lam * float(w @ w) + float(np.maximum(0.0, 1.0 - margins).mean())


def hinge_subgradient(w, X, y, lam):
    """A subgradient of hinge_objective at w."""
    violated = y * (X @ w) < 1.0
    g = lam * w.astype(float)
    if violated.any():
        g -= (X[violated] * y[violated, None]).sum(axis=0) / len(y)
    return g


@dataclass
class LinearMulticlassModel:
    """One-vs-rest linear scorer: per-class weights plus bias."""

    classes: tuple
    weights: np.ndarray  # (n_classes, dim)
    bias: np.ndarray  # (n_classes,)
    C: float = 1.0

    @property
    def dim(self):
        return self.weights.shape[1]

    def class_index(self, label):
        return self.classes.index(label)

    def scores(self, fv):
        """Raw per-class scores for an interned feature vector."""
        if not fv:
            return self.bias.copy()
        ids = np.fromiter(sorted(fv), dtype=np.int64, count=len(fv))
        ids = ids[ids < self.dim]
        if len(ids) == 0:
            return self.bias.copy()
        vals = np.array([fv[i] for i in ids], dtype=float)
        return self.weights[:, ids] @ vals + self.bias


@dataclass
class Prediction:
    label: object
    margin: float
    scores: np.ndarray


def _as_arrays(fv):
    ids = np.fromiter(sorted(fv), dtype=np.int64, count=len(fv))
    vals = np.array([fv[i] for i in ids], dtype=float)
    return ids, vals


def train_multiclass(examples, C=1.0, epochs=20, seed=0, classes=None, dim=None):
    """Fit a LinearMulticlassModel on (FeatureVector, label) pairs.

    All classes share one pass over the data per epoch (equivalent to
    independent one-vs-rest runs with a common step schedule), with the
    instance order reshuffled each epoch from the seed.
    """
    examples = list(examples)
    if not examples:
        raise DegenerateError("no training examples")
    labels = [label for _, label in examples]
    if classes is None:
        classes = tuple(sorted(set(labels)))
    else:
        classes = tuple(classes)
    if len(set(labels)) < 2:
        raise DegenerateError("need at least two distinct labels, got %r" % set(labels))
    index_of = {label: i for i, label in enumerate(classes)}
    y_idx = np.array([index_of[label] for label in labels], dtype=np.int64)

    n = len(examples)
    lam = 1.0 / (C * n)
    if dim is None:
        dim = 1 + max((max(fv) for fv, _ in examples if fv), default=0)
    sparse_rows = [_as_arrays(fv) for fv, _ in examples]

    n_classes = len(classes)
    V = np.zeros((n_classes, dim))
    vbias = np.zeros(n_classes)
    a = 1.0  # W = a * V, so the shrink step stays O(1)
    t = 0
    signs = np.full(n_classes, -1.0)
    rng = np.random.default_rng(seed)

    for _epoch in range(epochs):
        order = rng.permutation(n)
        for i in order:
            t += 1
            eta = 1.0 / (lam * t)
            if t > 1:
                a *= 1.0 - 1.0 / t
            ids, vals = sparse_rows[i]
            scores = a * (V[:, ids] @ vals + vbias) if len(ids) else a * vbias
            signs[:] = -1.0
            signs[y_idx[i]] = 1.0
            violated = np.nonzero(signs * scores < 1.0)[0]
            if len(violated):
                step = (eta / a) * signs[violated]
                if len(ids):
                    V[violated[:, None], ids[None, :]] += step[:, None] * vals[None, :]
                vbias[violated] += step
            if a < 1e-100:
                V *= a
                vbias *= a
                a = 1.0

    return LinearMulticlassModel(
        classes=classes, weights=a * V, bias=a * vbias, C=C
    )


def predict_multiclass(model, fv):
    """Highest-scoring class; ties break to the lowest class index.
    The full score vector rides along for constrained decoding."""
    scores = model.scores(fv)
    best = int(np.argmax(scores))
    if len(scores) > 1:
        margin = float(scores[best] - np.max(np.delete(scores, best)))
    else:
        margin = float(scores[best])
    return Prediction(label=model.classes[best], margin=margin, scores=scores)


@dataclass
class AveragedPerceptronModel:
    """Perceptron weights together with lazily maintained averages.

    The averaged vector equals mean(w_1, ..., w_T) over the weight
    snapshots after each of the T updates.  Bookkeeping keeps the
    running sum of t * delta_t so each update stays sparse.
    """

    weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    update_count: int = 0
    _accum: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def ensure_dim(self, dim):
        if dim > len(self.weights):
            pad = dim - len(self.weights)
            self.weights = np.concatenate([self.weights, np.zeros(pad)])
            self._accum = np.concatenate([self._accum, np.zeros(pad)])

    @property
    def averaged_weights(self):
        if self.update_count == 0:
            return np.zeros_like(self.weights)
        T = self.update_count
        return ((T + 1) * self.weights - self._accum) / T

    def score(self, fv, averaged=False):
        w = self.averaged_weights if averaged else self.weights
        return float(sum(w[i] * v for i, v in sorted(fv.items()) if i < len(w)))


def perceptron_update(model, gold_fv, pred_fv, learning_rate=1.0):
    """weights += learning_rate * (gold_fv - pred_fv); the averaging
    step advances whether or not the difference is zero."""
    t = model.update_count + 1
    diff = FeatureVector(gold_fv).minus(pred_fv)
    if diff:
        model.ensure_dim(max(diff) + 1)
        for idx, value in diff.items():
            delta = learning_rate * value
            model.weights[idx] += delta
            model._accum[idx] += t * delta
    model.update_count = t
