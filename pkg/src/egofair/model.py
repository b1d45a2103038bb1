"""Dagging ensemble over a deterministic base learner with soft voting.

Dagging trains one base learner per disjoint stratified fold of the training
set and averages the members' probability scores. The bundled base learner
is a full-batch L2-regularized logistic regression; anything exposing
``fit(X, y)`` and ``scores(X) -> [0, 1]`` (deterministic given its seed) can
be plugged in through the factory argument.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .sampling import Dataset

MODEL_MAGIC = "egofair-dagging"
MODEL_VERSION = 1

STD_FLOOR = 1e-9


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


class LogisticLearner:
    """Full-batch gradient-descent logistic regression.

    Deterministic: weights start at zero, so the seed only exists to honor
    the base-learner contract.
    """

    def __init__(self, epochs: int = 200, learning_rate: float = 0.1, l2: float = 1e-3, seed: int = 0):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.l2 = l2
        self.seed = seed
        self.weights: np.ndarray | None = None
        self.bias = 0.0

    def fit(self, x: np.ndarray, y: np.ndarray) -> None:
        n, d = x.shape
        w = np.zeros(d)
        b = 0.0
        for _ in range(self.epochs):
            p = _sigmoid(x @ w + b)
            err = p - y
            grad_w = x.T @ err / n + self.l2 * w
            grad_b = float(err.mean())
            w -= self.learning_rate * grad_w
            b -= self.learning_rate * grad_b
        self.weights = w
        self.bias = b

    def scores(self, x: np.ndarray) -> np.ndarray:
        if self.weights is None:
            raise ValueError("learner is not fitted")
        return _sigmoid(x @ self.weights + self.bias)


BaseLearnerFactory = Callable[[int], LogisticLearner]


@dataclass
class DaggingEnsemble:
    members: list
    fold_count: int
    feature_mean: np.ndarray
    feature_std: np.ndarray

    @property
    def n_features(self) -> int:
        return int(self.feature_mean.shape[0])


def _default_factory(seed: int) -> LogisticLearner:
    return LogisticLearner(seed=seed)


def train_dagging(
    train: Dataset,
    fold_count: int = 10,
    seed: int = 0,
    base_learner_factory: BaseLearnerFactory = _default_factory,
) -> DaggingEnsemble:
    """Standardize, shuffle, deal stratified disjoint folds, fit one member
    per fold.

    Stratified dealing guarantees both classes in every fold, which requires
    fold_count <= the minority class count.
    """
    if fold_count < 1:
        raise ValueError(f"fold_count must be >= 1, got {fold_count}")
    x = train.feature_matrix()
    y = train.labels().astype(np.float64)
    if x.shape[0] == 0:
        raise ValueError("empty training set")

    minority = int(min((y == 1).sum(), (y == 0).sum()))
    if fold_count > minority:
        raise ValueError(
            f"fold_count {fold_count} exceeds the minority class count {minority}; "
            f"use a smaller fold_count"
        )

    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std < STD_FLOOR, STD_FLOOR, std)
    xs = (x - mean) / std

    rng = np.random.default_rng(seed)
    pos = rng.permutation(np.flatnonzero(y == 1))
    neg = rng.permutation(np.flatnonzero(y == 0))
    folds: list[list[int]] = [[] for _ in range(fold_count)]
    for pool in (pos, neg):
        for i, idx in enumerate(pool):
            folds[i % fold_count].append(int(idx))
    member_seeds = [int(s) for s in rng.integers(0, 2**63, size=fold_count)]

    members = []
    for fold, member_seed in zip(folds, member_seeds):
        learner = base_learner_factory(member_seed)
        learner.fit(xs[fold], y[fold])
        members.append(learner)
    return DaggingEnsemble(
        members=members,
        fold_count=fold_count,
        feature_mean=mean,
        feature_std=std,
    )


def _as_matrix(instances) -> np.ndarray:
    if isinstance(instances, np.ndarray):
        return np.asarray(instances, dtype=np.float64)
    if isinstance(instances, Dataset):
        return instances.feature_matrix()
    return np.array([i.model_features for i in instances], dtype=np.float64)


def predict_scores(ens: DaggingEnsemble, instances) -> np.ndarray:
    """Soft vote: the arithmetic mean of member scores on the standardized
    vectors (test vectors are standardized with training statistics only).
    """
    x = _as_matrix(instances)
    if x.ndim != 2 or x.shape[1] != ens.n_features:
        raise ValueError(
            f"feature dimensionality mismatch: model expects {ens.n_features}, "
            f"got {x.shape[1] if x.ndim == 2 else x.shape}"
        )
    xs = (x - ens.feature_mean) / ens.feature_std
    member_scores = np.stack([m.scores(xs) for m in ens.members])
    return member_scores.mean(axis=0)


def threshold_labels(scores, threshold: float = 0.5) -> np.ndarray:
    """Hard labels: 1 iff score >= threshold (ties classify positive)."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    return (np.asarray(scores, dtype=np.float64) >= threshold).astype(np.int64)


def save_model(ens: DaggingEnsemble, path: str | Path) -> Path:
    """Serialize the ensemble (bundled logistic members only) as JSON with a
    magic header and version integer.
    """
    members = []
    for m in ens.members:
        if not isinstance(m, LogisticLearner):
            raise ValueError(f"cannot serialize member of type {type(m).__name__}")
        members.append(
            {
                "weights": [float(v) for v in m.weights],
                "bias": float(m.bias),
                "epochs": m.epochs,
                "learning_rate": m.learning_rate,
                "l2": m.l2,
                "seed": m.seed,
            }
        )
    doc = {
        "magic": MODEL_MAGIC,
        "version": MODEL_VERSION,
        "fold_count": ens.fold_count,
        "feature_mean": [float(v) for v in ens.feature_mean],
        "feature_std": [float(v) for v in ens.feature_std],
        "members": members,
    }
    out = Path(path)
    out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return out


def load_model(path: str | Path) -> DaggingEnsemble:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("magic") != MODEL_MAGIC:
        raise ValueError(f"not a dagging model file: {path}")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')!r}")
    members = []
    for spec in doc["members"]:
        learner = LogisticLearner(
            epochs=spec["epochs"],
            learning_rate=spec["learning_rate"],
            l2=spec["l2"],
            seed=spec["seed"],
        )
        learner.weights = np.array(spec["weights"], dtype=np.float64)
        learner.bias = float(spec["bias"])
        members.append(learner)
    return DaggingEnsemble(
        members=members,
        fold_count=int(doc["fold_count"]),
        feature_mean=np.array(doc["feature_mean"], dtype=np.float64),
        feature_std=np.array(doc["feature_std"], dtype=np.float64),
    )
