"""Shuffled train/test splitting and SMOTE rebalancing of the training set.

The test side of a split is never resampled; only the training set is
balanced, by interpolating synthetic minority points between nearest
minority neighbors in feature space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import LabeledInstance

PROVENANCE_VALUES = ("real", "synthetic", "smote-augmented")


@dataclass
class Dataset:
    instances: list[LabeledInstance]
    provenance: str = "real"

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCE_VALUES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        widths = {len(i.model_features) for i in self.instances}
        if len(widths) > 1:
            raise ValueError(f"mixed feature dimensionality: {sorted(widths)}")

    def labels(self) -> np.ndarray:
        return np.array([i.label for i in self.instances], dtype=np.int64)

    def feature_matrix(self) -> np.ndarray:
        return np.array([i.model_features for i in self.instances], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.instances)


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.7
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def shuffle_split(data: Dataset, cfg: SplitConfig) -> tuple[Dataset, Dataset]:
    """Shuffle and split so that both classes appear on both sides.

    The split size is round(train_fraction * N). If a shuffle leaves a side
    single-class, it is redrawn (up to 100 times) before giving up.
    """
    n = len(data)
    labels = data.labels()
    for cls in (0, 1):
        if int((labels == cls).sum()) < 2:
            raise ValueError(f"need at least 2 instances of class {cls} to split")
    n_train = int(round(cfg.train_fraction * n))
    if not 0 < n_train < n:
        raise ValueError(f"train_fraction {cfg.train_fraction} leaves an empty side for {n} instances")

    rng = np.random.default_rng(cfg.seed)
    for _ in range(100):
        perm = rng.permutation(n)
        train_idx, test_idx = perm[:n_train], perm[n_train:]
        covered = all(
            len(np.unique(labels[idx])) == 2 for idx in (train_idx, test_idx)
        )
        if covered:
            train = Dataset([data.instances[i] for i in train_idx], data.provenance)
            test = Dataset([data.instances[i] for i in test_idx], data.provenance)
            return train, test
    raise ValueError("no class-covering split found after 100 shuffles")


def smote_balance(
    train: Dataset,
    k: int = 5,
    undersample_fraction: float = 0.0,
    seed: int = 0,
) -> Dataset:
    """Balance the training classes exactly.

    The majority class is randomly undersampled by ``undersample_fraction``,
    then the minority is grown to the retained majority count. Each synthetic
    point is x + u * (nn - x) with u ~ U[0, 1) and nn one of x's k nearest
    minority neighbors (Euclidean on model features, ties broken by lowest
    index). Synthetic instances copy the seed point's sensitive value.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 <= undersample_fraction < 1.0:
        raise ValueError(f"undersample_fraction must be in [0, 1), got {undersample_fraction}")

    labels = train.labels()
    count1 = int((labels == 1).sum())
    count0 = len(train) - count1
    minority_label = 1 if count1 <= count0 else 0
    minority = [i for i in train.instances if i.label == minority_label]
    majority = [i for i in train.instances if i.label != minority_label]

    if len(minority) < 2:
        raise ValueError("SMOTE requires >=2 minority instances")

    rng = np.random.default_rng(seed)
    keep = len(majority) - int(round(undersample_fraction * len(majority)))
    if keep < len(minority):
        raise ValueError(
            f"undersample_fraction {undersample_fraction} would drop the majority "
            f"below the minority count ({keep} < {len(minority)})"
        )
    if keep < len(majority):
        kept_idx = rng.choice(len(majority), size=keep, replace=False)
        majority = [majority[i] for i in sorted(kept_idx)]

    x_min = np.array([i.model_features for i in minority], dtype=np.float64)
    k_eff = min(k, len(minority) - 1)
    # k nearest minority neighbors per minority point, ties by lowest index
    diffs = x_min[:, None, :] - x_min[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diffs, diffs)
    np.fill_diagonal(d2, np.inf)
    neighbor_idx = np.argsort(d2, axis=1, kind="stable")[:, :k_eff]

    synthetic: list[LabeledInstance] = []
    n_new = keep - len(minority)
    for s in range(n_new):
        i = int(rng.integers(len(minority)))
        j = int(neighbor_idx[i, int(rng.integers(k_eff))])
        u = float(rng.random())
        vec = x_min[i] + u * (x_min[j] - x_min[i])
        synthetic.append(
            LabeledInstance(
                model_features=tuple(float(v) for v in vec),
                label=minority_label,
                sensitive_value=minority[i].sensitive_value,
                message_id=f"smote-{s}",
            )
        )

    combined = majority + minority + synthetic
    order = rng.permutation(len(combined))
    return Dataset([combined[i] for i in order], provenance="smote-augmented")
