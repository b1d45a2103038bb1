import numpy as np
import pytest

from egofair.features import LabeledInstance
from egofair.sampling import Dataset, SplitConfig, shuffle_split, smote_balance


def make_instance(vec, label, sensitive=0.0, message_id=None):
    return LabeledInstance(
        model_features=tuple(float(v) for v in vec),
        label=label,
        sensitive_value=sensitive,
        message_id=message_id or f"m{hash(tuple(vec)) & 0xFFFF}",
    )


def make_dataset(n, positives, seed=0, dim=3):
    rng = np.random.default_rng(seed)
    instances = []
    for i in range(n):
        label = 1 if i < positives else 0
        instances.append(
            make_instance(rng.normal(size=dim), label, sensitive=float(rng.random()), message_id=f"m{i}")
        )
    return Dataset(instances)


class TestShuffleSplit:
    def test_sizes_for_ten(self):
        data = make_dataset(10, 3)
        train, test = shuffle_split(data, SplitConfig(0.7, seed=1))
        assert len(train) == 7
        assert len(test) == 3

    def test_deterministic(self):
        data = make_dataset(40, 8)
        a = shuffle_split(data, SplitConfig(0.7, seed=9))
        b = shuffle_split(data, SplitConfig(0.7, seed=9))
        assert [i.message_id for i in a[0].instances] == [i.message_id for i in b[0].instances]
        assert [i.message_id for i in a[1].instances] == [i.message_id for i in b[1].instances]

    def test_corpus_scale_rounding(self):
        data = make_dataset(4865, 93)
        train, test = shuffle_split(data, SplitConfig(0.7, seed=3))
        assert abs(len(train) - 3406) <= 1
        assert len(train) + len(test) == 4865

    def test_disjoint_exhaustive_class_covering(self):
        data = make_dataset(50, 5)
        train, test = shuffle_split(data, SplitConfig(0.7, seed=2))
        train_ids = {i.message_id for i in train.instances}
        test_ids = {i.message_id for i in test.instances}
        assert not train_ids & test_ids
        assert len(train_ids | test_ids) == 50
        for part in (train, test):
            labels = {i.label for i in part.instances}
            assert labels == {0, 1}

    def test_single_class_rejected(self):
        data = make_dataset(10, 0)
        with pytest.raises(ValueError, match="class"):
            shuffle_split(data, SplitConfig(0.7, seed=1))

    def test_retry_exhaustion(self):
        # 2 positives in 10 with a 9/1 split: the single test slot can never
        # hold both classes
        data = make_dataset(10, 2)
        with pytest.raises(ValueError, match="100 shuffles"):
            shuffle_split(data, SplitConfig(0.9, seed=1))


class TestSmote:
    def test_segment_interpolation(self):
        minority = [
            make_instance((0.0, 0.0), 1, sensitive=0.3, message_id="p0"),
            make_instance((1.0, 1.0), 1, sensitive=0.8, message_id="p1"),
        ]
        majority = [
            make_instance((5.0, 5.0), 0, message_id=f"n{i}") for i in range(6)
        ]
        out = smote_balance(Dataset(minority + majority), k=1, seed=7)
        synthetic = [i for i in out.instances if i.message_id.startswith("smote-")]
        assert len(synthetic) == 4
        for s in synthetic:
            x, y = s.model_features
            assert x == pytest.approx(y, abs=1e-12)
            assert 0.0 <= x <= 1.0
            assert s.label == 1
            assert s.sensitive_value in (0.3, 0.8)

    def test_growth_matches_majority(self):
        data = make_dataset(3420, 68)
        out = smote_balance(data, k=5, seed=1)
        labels = out.labels()
        assert int((labels == 1).sum()) == 3352
        assert int((labels == 0).sum()) == 3352
        assert len(out) == 6704

    def test_counts_exactly_equal(self):
        for n, pos in ((40, 7), (100, 30), (61, 2)):
            out = smote_balance(make_dataset(n, pos), k=3, seed=2)
            labels = out.labels()
            assert int((labels == 1).sum()) == int((labels == 0).sum())

    def test_synthetic_points_inside_minority_bounding_box(self):
        data = make_dataset(120, 15, seed=4, dim=5)
        minority = np.array(
            [i.model_features for i in data.instances if i.label == 1]
        )
        lo, hi = minority.min(axis=0), minority.max(axis=0)
        out = smote_balance(data, k=5, seed=9)
        for inst in out.instances:
            if inst.message_id.startswith("smote-"):
                v = np.array(inst.model_features)
                assert (v >= lo - 1e-12).all()
                assert (v <= hi + 1e-12).all()

    def test_deterministic_including_order(self):
        data = make_dataset(80, 9, seed=6)
        a = smote_balance(data, k=4, seed=11)
        b = smote_balance(data, k=4, seed=11)
        assert [i.model_features for i in a.instances] == [i.model_features for i in b.instances]
        assert [i.message_id for i in a.instances] == [i.message_id for i in b.instances]

    def test_minority_singleton_rejected(self):
        data = make_dataset(10, 1)
        with pytest.raises(ValueError, match=">=2 minority"):
            smote_balance(data, seed=1)

    def test_sensitive_values_copied_from_seeds(self):
        data = make_dataset(60, 6, seed=8)
        allowed = {i.sensitive_value for i in data.instances if i.label == 1}
        out = smote_balance(data, k=2, seed=3)
        for inst in out.instances:
            if inst.message_id.startswith("smote-"):
                assert inst.sensitive_value in allowed

    def test_undersampling(self):
        data = make_dataset(100, 10)
        out = smote_balance(data, k=3, undersample_fraction=0.5, seed=5)
        labels = out.labels()
        assert int((labels == 0).sum()) == 45
        assert int((labels == 1).sum()) == 45

    def test_undersampling_below_minority_rejected(self):
        data = make_dataset(100, 40)
        with pytest.raises(ValueError, match="below the minority"):
            smote_balance(data, undersample_fraction=0.9, seed=1)

    def test_provenance_marked(self):
        out = smote_balance(make_dataset(30, 4), k=2, seed=1)
        assert out.provenance == "smote-augmented"

    def test_oversized_k_is_capped_at_available_neighbors(self):
        # 3 minority points but k=10: neighbors cap at 2, still balanced
        out = smote_balance(make_dataset(40, 3), k=10, seed=2)
        labels = out.labels()
        assert int((labels == 1).sum()) == int((labels == 0).sum()) == 37
