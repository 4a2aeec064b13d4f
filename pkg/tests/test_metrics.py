import numpy as np
import pytest

from src.datasets import Dataset, make_blobs
from src.errors import TooFewRowsForFoldsError
from src.genome import PipelineGenome
from src.metrics import balanced_accuracy, cross_validate, stratified_folds
from src.primitives import NodeSpec, get_spec


def brute_force_balanced_accuracy(t, p):
    recalls = []
    for c in sorted(set(t)):
        rows = [i for i in range(len(t)) if t[i] == c]
        recalls.append(sum(1 for i in rows if p[i] == c) / len(rows))
    return sum(recalls) / len(recalls)


def single_node(primitive, **overrides):
    hv = {k: v[0] for k, v in get_spec(primitive).hyper_grid.items()}
    hv.update(overrides)
    return PipelineGenome(layers=((NodeSpec(primitive, hv),),), id=5)


class TestBalancedAccuracy:
    def test_perfect(self):
        assert balanced_accuracy([0, 0, 1, 1], [0, 0, 1, 1], 2) == 1.0

    def test_majority_class(self):
        assert balanced_accuracy([0, 0, 0, 1], [0, 0, 0, 0], 2) == 0.5

    def test_all_wrong(self):
        assert balanced_accuracy([0, 1, 2], [1, 2, 0], 3) == 0.0

    def test_absent_class_excluded(self):
        # class 2 never occurs in y_true, so only two recalls are averaged
        assert balanced_accuracy([0, 0, 1, 1], [0, 2, 1, 1], 3) == pytest.approx(0.75)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            n, k = int(rng.integers(1, 30)), int(rng.integers(2, 5))
            t, p = rng.integers(0, k, size=n), rng.integers(0, k, size=n)
            assert balanced_accuracy(t, p, k) == pytest.approx(brute_force_balanced_accuracy(list(t), list(p)))

    def test_invariant_under_row_permutation(self):
        rng = np.random.default_rng(1)
        t, p = rng.integers(0, 3, size=40), rng.integers(0, 3, size=40)
        perm = rng.permutation(40)
        assert balanced_accuracy(t, p, 3) == pytest.approx(balanced_accuracy(t[perm], p[perm], 3))

    def test_equals_accuracy_when_balanced(self):
        rng = np.random.default_rng(2)
        t = np.repeat(np.arange(3), 10)
        p = rng.integers(0, 3, size=30)
        assert balanced_accuracy(t, p, 3) == pytest.approx(np.mean(t == p))

    @pytest.mark.parametrize(
        "t, p",
        [([], []), ([0, 1], [0]), ([0, 3], [0, 1])],
    )
    def test_rejects_bad_input(self, t, p):
        with pytest.raises(ValueError):
            balanced_accuracy(t, p, 2)


class TestStratifiedFolds:
    def test_partition_and_balance(self):
        labels = np.array([0] * 23 + [1] * 17)
        folds = stratified_folds(labels, 5, seed=3)
        all_rows = np.sort(np.concatenate(folds))
        np.testing.assert_array_equal(all_rows, np.arange(40))
        sizes = [len(f) for f in folds]
        assert max(sizes) - min(sizes) <= 1
        for f in folds:
            assert abs(np.sum(labels[f] == 0) - 23 / 5) < 1.0 + 1e-9

    def test_rare_class_skips_folds(self):
        labels = np.array([0] * 20 + [1] * 2)
        folds = stratified_folds(labels, 5, seed=0)
        assert sum(int(np.any(labels[f] == 1)) for f in folds) == 2

    def test_seeded(self):
        labels = np.arange(30) % 3
        a, b = stratified_folds(labels, 4, 8), stratified_folds(labels, 4, 8)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_fewer_rows_than_folds(self):
        with pytest.raises(TooFewRowsForFoldsError) as exc:
            stratified_folds(np.array([0, 1, 0, 1]), 5, seed=0)
        assert (exc.value.n_rows, exc.value.folds) == (4, 5)


class TestCrossValidate:
    def test_constant_genome_scores_half(self):
        d = Dataset(features=np.zeros((40, 2)), labels=np.arange(40) % 2, n_classes=2)
        record = cross_validate(single_node("decision_tree", max_depth=3), d, folds=5, seed=0)
        assert record.cv_score == pytest.approx(0.5)
        assert record.fold_scores == pytest.approx((0.5,) * 5)

    def test_xor_corners_solved_at_depth_two(self, xor_corners200):
        record = cross_validate(single_node("decision_tree", max_depth=2), xor_corners200, folds=5, seed=0)
        assert record.cv_score == 1.0

    @pytest.mark.parametrize("depth", [3, 5, 8, 12])
    def test_xor_grid_solved(self, xor200, depth):
        record = cross_validate(single_node("decision_tree", max_depth=depth), xor200, folds=5, seed=0)
        assert record.cv_score == 1.0

    def test_xor_grid_greedy_root_at_depth_two(self, xor200):
        # no root split of the spread grid gains much, so the greedy first cut misses
        # the gap between quadrants and two levels cannot separate them
        record = cross_validate(single_node("decision_tree", max_depth=2), xor200, folds=5, seed=0)
        assert 0.5 <= record.cv_score < 1.0

    def test_deterministic(self):
        d = make_blobs(n_rows=60, n_features=2, separation=1.0, seed=4)
        g = single_node("knn", k=3)
        assert cross_validate(g, d, 5, seed=11) == cross_validate(g, d, 5, seed=11)

    def test_record_fields(self, small_blobs):
        record = cross_validate(single_node("gaussian_nb"), small_blobs, folds=3, seed=1)
        assert record.genome_id == 5
        assert record.total_nodes == 1
        assert len(record.fold_scores) == 3
        assert 0.0 <= record.cv_score <= 1.0

    def test_failing_fold_scores_zero(self, small_blobs, monkeypatch, caplog):
        from src.metrics import validation

        def boom(genome, train, seed):
            raise RuntimeError("fit exploded")

        monkeypatch.setattr(validation, "fit_pipeline", boom)
        record = cross_validate(single_node("gaussian_nb"), small_blobs, folds=3, seed=1)
        assert record.fold_scores == (0.0, 0.0, 0.0)
        assert "fit exploded" in caplog.text
