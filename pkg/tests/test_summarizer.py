import numpy as np
import pytest

from mvsumm.dataset import ShotRecord, build_dataset
from mvsumm.errors import DataError
from mvsumm.summarizer import WeightCurve, local_maxima, select_summary, weight_curve


def curve_of(per_view_weights):
    weights = np.concatenate(per_view_weights)
    offsets = np.concatenate([[0], np.cumsum([len(w) for w in per_view_weights])])
    return WeightCurve(weights=np.asarray(weights, dtype=float), offsets=offsets)


def dataset_for(per_view_counts, shot_len=10):
    rng = np.random.default_rng(0)
    views, shots = [], []
    for k, n in enumerate(per_view_counts, start=1):
        views.append(rng.standard_normal((6, n)))
        for s in range(1, n + 1):
            shots.append(ShotRecord(k, s, (s - 1) * shot_len + 1, s * shot_len))
    return build_dataset(views, shots)


class TestWeightCurve:
    def test_row_norms(self):
        z = np.array([[0.0, 0.0], [3.0, 4.0]])
        curve = weight_curve(z, np.array([0, 2]))
        np.testing.assert_allclose(curve.weights, [0.0, 5.0])

    def test_zero_matrix(self):
        curve = weight_curve(np.zeros((3, 3)), np.array([0, 3]))
        np.testing.assert_array_equal(curve.weights, np.zeros(3))

    def test_row_permutation_equivariance(self):
        rng = np.random.default_rng(1)
        z = rng.standard_normal((5, 5))
        perm = rng.permutation(5)
        a = weight_curve(z, np.array([0, 5])).weights
        b = weight_curve(z[perm], np.array([0, 5])).weights
        np.testing.assert_allclose(b, a[perm])

    def test_view_slice(self):
        curve = curve_of([[1.0, 2.0], [3.0]])
        np.testing.assert_array_equal(curve.view_slice(2), [3.0])


class TestLocalMaxima:
    def test_strict_peak(self):
        assert local_maxima(curve_of([[1.0, 3.0, 2.0]])) == [1]

    def test_monotone_boundary(self):
        assert local_maxima(curve_of([[1.0, 2.0, 3.0]])) == [2]

    def test_plateau_first_index_only(self):
        assert local_maxima(curve_of([[2.0, 2.0, 1.0]])) == [0]

    def test_descending_plateau_not_candidate(self):
        assert local_maxima(curve_of([[3.0, 2.0, 2.0]])) == [0]

    def test_zero_weights_excluded(self):
        assert local_maxima(curve_of([[0.0, 0.0, 1.0]])) == [2]
        assert local_maxima(curve_of([[0.0, 0.0]])) == []

    def test_per_view_boundaries(self):
        # last shot of view 1 and first of view 2 are compared only within views
        cands = local_maxima(curve_of([[1.0, 5.0], [4.0, 1.0]]))
        assert cands == [1, 2]

    def test_single_shot_view(self):
        assert local_maxima(curve_of([[2.0]])) == [0]


class TestSelectSummary:
    def test_top_k(self):
        ds = dataset_for([4])
        curve = curve_of([[5.0, 4.0, 3.0, 0.0]])
        summary = select_summary([0, 1, 2, 3], curve, ds, 3)
        assert [e.shot_index for e in summary.entries] == [1, 2, 3]
        assert [e.rank for e in summary.entries] == [1, 2, 3]

    def test_zero_weight_never_selected(self):
        ds = dataset_for([4])
        curve = curve_of([[5.0, 4.0, 3.0, 0.0]])
        summary = select_summary([0, 1, 2, 3], curve, ds, 4)
        assert len(summary.entries) == 3

    def test_prefix_property(self):
        ds = dataset_for([6])
        curve = curve_of([[0.9, 0.1, 0.8, 0.2, 0.7, 0.3]])
        cands = list(range(6))
        s3 = select_summary(cands, curve, ds, 3)
        s5 = select_summary(cands, curve, ds, 5)
        assert s3.shot_keys() <= s5.shot_keys()

    def test_tie_break_by_frame_then_view(self):
        ds = dataset_for([2, 2])
        curve = curve_of([[1.0, 1.0], [1.0, 1.0]])
        summary = select_summary([0, 1, 2, 3], curve, ds, 2)
        # all weights tie: earlier frame_start wins, then lower view id
        assert [(e.view_id, e.shot_index) for e in summary.entries] == [(1, 1), (2, 1)]

    def test_coverage_spreads_over_timeline(self):
        ds = dataset_for([6])
        # heaviest shots clumped at the start; coverage should still reach the tail
        curve = curve_of([[0.9, 0.8, 0.7, 0.1, 0.1, 0.2]])
        cands = list(range(6))
        plain = select_summary(cands, curve, ds, 3, coverage=False)
        spread = select_summary(cands, curve, ds, 3, coverage=True)
        assert {e.shot_index for e in plain.entries} == {1, 2, 3}
        picked = {e.shot_index for e in spread.entries}
        assert 1 in picked and 3 in picked and 6 in picked

    def test_coverage_never_selects_zero_weight(self):
        ds = dataset_for([4])
        curve = curve_of([[1.0, 0.0, 0.0, 0.0]])
        summary = select_summary(list(range(4)), curve, ds, 4, coverage=True)
        assert len(summary.entries) == 1

    def test_rejects_bad_length(self):
        ds = dataset_for([2])
        with pytest.raises(DataError):
            select_summary([0], curve_of([[1.0, 1.0]]), ds, 0)

    def test_entries_carry_frame_ranges(self):
        ds = dataset_for([3], shot_len=32)
        curve = curve_of([[0.5, 1.0, 0.2]])
        summary = select_summary([0, 1, 2], curve, ds, 1)
        entry = summary.entries[0]
        assert (entry.frame_start, entry.frame_end) == (33, 64)
