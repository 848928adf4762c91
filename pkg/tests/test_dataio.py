import numpy as np
import pytest

from mvsumm import dataio
from mvsumm.dataset import Event, GroundTruth, generate_synthetic
from mvsumm.errors import DataError


@pytest.fixture
def synth_dir(tmp_path):
    ds, gt = generate_synthetic(2, 3, 2, 16, 0.02, seed=5)
    dataio.save_dataset(tmp_path, ds)
    dataio.write_ground_truth(tmp_path / dataio.GROUND_TRUTH_FILE, gt)
    return tmp_path, ds, gt


def test_feature_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    matrix = rng.standard_normal((16, 3))
    dataio.write_view_features(tmp_path / "view_1.csv", 1, matrix)
    view_id, loaded = dataio.read_view_features(tmp_path / "view_1.csv")
    assert view_id == 1
    np.testing.assert_array_equal(loaded, matrix)  # repr round-trips exactly


def test_header_validation(tmp_path):
    path = tmp_path / "view_1.csv"
    path.write_text("0.1,0.2\n0.3,0.4\n")
    with pytest.raises(DataError, match="header"):
        dataio.read_view_features(path)
    path.write_text("# view=1 dim=3 shots=2\n0.1,0.2\n0.3,0.4\n")
    with pytest.raises(DataError, match="promises"):
        dataio.read_view_features(path)


def test_load_dataset_roundtrip(synth_dir):
    directory, ds, _ = synth_dir
    loaded = dataio.load_dataset(directory)
    assert loaded.num_shots == ds.num_shots
    assert loaded.num_views == ds.num_views
    for a, b in zip(loaded.views, ds.views):
        np.testing.assert_allclose(a, b, atol=1e-12)
    assert loaded.shots == ds.shots


def test_load_dataset_example_sizes(tmp_path):
    rng = np.random.default_rng(1)
    dataio.write_view_features(tmp_path / "view_1.csv", 1, rng.standard_normal((16, 3)))
    dataio.write_view_features(tmp_path / "view_2.csv", 2, rng.standard_normal((16, 4)))
    shots = []
    from mvsumm.dataset import ShotRecord

    for k, n in [(1, 3), (2, 4)]:
        for s in range(1, n + 1):
            shots.append(ShotRecord(k, s, (s - 1) * 10 + 1, s * 10))
    dataio.write_shot_metadata(tmp_path / dataio.SHOTS_FILE, shots)
    ds = dataio.load_dataset(tmp_path)
    assert ds.num_shots == 7 and ds.num_views == 2


def test_load_dataset_dimension_mismatch(tmp_path):
    rng = np.random.default_rng(1)
    dataio.write_view_features(tmp_path / "view_1.csv", 1, rng.standard_normal((16, 2)))
    dataio.write_view_features(tmp_path / "view_2.csv", 2, rng.standard_normal((32, 2)))
    from mvsumm.dataset import ShotRecord

    shots = [ShotRecord(1, 1, 1, 5), ShotRecord(1, 2, 6, 10),
             ShotRecord(2, 1, 1, 5), ShotRecord(2, 2, 6, 10)]
    dataio.write_shot_metadata(tmp_path / dataio.SHOTS_FILE, shots)
    with pytest.raises(DataError, match="feature dimension mismatch"):
        dataio.load_dataset(tmp_path)


def test_load_dataset_zero_norm(tmp_path):
    dataio.write_view_features(
        tmp_path / "view_1.csv", 1, np.array([[1.0, 0.0], [0.0, 0.0]])
    )
    from mvsumm.dataset import ShotRecord

    dataio.write_shot_metadata(
        tmp_path / dataio.SHOTS_FILE, [ShotRecord(1, 1, 1, 5), ShotRecord(1, 2, 6, 10)]
    )
    with pytest.raises(DataError, match="zero-norm descriptor"):
        dataio.load_dataset(tmp_path)


def test_load_dataset_missing_pieces(tmp_path):
    with pytest.raises(DataError, match="not a directory"):
        dataio.load_dataset(tmp_path / "nope")
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(DataError, match="no view_"):
        dataio.load_dataset(empty)


def test_ground_truth_roundtrip(tmp_path):
    gt = GroundTruth(
        events=(
            Event(1, 1, 64, views=frozenset({1, 2})),
            Event(2, 65, 128, views=None),
        )
    )
    dataio.write_ground_truth(tmp_path / "gt.json", gt)
    loaded = dataio.read_ground_truth(tmp_path / "gt.json")
    assert loaded == gt


def test_frame_stream(tmp_path):
    path = tmp_path / "frames.csv"
    path.write_text("# a comment\n1.0,2.0\n3.0,4.0\n")
    frames = dataio.read_frame_stream(path)
    np.testing.assert_array_equal(frames, [[1.0, 2.0], [3.0, 4.0]])
    path.write_text("1.0,2.0\n3.0\n")
    with pytest.raises(DataError, match="inconsistent"):
        dataio.read_frame_stream(path)


def test_writers_are_deterministic(tmp_path, synth_dir):
    directory, ds, _ = synth_dir
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    dataio.write_view_features(a, 1, ds.views[0])
    dataio.write_view_features(b, 1, ds.views[0])
    assert a.read_bytes() == b.read_bytes()
