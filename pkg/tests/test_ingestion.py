import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gaitemo import ClassifierSpec, EmotionLabel, LabeledDataset, Walk, train, train_gnb
from gaitemo.classify import LinearSVMModel, predict
from gaitemo.errors import (BadFieldCount, CorruptPayload, DuplicateWalkId, MalformedHeader,
                            MalformedRow, NonFiniteValue, NonMonotonicIndex, UnknownLabel,
                            UnknownModelKind, VersionMismatch, WidthMismatch)
from gaitemo.ingestion import (FRAME_HEADER, load_manifest, load_model, parse_frames_csv,
                               read_features_csv, read_report, save_model, write_features_csv,
                               write_frames_csv, write_report)


def _frame_file(tmp_path, rows, header=None):
    header = header or ",".join(FRAME_HEADER)
    path = tmp_path / "walk.csv"
    path.write_text("\n".join([header] + rows) + "\n")
    return path


def _row(i, value="0.5", n=75):
    return ",".join([str(i), str(i / 30)] + [value] * n)


def test_parse_two_frames(tmp_path):
    w = parse_frames_csv(_frame_file(tmp_path, [_row(0), _row(1)]))
    assert len(w) == 2
    assert w.positions.shape == (2, 25, 3)
    assert w.sample_rate == 30.0
    assert w.walk_id == "walk"
    assert len(FRAME_HEADER) == 77


def test_bad_field_count(tmp_path):
    with pytest.raises(BadFieldCount) as exc:
        parse_frames_csv(_frame_file(tmp_path, [_row(0), _row(1, n=74)]))
    assert exc.value.line == 3


def test_nan_rejected(tmp_path):
    with pytest.raises(NonFiniteValue) as exc:
        parse_frames_csv(_frame_file(tmp_path, [_row(0, "NaN")]))
    assert exc.value.line == 2 and exc.value.col == 3


def test_non_monotonic_index(tmp_path):
    with pytest.raises(NonMonotonicIndex):
        parse_frames_csv(_frame_file(tmp_path, [_row(1), _row(1)]))


def test_header_must_match_exactly(tmp_path):
    reordered = FRAME_HEADER[:2] + FRAME_HEADER[5:8] + FRAME_HEADER[2:5] + FRAME_HEADER[8:]
    with pytest.raises(MalformedHeader):
        parse_frames_csv(_frame_file(tmp_path, [_row(0)], header=",".join(reordered)))


def test_sample_rate_directive(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("# sample_rate=15\n" + ",".join(FRAME_HEADER) + "\n" + _row(0) + "\n")
    assert parse_frames_csv(path).sample_rate == 15.0


def test_walk_round_trip(tmp_path, noisy_walk):
    path = tmp_path / "w.csv"
    write_frames_csv(path, noisy_walk)
    back = parse_frames_csv(path)
    assert back.same_as(noisy_walk)
    assert back.label is EmotionLabel.Angry


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.just(25), st.just(3)),
              elements=st.floats(-1e6, 1e6, allow_nan=False)),
       st.sampled_from(list(EmotionLabel)),
       st.floats(1, 240))
def test_walk_round_trip_property(tmp_path_factory, pos, label, rate):
    w = Walk.from_arrays(pos, walk_id="p1", label=label, subject_id="s", camera_id="k2",
                         sample_rate=rate)
    path = tmp_path_factory.mktemp("rt") / "w.csv"
    write_frames_csv(path, w)
    assert parse_frames_csv(path).same_as(w)


def _manifest(tmp_path, rows):
    path = tmp_path / "manifest.csv"
    path.write_text("walk_id,file_path,subject_id,camera_id,label\n" + "\n".join(rows) + "\n")
    return path


def test_manifest_three_rows(tmp_path):
    m = load_manifest(_manifest(tmp_path, ["w1,a.csv,s1,k1,Natural", "w2,b.csv,s1,k1,Angry",
                                           "w3,/abs/c.csv,s2,k2,happy"]))
    assert [e.walk_id for e in m] == ["w1", "w2", "w3"]
    assert m.entries[0].file_path == tmp_path / "a.csv"
    assert str(m.entries[2].file_path) == "/abs/c.csv"
    assert m.entries[2].label is EmotionLabel.Happy


def test_manifest_unknown_label(tmp_path):
    with pytest.raises(UnknownLabel) as exc:
        load_manifest(_manifest(tmp_path, ["w1,a.csv,s1,k1,Natural", "w2,b.csv,s1,k1,bored"]))
    assert exc.value.line == 3


def test_manifest_duplicate_id(tmp_path):
    with pytest.raises(DuplicateWalkId):
        load_manifest(_manifest(tmp_path, ["w1,a.csv,s1,k1,Natural", "w1,b.csv,s1,k1,Angry"]))


def test_manifest_missing_file_only_fails_on_load(tmp_path):
    m = load_manifest(_manifest(tmp_path, ["w1,missing.csv,s1,k1,Natural"]))
    with pytest.raises(OSError):
        m.entries[0].load()


def test_features_zeros_row(tmp_path):
    path = tmp_path / "f.csv"
    write_features_csv(path, [("w1", EmotionLabel.Natural, np.zeros(168))])
    lines = path.read_text().splitlines()
    assert len(lines[1].split(",")) == 170
    rows = read_features_csv(path)
    assert rows[0][0] == "w1" and rows[0][1] is EmotionLabel.Natural
    assert np.array_equal(rows[0][2], np.zeros(168))


def test_features_width_mismatch(tmp_path):
    with pytest.raises(WidthMismatch):
        write_features_csv(tmp_path / "f.csv", [("a", EmotionLabel.Natural, np.zeros(168)),
                                                ("b", EmotionLabel.Angry, np.zeros(84))])


def test_features_empty(tmp_path):
    path = tmp_path / "f.csv"
    write_features_csv(path, [])
    assert path.read_text().count("\n") == 1
    assert read_features_csv(path) == []


def test_features_malformed_row(tmp_path):
    path = tmp_path / "f.csv"
    write_features_csv(path, [("a", EmotionLabel.Natural, np.ones(4))])
    path.write_text(path.read_text() + "b,Angry,1,2,3\n")
    with pytest.raises(MalformedRow):
        read_features_csv(path)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(0, 5), st.integers(1, 12)),
              elements=st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False)))
def test_features_round_trip_exact(tmp_path_factory, X):
    rows = [(f"w{i}", EmotionLabel.Natural if i % 2 else EmotionLabel.Happy, x)
            for i, x in enumerate(X)]
    path = tmp_path_factory.mktemp("f") / "f.csv"
    write_features_csv(path, rows, width=X.shape[1])
    back = read_features_csv(path)
    assert [r[0] for r in back] == [r[0] for r in rows]
    assert [r[1] for r in back] == [r[1] for r in rows]
    for (_, _, a), (_, _, b) in zip(rows, back):
        assert np.array_equal(a, b)


@pytest.fixture
def small_dataset():
    rng = np.random.default_rng(5)
    X = np.vstack([rng.normal(0, 1, (15, 6)), rng.normal(1.5, 1, (15, 6))])
    labels = [EmotionLabel.Natural] * 15 + [EmotionLabel.Angry] * 15
    return LabeledDataset([f"w{i}" for i in range(30)], labels, X)


@pytest.mark.parametrize("kind", ["gnb", "svm"])
def test_model_round_trip_predictions(tmp_path, small_dataset, kind):
    model = train(ClassifierSpec(kind), small_dataset)
    path = tmp_path / "m.txt"
    save_model(path, model)
    back = load_model(path)
    probe = np.random.default_rng(0).normal(0.5, 2, (100, 6))
    assert predict(back, probe) == predict(model, probe)
    if kind == "svm":
        assert np.array_equal(back.weights, model.weights) and back.bias == model.bias
        assert np.array_equal(back.shift, model.shift)
    else:
        assert np.array_equal(back.means, model.means)


def test_model_unknown_kind(tmp_path, small_dataset):
    path = tmp_path / "m.txt"
    save_model(path, train_gnb(small_dataset))
    path.write_text(path.read_text().replace("kind: gnb", "kind: gbm"))
    with pytest.raises(UnknownModelKind):
        load_model(path)


def test_model_version_mismatch(tmp_path, small_dataset):
    path = tmp_path / "m.txt"
    save_model(path, train_gnb(small_dataset))
    path.write_text(path.read_text().replace("version: 1", "version: 7"))
    with pytest.raises(VersionMismatch):
        load_model(path)


@pytest.mark.parametrize("cut", [0.3, 0.6, 0.95])
def test_model_truncated(tmp_path, small_dataset, cut):
    path = tmp_path / "m.txt"
    save_model(path, train(ClassifierSpec("svm"), small_dataset))
    text = path.read_text()
    path.write_text(text[: int(len(text) * cut)])
    with pytest.raises(CorruptPayload):
        load_model(path)


def test_model_garbage_payload(tmp_path, small_dataset):
    path = tmp_path / "m.txt"
    save_model(path, train_gnb(small_dataset))
    path.write_text(path.read_text().replace("priors: ", "priors: x"))
    with pytest.raises(CorruptPayload):
        load_model(path)


def test_svm_without_standardization_round_trip(tmp_path):
    m = LinearSVMModel((EmotionLabel.Natural, EmotionLabel.Angry), np.array([1.0, -2.5]), 0.25, 1.0)
    path = tmp_path / "m.txt"
    save_model(path, m)
    back = load_model(path)
    assert back.shift is None and np.array_equal(back.weights, m.weights)


def test_report_round_trip(tmp_path, small_dataset):
    from gaitemo import cross_validate
    r = cross_validate(small_dataset, ClassifierSpec("gnb"), 5, seed=3)
    path = tmp_path / "r.txt"
    write_report(path, r)
    back = read_report(path)
    assert back.accuracy == r.accuracy
    assert np.array_equal(back.confusion, r.confusion)
    assert back.fold_accuracies == r.fold_accuracies and back.seed == 3
