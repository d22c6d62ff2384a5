import json

import numpy as np
import pytest

from gaitemo import (ClassifierSpec, CorpusSpec, EmotionLabel, GaitParams, Heading, JointId,
                     PathDirection, cross_validate, detect_heading, generate_corpus, generate_walk,
                     recenter_on_spinebase, select_significant_joints, validate_walk)
from gaitemo.errors import InvalidParams
from gaitemo.ingestion import load_manifest
from gaitemo.pipeline import features_for_walks
from gaitemo.skeleton import SIGNIFICANT_14
from gaitemo.synthgait import corpus_spec_from_dict, generate_walks, load_corpus_spec


@pytest.mark.parametrize("kwargs", [dict(stride_freq=0.5), dict(stride_freq=4.0),
                                    dict(arm_amp=-0.1), dict(duration=0), dict(path=())])
def test_invalid_params(kwargs):
    with pytest.raises(InvalidParams):
        GaitParams(**kwargs)


def test_generated_walks_are_valid():
    for seed in range(5):
        w = generate_walk(GaitParams(noise_std=0.02, phase_jitter=1.0, seed=seed), EmotionLabel.Happy)
        assert validate_walk(w) == [] and len(w) == 300 and w.sample_rate == 30.0


def test_determinism():
    p = GaitParams(noise_std=0.01, phase_jitter=0.5, extremity_noise_std=0.1, seed=42)
    a, b = generate_walk(p, EmotionLabel.Natural), generate_walk(p, EmotionLabel.Natural)
    assert a.positions.tobytes() == b.positions.tobytes()
    c = generate_walk(GaitParams(noise_std=0.01, phase_jitter=0.5, seed=43), EmotionLabel.Natural)
    assert not np.array_equal(a.positions, c.positions)


def test_straight_leg_is_front():
    w = generate_walk(GaitParams(duration=10, path=((PathDirection.TowardCamera, 10),)),
                      EmotionLabel.Natural)
    h = detect_heading(w)
    interior = h[7:-7]  # drop one smoothing half-window at each end
    assert np.mean(interior == Heading.Front) >= 0.95


def test_path_turns_produce_both_directions():
    w = generate_walk(GaitParams(), EmotionLabel.Natural)
    h = detect_heading(w)
    assert set(np.unique(h)) == {Heading.Front, Heading.Back, Heading.Turning}
    z = w.positions[:, JointId.SpineBase, 2]
    turn = slice(int(4.5 * 30) + 5, int(5.5 * 30) - 5)
    assert np.ptp(z[turn]) == 0.0


def test_path_cycles_to_fill_duration():
    p = GaitParams(duration=25, path=((PathDirection.TowardCamera, 4), (PathDirection.AwayFromCamera, 4)))
    w = generate_walk(p, EmotionLabel.Natural)
    h = detect_heading(w)
    runs = np.flatnonzero(np.diff(h)) + 1
    assert len(w) == 750 and len(runs) >= 8


def test_noiseless_knee_is_a_single_sinusoid():
    p = GaitParams(stride_freq=1.5, duration=4.0, path=((PathDirection.TowardCamera, 4.0),))
    w = generate_walk(p, EmotionLabel.Natural)
    col = 3 * SIGNIFICANT_14.index(JointId.KneeLeft) + 2
    x = recenter_on_spinebase(select_significant_joints(w)).data[:, col]
    mag = np.abs(np.fft.fft(x))[1:len(x) // 2 + 1]
    # 4 s at 1.5 Hz is exactly 6 cycles -> all energy in bin 6
    assert np.argmax(mag) + 1 == 6
    assert np.sort(mag)[-2] < 1e-9 * mag.max()


def test_noise_energy_scales_quadratically():
    clean = generate_walk(GaitParams(seed=0), EmotionLabel.Natural).positions
    msd = {}
    for s in (0.01, 0.02):
        msd[s] = np.mean([np.mean((generate_walk(GaitParams(noise_std=s, seed=k),
                                                 EmotionLabel.Natural).positions - clean) ** 2)
                          for k in range(20)])
    assert msd[0.02] / msd[0.01] == pytest.approx(4.0, rel=0.10)


def test_extremity_noise_only_touches_extremities():
    clean = generate_walk(GaitParams(seed=1), EmotionLabel.Natural).positions
    noisy = generate_walk(GaitParams(seed=1, extremity_noise_std=0.1), EmotionLabel.Natural).positions
    changed = np.flatnonzero(np.any(clean != noisy, axis=(0, 2)))
    assert not set(changed) & {int(j) for j in SIGNIFICANT_14}
    assert JointId.Head in changed and JointId.FootLeft in changed


def test_corpus_files(tmp_path):
    base = GaitParams(noise_std=0.01)
    m = generate_corpus(CorpusSpec(base, base, n_per_class=5, seed=3), tmp_path)
    assert len(m) == 10
    loaded = load_manifest(tmp_path / "manifest.csv")
    assert [e.label for e in loaded].count(EmotionLabel.Natural) == 5
    assert [e.label for e in loaded].count(EmotionLabel.Angry) == 5
    assert len(list((tmp_path / "walks").glob("*.csv"))) == 10
    w = loaded.entries[0].load()
    assert validate_walk(w) == [] and w.walk_id == loaded.entries[0].walk_id


def test_corpus_needs_two_per_class():
    with pytest.raises(InvalidParams):
        CorpusSpec(GaitParams(), GaitParams(), n_per_class=1)


def test_corpus_seeds_differ_per_walk():
    walks = generate_walks(CorpusSpec(GaitParams(noise_std=0.01), GaitParams(noise_std=0.01),
                                      n_per_class=3, seed=0))
    assert len({w.positions.tobytes() for w in walks}) == 6


def test_identical_classes_are_near_chance():
    p = GaitParams(noise_std=0.01, phase_jitter=0.5)
    d, skipped = features_for_walks(generate_walks(CorpusSpec(p, p, n_per_class=40, seed=5)))
    assert not skipped
    assert 30 <= cross_validate(d, ClassifierSpec("gnb"), 10, 5).accuracy <= 70


def test_distinct_stride_is_separable():
    a = GaitParams(stride_freq=1.6, noise_std=0.005, phase_jitter=0.3)
    b = GaitParams(stride_freq=2.4, noise_std=0.005, phase_jitter=0.3)
    d, _ = features_for_walks(generate_walks(CorpusSpec(a, b, n_per_class=20, seed=1)))
    assert cross_validate(d, ClassifierSpec("gnb"), 10, 0).accuracy >= 90


def test_corpus_spec_json(tmp_path):
    raw = {"n_per_class": 4, "seed": 9,
           "class_a": {"label": "Natural", "stride_freq": 1.7},
           "class_b": {"label": "Happy", "stride_freq": 2.0,
                       "path": [["AwayFromCamera", 3], ["TowardCamera", 3]]}}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(raw))
    spec = load_corpus_spec(path)
    assert spec.label_b is EmotionLabel.Happy and spec.n_per_class == 4
    assert spec.class_b.path[0] == (PathDirection.AwayFromCamera, 3.0)
    assert GaitParams.from_dict(spec.class_b.to_dict()) == spec.class_b
    with pytest.raises(InvalidParams):
        corpus_spec_from_dict({**raw, "class_a": {"stride": 1}})
    with pytest.raises(InvalidParams):
        corpus_spec_from_dict({**raw, "n_per_class": 0})
