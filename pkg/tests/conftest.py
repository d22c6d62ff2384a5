from pathlib import Path

import numpy as np
import pytest

import gaitemo
from gaitemo import EmotionLabel, GaitParams, generate_corpus, generate_walk
from gaitemo.synthgait import load_corpus_spec

DATA_DIR = Path(gaitemo.__file__).parent / "data"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion for the summary."""
    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {number:2d}. {title}" + (f" -- {detail}" if detail else "")
        config = request.config
        if not hasattr(config, "acceptance_lines"):
            config.acceptance_lines = []
        config.acceptance_lines.append((number, line))
        print(line)
        return passed
    return record


@pytest.fixture(scope="session")
def noiseless_walk():
    return generate_walk(GaitParams(stride_freq=1.8), EmotionLabel.Natural, walk_id="clean")


@pytest.fixture(scope="session")
def noisy_walk():
    return generate_walk(GaitParams(stride_freq=2.0, noise_std=0.01, phase_jitter=0.5, seed=3),
                         EmotionLabel.Angry, walk_id="noisy")


def constant_walk(n_frames: int, value=(1.0, 2.0, 3.0), label=EmotionLabel.Natural):
    from gaitemo import Walk
    pos = np.broadcast_to(np.asarray(value, dtype=float), (n_frames, 25, 3)).copy()
    return Walk.from_arrays(pos, walk_id="const", label=label)


@pytest.fixture(scope="session")
def ablation_manifest(tmp_path_factory):
    """Constructed corpus: stride differs, hands/feet/head carry heavy independent noise."""
    out = tmp_path_factory.mktemp("ablation")
    generate_corpus(load_corpus_spec(DATA_DIR / "ablation_params.json"), out)
    return out / "manifest.csv"
