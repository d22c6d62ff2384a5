"""Walk -> feature vector, and the same over a batch of walks with skip reporting."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .classify import LabeledDataset
from .errors import GaitError
from .features import FeatureVector, MissingSidePolicy, walk_features
from .preprocessing import PipelineConfig, preprocess_walk
from .skeleton import EmotionLabel, Walk, validate_walk


def extract_features(w: Walk, cfg: PipelineConfig = PipelineConfig(),
                     policy: MissingSidePolicy = MissingSidePolicy.REJECT,
                     circular_phase: bool = False) -> FeatureVector:
    problems = validate_walk(w)
    if problems:
        raise GaitError(f"walk {w.walk_id!r} is invalid: {'; '.join(problems)}")
    front, back = preprocess_walk(w, cfg)
    return walk_features(front, back, w.sample_rate, policy, circular_phase)


@dataclass
class WalkOutcome:
    walk_id: str
    label: EmotionLabel | None
    features: FeatureVector | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.features is not None


def _outcome(load: Callable[[], Walk] | Walk, walk_id: str, cfg, policy, circular) -> WalkOutcome:
    label = None
    try:
        w = load() if callable(load) else load
        label = w.label
        return WalkOutcome(walk_id, label, extract_features(w, cfg, policy, circular))
    except (GaitError, OSError) as exc:
        return WalkOutcome(walk_id, label, error=f"{type(exc).__name__}: {exc}")


def _outcome_star(args):
    return _outcome(*args)


def process_walks(items: Iterable[tuple[str, Callable[[], Walk] | Walk]],
                  cfg: PipelineConfig = PipelineConfig(),
                  policy: MissingSidePolicy = MissingSidePolicy.REJECT,
                  circular_phase: bool = False, jobs: int = 1) -> list[WalkOutcome]:
    """Run every walk through the pipeline; failures become outcomes, not exceptions.

    Results come back in input order whatever ``jobs`` is. Loaders must be
    picklable when ``jobs > 1``.
    """
    args = [(load, walk_id, cfg, policy, circular_phase) for walk_id, load in items]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_outcome_star, args, chunksize=4))
    return [_outcome(*a) for a in args]


def features_for_walks(walks: Sequence[Walk], cfg: PipelineConfig = PipelineConfig(),
                       policy: MissingSidePolicy = MissingSidePolicy.REJECT
                       ) -> tuple[LabeledDataset, list[WalkOutcome]]:
    """In-memory convenience: dataset of the walks that succeeded, plus the skipped ones."""
    outcomes = process_walks(((w.walk_id, w) for w in walks), cfg, policy)
    good = [o for o in outcomes if o.ok]
    data = LabeledDataset.from_rows([(o.walk_id, o.label, o.features.values) for o in good])
    return data, [o for o in outcomes if not o.ok]
