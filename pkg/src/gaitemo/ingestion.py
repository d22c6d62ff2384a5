"""Text file formats: frame CSV, manifest CSV, features CSV, model and report files.

Frame CSV::

    # walk_id=w001
    # subject_id=s01
    # camera_id=kinect1
    # label=Natural
    # sample_rate=30
    frame_index,timestamp,SpineBase_x,SpineBase_y,SpineBase_z,...,ThumbRight_z
    0,0,0.01,-0.2,2.5,...

The ``#`` directives are optional; missing metadata falls back to the file
stem / empty strings / Natural / 30 Hz, and callers may override any of it.
All real numbers are written with 17 significant digits so every file
round-trips exactly. Parsers reject rather than coerce.
"""
from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .classify import ClassifierModel, EvalReport, GaussianNBModel, LinearSVMModel
from .errors import (BadFieldCount, CorruptPayload, DuplicateWalkId, MalformedHeader,
                     MalformedRow, NonFiniteValue, NonMonotonicIndex, UnknownLabel,
                     UnknownModelKind, VersionMismatch, WidthMismatch)
from .features import FeatureVector
from .skeleton import DEFAULT_SAMPLE_RATE, JointSet, EmotionLabel, Walk, column_names

FRAME_HEADER = ["frame_index", "timestamp"] + column_names(JointSet.ALL25)
MANIFEST_HEADER = ["walk_id", "file_path", "subject_id", "camera_id", "label"]
MODEL_FORMAT = "gaitemo-model"
MODEL_VERSION = 1
REPORT_FORMAT = "gaitemo-report"

PathLike = str | os.PathLike


def fmt(x: float) -> str:
    """Exact decimal text for a float (17 significant digits)."""
    return format(float(x), ".17g")


def _parse_real(text: str, line: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise NonFiniteValue(line, col, text) from None
    if not math.isfinite(value):
        raise NonFiniteValue(line, col, text)
    return value


def _read_lines(path: PathLike) -> list[str]:
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    return text.split("\n")


# Frame CSV ------------------------------------------------------------------

def write_frames_csv(path: PathLike, w: Walk) -> None:
    out = [f"# walk_id={w.walk_id}", f"# subject_id={w.subject_id}",
           f"# camera_id={w.camera_id}", f"# label={w.label}",
           f"# sample_rate={fmt(w.sample_rate)}", ",".join(FRAME_HEADER)]
    for fr in w.frames:
        coords = ",".join(fmt(v) for v in np.asarray(fr.positions).ravel())
        out.append(f"{fr.frame_index},{fmt(fr.timestamp)},{coords}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8", newline="")


def parse_frames_csv(path: PathLike, *, walk_id: str | None = None,
                     subject_id: str | None = None, camera_id: str | None = None,
                     label: EmotionLabel | None = None,
                     sample_rate: float | None = None) -> Walk:
    lines = _read_lines(path)
    meta: dict[str, str] = {}
    pos = 0
    while pos < len(lines) and lines[pos].startswith("#"):
        key, sep, value = lines[pos][1:].strip().partition("=")
        if sep:
            meta[key.strip()] = value.strip()
        pos += 1
    if pos >= len(lines) or lines[pos].rstrip("\r").split(",") != FRAME_HEADER:
        raise MalformedHeader(f"{path}: header must be frame_index,timestamp,<joint>_x|y|z x25 "
                              "in canonical joint order")
    n_fields = len(FRAME_HEADER)
    indices: list[int] = []
    stamps: list[float] = []
    coords: list[list[float]] = []
    for lineno, raw in enumerate(lines[pos + 1:], start=pos + 2):
        raw = raw.rstrip("\r")
        if not raw:
            continue
        fields = raw.split(",")
        if len(fields) != n_fields:
            raise BadFieldCount(lineno, n_fields, len(fields))
        try:
            idx = int(fields[0])
        except ValueError:
            raise NonFiniteValue(lineno, 1, fields[0]) from None
        if idx < 0 or (indices and idx <= indices[-1]):
            raise NonMonotonicIndex(lineno)
        indices.append(idx)
        stamps.append(_parse_real(fields[1], lineno, 2))
        coords.append([_parse_real(v, lineno, c) for c, v in enumerate(fields[2:], start=3)])

    try:
        rate = sample_rate if sample_rate is not None else float(meta.get("sample_rate", DEFAULT_SAMPLE_RATE))
    except ValueError:
        raise MalformedHeader(f"{path}: bad sample_rate directive") from None
    if label is None:
        label = EmotionLabel.parse(meta["label"]) if "label" in meta else EmotionLabel.Natural
    positions = np.array(coords, dtype=float).reshape(len(coords), 25, 3)
    return Walk.from_arrays(
        positions,
        walk_id=walk_id if walk_id is not None else meta.get("walk_id", Path(path).stem),
        subject_id=subject_id if subject_id is not None else meta.get("subject_id", ""),
        camera_id=camera_id if camera_id is not None else meta.get("camera_id", ""),
        label=label, sample_rate=rate, frame_index=indices, timestamps=stamps)


# Manifest -------------------------------------------------------------------

@dataclass(frozen=True)
class ManifestEntry:
    walk_id: str
    file_path: Path
    subject_id: str
    camera_id: str
    label: EmotionLabel

    def load(self) -> Walk:
        """Read the walk file; manifest metadata wins over file directives."""
        return parse_frames_csv(self.file_path, walk_id=self.walk_id, subject_id=self.subject_id,
                                camera_id=self.camera_id, label=self.label)


@dataclass(frozen=True)
class Manifest:
    entries: tuple[ManifestEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def load_manifest(path: PathLike) -> Manifest:
    """Parse a manifest; relative file paths resolve against the manifest's directory.

    Referenced walk files are not checked here, only when loaded.
    """
    base = Path(path).parent
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != MANIFEST_HEADER:
            raise MalformedHeader(f"{path}: manifest header must be {','.join(MANIFEST_HEADER)}")
        entries = []
        seen = set()
        for row in reader:
            lineno = reader.line_num
            if not row:
                continue
            if len(row) != len(MANIFEST_HEADER):
                raise BadFieldCount(lineno, len(MANIFEST_HEADER), len(row))
            walk_id, file_path, subject_id, camera_id, label = row
            if walk_id in seen:
                raise DuplicateWalkId(f"line {lineno}: duplicate walk_id {walk_id!r}")
            seen.add(walk_id)
            try:
                parsed = EmotionLabel.parse(label)
            except UnknownLabel:
                raise UnknownLabel(label, lineno) from None
            fp = Path(file_path)
            entries.append(ManifestEntry(walk_id, fp if fp.is_absolute() else base / fp,
                                         subject_id, camera_id, parsed))
    return Manifest(tuple(entries))


def write_manifest(path: PathLike, entries: Iterable[ManifestEntry], relative_to: PathLike | None = None) -> None:
    base = Path(relative_to) if relative_to is not None else None
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        for e in entries:
            fp = Path(e.file_path)
            if base is not None:
                fp = Path(os.path.relpath(fp, base))
            writer.writerow([e.walk_id, fp.as_posix(), e.subject_id, e.camera_id, str(e.label)])


# Features CSV -----------------------------------------------------------------

FeatureRow = tuple[str, EmotionLabel, "FeatureVector | Sequence[float]"]


def _values(v) -> np.ndarray:
    return np.asarray(v.values if isinstance(v, FeatureVector) else v, dtype=float)


def write_features_csv(path: PathLike, rows: Sequence[FeatureRow], width: int | None = None) -> None:
    """Write ``walk_id,label,f_1..f_W``; an empty table needs ``width`` (default 168)."""
    vectors = [_values(r[2]) for r in rows]
    widths = {len(v) for v in vectors}
    if len(widths) > 1:
        raise WidthMismatch(f"feature vectors have mixed widths {sorted(widths)}")
    if widths:
        found = widths.pop()
        if width is not None and width != found:
            raise WidthMismatch(f"expected width {width}, got {found}")
        width = found
    elif width is None:
        width = 168
    out = [",".join(["walk_id", "label"] + [f"f_{i}" for i in range(1, width + 1)])]
    for (walk_id, label, _), v in zip(rows, vectors):
        if "," in walk_id or "\n" in walk_id:
            raise MalformedRow(f"walk_id {walk_id!r} contains a separator")
        out.append(",".join([walk_id, str(label)] + [fmt(x) for x in v]))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8", newline="")


def read_features_csv(path: PathLike) -> list[tuple[str, EmotionLabel, np.ndarray]]:
    lines = _read_lines(path)
    header = lines[0].rstrip("\r").split(",") if lines else []
    if len(header) < 3 or header[:2] != ["walk_id", "label"] or \
            header[2:] != [f"f_{i}" for i in range(1, len(header) - 1)]:
        raise MalformedHeader(f"{path}: features header must be walk_id,label,f_1..f_W")
    width = len(header) - 2
    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        raw = raw.rstrip("\r")
        if not raw:
            continue
        fields = raw.split(",")
        if len(fields) != width + 2:
            raise MalformedRow(f"line {lineno}: expected {width + 2} fields, got {len(fields)}")
        try:
            label = EmotionLabel.parse(fields[1])
            values = np.array([float(x) for x in fields[2:]])
        except (UnknownLabel, ValueError) as exc:
            raise MalformedRow(f"line {lineno}: {exc}") from None
        if not np.all(np.isfinite(values)):
            raise MalformedRow(f"line {lineno}: non-finite feature value")
        rows.append((fields[0], label, values))
    return rows


# Keyed text files (models, reports) -------------------------------------------

def _keyed(lines: Iterable[tuple[str, object]]) -> str:
    return "".join(f"{k}: {v}\n" for k, v in lines)


def _reals(values) -> str:
    return " ".join(fmt(v) for v in np.ravel(values))


def _parse_keyed(text: str, fmt_name: str, path) -> dict[str, str]:
    lines = text.split("\n")
    if not lines or lines[-1] != "" or lines[-2:-1] != ["end: ok"]:
        raise CorruptPayload(f"{path}: file is truncated or not terminated")
    out: dict[str, str] = {}
    for raw in lines[:-2]:
        key, sep, value = raw.partition(": ")
        if not sep or key in out:
            raise CorruptPayload(f"{path}: bad line {raw[:40]!r}")
        out[key] = value
    if out.get("format") != fmt_name:
        raise CorruptPayload(f"{path}: not a {fmt_name} file")
    return out


def _real_array(text: str, path, key: str) -> np.ndarray:
    try:
        arr = np.array([float(t) for t in text.split()]) if text.strip() else np.zeros(0)
    except ValueError:
        raise CorruptPayload(f"{path}: field {key!r} is not numeric") from None
    if not np.all(np.isfinite(arr)):
        raise CorruptPayload(f"{path}: field {key!r} has non-finite values")
    return arr


def save_model(path: PathLike, m: ClassifierModel) -> None:
    common = [("format", MODEL_FORMAT), ("version", MODEL_VERSION), ("kind", m.kind),
              ("classes", " ".join(str(c) for c in m.classes)), ("width", m.width)]
    if isinstance(m, GaussianNBModel):
        body = [("variance_floor", fmt(m.variance_floor)), ("priors", _reals(m.priors))]
        for c, mu, var in zip(m.classes, m.means, m.variances):
            body += [(f"mean.{c}", _reals(mu)), (f"variance.{c}", _reals(var))]
    elif isinstance(m, LinearSVMModel):
        body = [("C", fmt(m.C)), ("bias", fmt(m.bias)), ("weights", _reals(m.weights)),
                ("standardized", int(m.shift is not None)),
                ("shift", _reals(m.shift) if m.shift is not None else ""),
                ("scale", _reals(m.scale) if m.scale is not None else ""),
                ("iterations", m.iterations),
                ("kkt_violations_remaining", m.kkt_violations_remaining),
                ("converged", int(m.converged))]
    else:
        raise UnknownModelKind(f"cannot save {type(m).__name__}")
    Path(path).write_text(_keyed(common + body + [("end", "ok")]), encoding="utf-8", newline="")


def load_model(path: PathLike) -> ClassifierModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise CorruptPayload(f"{path}: not UTF-8 text") from None
    # kind and version are checked before the terminator so they report precisely
    head = dict(line.partition(": ")[::2] for line in text.split("\n")[:4] if ": " in line)
    if head.get("format") == MODEL_FORMAT:
        if head.get("version") != str(MODEL_VERSION):
            raise VersionMismatch(f"{path}: model version {head.get('version')!r}, "
                                  f"expected {MODEL_VERSION}")
        if head.get("kind") not in ("gnb", "svm"):
            raise UnknownModelKind(f"{path}: unknown model kind {head.get('kind')!r}")
    kv = _parse_keyed(text, MODEL_FORMAT, path)
    try:
        classes = tuple(EmotionLabel.parse(c) for c in kv["classes"].split())
        width = int(kv["width"])
        if kv["kind"] == "gnb":
            priors = _real_array(kv["priors"], path, "priors")
            means = np.array([_real_array(kv[f"mean.{c}"], path, "mean") for c in classes])
            variances = np.array([_real_array(kv[f"variance.{c}"], path, "variance") for c in classes])
            if priors.shape != (len(classes),) or means.shape != (len(classes), width) \
                    or variances.shape != means.shape:
                raise CorruptPayload(f"{path}: array shapes inconsistent with width {width}")
            return GaussianNBModel(classes, priors, means, variances, float(kv["variance_floor"]))
        weights = _real_array(kv["weights"], path, "weights")
        shift = scale = None
        if kv["standardized"] == "1":
            shift = _real_array(kv["shift"], path, "shift")
            scale = _real_array(kv["scale"], path, "scale")
        if weights.shape != (width,) or len(classes) != 2 or \
                (shift is not None and (shift.shape != (width,) or scale.shape != (width,))):
            raise CorruptPayload(f"{path}: array shapes inconsistent with width {width}")
        return LinearSVMModel(classes, weights, float(kv["bias"]), float(kv["C"]), shift, scale,
                              int(kv["iterations"]), int(kv["kkt_violations_remaining"]),
                              kv["converged"] == "1")
    except (KeyError, ValueError, UnknownLabel) as exc:
        if isinstance(exc, CorruptPayload):
            raise
        raise CorruptPayload(f"{path}: {exc!r}") from None


def report_to_keyed(r: EvalReport) -> str:
    lines = [("format", REPORT_FORMAT), ("classifier", r.classifier),
             ("classes", " ".join(str(c) for c in r.classes)), ("k", r.k), ("seed", r.seed),
             ("total", r.total), ("accuracy", fmt(r.accuracy)),
             ("confusion", ";".join(" ".join(str(int(v)) for v in row) for row in r.confusion)),
             ("fold_accuracies", _reals(r.fold_accuracies))]
    lines += [(f"note.{i}", n) for i, n in enumerate(r.notes)]
    return _keyed(lines + [("end", "ok")])


def write_report(path: PathLike, r: EvalReport) -> None:
    Path(path).write_text(report_to_keyed(r), encoding="utf-8", newline="")


def read_report(path: PathLike) -> EvalReport:
    kv = _parse_keyed(Path(path).read_text(encoding="utf-8"), REPORT_FORMAT, path)
    try:
        confusion = np.array([[int(v) for v in row.split()] for row in kv["confusion"].split(";")],
                             dtype=np.int64)
        notes = [kv[k] for k in sorted((k for k in kv if k.startswith("note.")),
                                       key=lambda s: int(s.split(".")[1]))]
        return EvalReport(kv["classifier"], tuple(EmotionLabel.parse(c) for c in kv["classes"].split()),
                          confusion, _real_array(kv["fold_accuracies"], path, "fold_accuracies").tolist(),
                          int(kv["seed"]), int(kv["k"]), notes)
    except (KeyError, ValueError) as exc:
        raise CorruptPayload(f"{path}: {exc!r}") from None
