"""Emission mitigation policies: PEI resampling and stability-score gating.

Both policies transform a partial stream into the stream a user would
actually see, so the standard stability metrics apply directly to the
result and latency/stability trade-off sweeps fall out.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidIntervalError, NonFiniteValueError, SingleClassError
from .metrics import corpus_stability
from .normalize import render_tokens
from .stream import Corpus, PartialStream, Segment

FEATURE_NAMES = ("age_ms", "age_segments", "right_context", "token_len")


@dataclass(frozen=True)
class GateFeatures:
    """Per-token stability features.

    age_ms / age_segments measure how long the token has survived
    unchanged at its position; right_context and token_len describe the
    token inside its current hypothesis.
    """

    age_ms: int
    age_segments: int
    right_context: int
    token_len: int

    def as_vector(self) -> tuple[float, float, float, float]:
        return (
            float(self.age_ms),
            float(self.age_segments),
            float(self.right_context),
            float(self.token_len),
        )


@dataclass(frozen=True)
class GateModel:
    """Logistic regression over GateFeatures with baked-in standardization."""

    weights: tuple[float, ...]
    bias: float
    feature_names: tuple[str, ...] = FEATURE_NAMES
    means: tuple[float, ...] = (0.0, 0.0, 0.0, 0.0)
    stds: tuple[float, ...] = (1.0, 1.0, 1.0, 1.0)

    def to_dict(self) -> dict:
        return {
            "feature_names": list(self.feature_names),
            "weights": list(self.weights),
            "bias": self.bias,
            "means": list(self.means),
            "stds": list(self.stds),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "GateModel":
        return cls(
            weights=tuple(obj["weights"]),
            bias=float(obj["bias"]),
            feature_names=tuple(obj["feature_names"]),
            means=tuple(obj["means"]),
            stds=tuple(obj["stds"]),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "GateModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class SweepPoint:
    knob: float
    upwr: float
    upsr: float
    mean_partial_delay_ms: float


@dataclass(frozen=True)
class FeatureRow:
    """One training example: token features plus its stable-prefix label."""

    segment_index: int
    position: int
    features: GateFeatures
    label: int


def resample_pei(stream: PartialStream, pei_ms: int) -> PartialStream:
    """Re-emit partials on a tick grid of pei_ms anchored at t = 0.

    Each tick before the final displays the most recent partial; ticks
    showing nothing new are skipped, and the final segment is always
    emitted at its own time.
    """
    if pei_ms < 1:
        raise InvalidIntervalError(f"pei_ms must be >= 1, got {pei_ms}")
    partials = stream.segments[:-1]
    final = stream.final
    out: list[Segment] = []
    idx = -1
    for tick in range(pei_ms, final.t_ms, pei_ms):
        while idx + 1 < len(partials) and partials[idx + 1].t_ms <= tick:
            idx += 1
        if idx < 0:
            continue
        raw = partials[idx].raw
        if out and raw == out[-1].raw:
            continue
        out.append(Segment.make(tick, raw, False))
    out.append(final)
    return PartialStream(utterance_id=stream.utterance_id, segments=tuple(out))


def segment_features(stream: PartialStream) -> list[list[GateFeatures]]:
    """GateFeatures for every token of every non-final segment."""
    segs = stream.segments
    table: list[list[GateFeatures]] = []
    for i, seg in enumerate(segs[:-1]):
        row = []
        for j, tok in enumerate(seg.tokens):
            k = i
            while k > 0 and len(segs[k - 1].tokens) > j and segs[k - 1].tokens[j] == tok:
                k -= 1
            row.append(
                GateFeatures(
                    age_ms=seg.t_ms - segs[k].t_ms,
                    age_segments=i - k + 1,
                    right_context=len(seg.tokens) - 1 - j,
                    token_len=len(tok),
                )
            )
        table.append(row)
    return table


def extract_features(stream: PartialStream) -> list[FeatureRow]:
    """Feature rows with labels: 1 iff the token prefix ending here equals
    the corresponding prefix of the final hypothesis."""
    final_tokens = stream.final.tokens
    rows = []
    for i, feats in enumerate(segment_features(stream)):
        seg_tokens = stream.segments[i].tokens
        prefix_ok = True
        for j, f in enumerate(feats):
            prefix_ok = (
                prefix_ok
                and j < len(final_tokens)
                and seg_tokens[j] == final_tokens[j]
            )
            rows.append(FeatureRow(i, j, f, int(prefix_ok)))
    return rows


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def logistic_score(model: GateModel, x: GateFeatures) -> float:
    """Stability score in (0, 1) for one token."""
    z = model.bias
    for w, v, m, s in zip(model.weights, x.as_vector(), model.means, model.stds):
        if not math.isfinite(v):
            raise NonFiniteValueError(f"non-finite feature value {v!r}")
        z += w * (v - m) / s
    if not math.isfinite(z):
        raise NonFiniteValueError("non-finite logit")
    return _sigmoid(z)


def logloss_and_grad(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray
) -> tuple[float, np.ndarray, float]:
    """Mean binary log-loss and its analytic gradient."""
    z = X @ w + b
    loss = float(np.mean(np.logaddexp(0.0, -z) + (1.0 - y) * z))
    p = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
    dz = (p - y) / len(y)
    return loss, X.T @ dz, float(np.sum(dz))


def fit_logistic(
    X: np.ndarray,
    y: np.ndarray,
    epochs: int,
    learning_rate: float,
    seed: int,
) -> tuple[np.ndarray, float, np.ndarray, np.ndarray, list[float]]:
    """Full-batch gradient descent on standardized features.

    Returns (weights, bias, means, stds, per-epoch losses); weights act
    on standardized features.
    """
    if epochs < 1 or learning_rate <= 0:
        raise ValueError("epochs must be >= 1 and learning_rate > 0")
    classes = set(np.unique(y).tolist())
    if classes != {0.0, 1.0} and classes != {0, 1}:
        raise SingleClassError(f"training set needs both classes, got {classes}")
    means = X.mean(axis=0)
    stds = np.maximum(X.std(axis=0), 1e-9)
    Xs = (X - means) / stds
    rng = np.random.default_rng(seed)
    w = rng.normal(0.0, 0.01, X.shape[1])
    b = 0.0
    losses = []
    for _ in range(epochs):
        loss, dw, db = logloss_and_grad(w, b, Xs, y)
        if not math.isfinite(loss):
            raise NonFiniteValueError("training loss diverged")
        losses.append(loss)
        w = w - learning_rate * dw
        b = b - learning_rate * db
    return w, b, means, stds, losses


def train_gate(
    corpus: Corpus, epochs: int, learning_rate: float, seed: int
) -> GateModel:
    """Train the stability gate on prefix-stability labels from a corpus."""
    rows = [row for stream in corpus for row in extract_features(stream)]
    X = np.array([r.features.as_vector() for r in rows], dtype=float)
    y = np.array([r.label for r in rows], dtype=float)
    w, b, means, stds, _ = fit_logistic(X, y, epochs, learning_rate, seed)
    return GateModel(
        weights=tuple(float(v) for v in w),
        bias=float(b),
        means=tuple(float(v) for v in means),
        stds=tuple(float(v) for v in stds),
    )


def apply_gate(
    stream: PartialStream, model: GateModel, threshold: float
) -> PartialStream:
    """Display only the longest token prefix whose tokens all score at or
    above the threshold; the final segment is shown unmodified.

    A fully passing segment keeps its original rendering, so threshold 0
    is the identity gate; truncated prefixes are re-rendered with single
    spaces and standard symbol attachment. Repaints identical to the
    previous display are dropped.
    """
    if not math.isfinite(threshold):
        raise NonFiniteValueError("threshold must be finite")
    feats = segment_features(stream)
    out: list[Segment] = []
    for i, seg in enumerate(stream.segments[:-1]):
        k = 0
        for f in feats[i]:
            if logistic_score(model, f) >= threshold:
                k += 1
            else:
                break
        raw = seg.raw if k == len(seg.tokens) else render_tokens(seg.tokens[:k])
        if out:
            if raw == out[-1].raw:
                continue
        elif raw == "":
            continue
        out.append(Segment.make(seg.t_ms, raw, False))
    out.append(stream.final)
    return PartialStream(utterance_id=stream.utterance_id, segments=tuple(out))


def sweep(
    corpus: Corpus,
    policy: str,
    knob_values: Sequence[float],
    model: Optional[GateModel] = None,
) -> list[SweepPoint]:
    """Latency/stability trade-off curve for one mitigation policy.

    policy is "pei" (knobs in ms) or "threshold" (knobs are stability
    score thresholds; model required).
    """
    if not knob_values:
        raise ValueError("knob_values must be non-empty")
    if policy == "threshold" and model is None:
        raise ValueError("threshold policy requires a model")
    if policy not in ("pei", "threshold"):
        raise ValueError(f"unknown policy {policy!r}")
    points = []
    for knob in knob_values:
        if policy == "pei":
            streams = tuple(resample_pei(s, int(knob)) for s in corpus)
        else:
            streams = tuple(apply_gate(s, model, knob) for s in corpus)
        cs = corpus_stability(Corpus(streams=streams))
        points.append(
            SweepPoint(
                knob=float(knob),
                upwr=cs.upwr,
                upsr=cs.upsr,
                mean_partial_delay_ms=cs.mean_partial_delay_ms,
            )
        )
    return points


def format_sweep(points: Sequence[SweepPoint]) -> str:
    """Plot-ready CSV table with fixed 6-decimal formatting."""
    lines = ["knob,upwr,upsr,mean_partial_delay_ms"]
    for p in points:
        lines.append(
            f"{p.knob:.6f},{p.upwr:.6f},{p.upsr:.6f},{p.mean_partial_delay_ms:.6f}"
        )
    return "\n".join(lines) + "\n"
