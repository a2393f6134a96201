"""Feature extraction from computed spectra and comparison with closed-form predictions."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from hybrid_eom.errors import ImaginaryPrediction
from hybrid_eom.model import SystemParams
from hybrid_eom.nms import NmsSpectrum, prominent_peaks
from hybrid_eom.numerics import Extremum, SpectrumSeries, find_extrema
from hybrid_eom.probe import hybrid_poles, omia_peak_prediction, omit_minima_prediction

OMIT_TOL = 0.02
OMIA_RTOL = 0.05
ZERO_TOL = 0.005

CLASS_OF_KIND = {"minimum": "transparency_minimum", "maximum": "absorption_peak"}


@dataclass(frozen=True)
class Feature:
    x: float
    value: float
    kind: str
    classification: str
    width: Optional[float] = None


@dataclass(frozen=True)
class Match:
    source: str
    predicted: float
    found: float
    deviation: float
    tolerance: float
    passed: bool


@dataclass
class FeatureReport:
    features: list[Feature] = field(default_factory=list)
    matches: list[Match] = field(default_factory=list)
    unmatched_predictions: list[tuple[str, float]] = field(default_factory=list)
    unmatched_features: list[Feature] = field(default_factory=list)

    def of(self, classification: str) -> list[Feature]:
        return [f for f in self.features if f.classification == classification]

    @property
    def minima(self) -> list[Feature]:
        return self.of("transparency_minimum")

    @property
    def maxima(self) -> list[Feature]:
        return self.of("absorption_peak")

    @property
    def all_passed(self) -> bool:
        return bool(self.matches) and all(m.passed for m in self.matches) and not self.unmatched_predictions

    def to_dict(self) -> dict:
        return {
            "features": [dataclasses.asdict(f) for f in self.features],
            "matches": [dataclasses.asdict(m) for m in self.matches],
            "unmatched_predictions": [
                {"source": s, "predicted": x} for s, x in self.unmatched_predictions
            ],
            "unmatched_features": [dataclasses.asdict(f) for f in self.unmatched_features],
            "all_passed": self.all_passed,
        }


def _crossing(x, y, i, level, step, below):
    """Walk from sample ``i`` in direction ``step`` until ``y`` crosses ``level``."""
    j = i
    while 0 <= j + step < len(y):
        nxt = j + step
        inside = y[nxt] < level if below else y[nxt] > level
        if not inside:
            t = (level - y[j]) / (y[nxt] - y[j])
            return x[j] + t * (x[nxt] - x[j])
        j = nxt
    return None


def half_depth_width(x, y, ext: Extremum, others: Iterable[Extremum]) -> Optional[float]:
    """Full width at half depth of a dip (or half height of a peak).

    Depth is measured against the nearer-in-level of the two neighbouring
    opposite extrema; a side without one uses the extreme sample on that side.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i = ext.index
    is_min = ext.kind == "minimum"
    opp = [e for e in others if e.kind != ext.kind]
    left = [e for e in opp if e.index < i]
    right = [e for e in opp if e.index > i]
    pick = np.max if is_min else np.min
    ref_l = y[left[-1].index] if left else pick(y[: i + 1])
    ref_r = y[right[0].index] if right else pick(y[i:])
    v = y[i]
    depth = min(abs(ref_l - v), abs(ref_r - v))
    if depth == 0:
        return None
    level = v + depth / 2 if is_min else v - depth / 2
    xl = _crossing(x, y, i, level, -1, below=is_min)
    xr = _crossing(x, y, i, level, +1, below=is_min)
    if xl is None or xr is None:
        return None
    return float(xr - xl)


def extract_probe_features(s: SpectrumSeries) -> FeatureReport:
    """Classify the extrema of the absorption ``Re eps_T`` and measure their widths."""
    ext = find_extrema(s, "both", part="real")
    y = np.real(s.y)
    feats = [
        Feature(e.x, e.value, e.kind, CLASS_OF_KIND[e.kind], half_depth_width(s.x, y, e, ext))
        for e in ext
    ]
    return FeatureReport(features=feats)


def predictions_for(p: SystemParams, sources: Iterable[str]) -> list[tuple[str, str, float]]:
    """``(source, classification, position)`` triples."""
    out = []
    for src in sources:
        if src == "omit_minima":
            try:
                xs = sorted(set(omit_minima_prediction(p)))
            except ImaginaryPrediction:
                xs = []
            out += [(src, "transparency_minimum", x) for x in xs]
        elif src == "omia_peaks":
            out += [(src, "absorption_peak", x) for x in sorted(set(omia_peak_prediction(p)))]
        elif src == "zero_damping_poles":
            poles = hybrid_poles(p).poles
            xs = sorted({round(pl.imag, 15) for pl in poles if abs(pl.imag) > 1e-12})
            out += [(src, "transparency_minimum", x) for x in xs]
        else:
            raise KeyError(f"unknown prediction source {src!r}")
    return out


def compare_predictions(
    report: FeatureReport,
    p: SystemParams,
    tol: float = OMIT_TOL,
    peak_rtol: float = OMIA_RTOL,
    zero_tol: float = ZERO_TOL,
    sources: Iterable[str] = ("omit_minima", "omia_peaks"),
) -> FeatureReport:
    """Nearest-neighbour matching of found features to predicted positions.

    Transparency minima use the absolute tolerance ``tol``; absorption peaks
    use ``peak_rtol`` relative to the predicted position, or ``zero_tol`` for
    a prediction at zero. Features and predictions left over are recorded.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    preds = predictions_for(p, sources)
    matches, unmatched_preds = [], []
    used: set[int] = set()
    for cls in ("transparency_minimum", "absorption_peak"):
        cand = [(i, f) for i, f in enumerate(report.features) if f.classification == cls]
        pcls = [(src, x) for src, c, x in preds if c == cls]
        pairs = sorted(
            ((abs(f.x - x), k, i) for k, (_, x) in enumerate(pcls) for i, f in cand),
        )
        taken_p: set[int] = set()
        for dist, k, i in pairs:
            if k in taken_p or i in used:
                continue
            taken_p.add(k)
            used.add(i)
            src, x = pcls[k]
            f = report.features[i]
            if cls == "transparency_minimum":
                t = tol
            else:
                t = zero_tol if x == 0 else peak_rtol * abs(x)
            dev = abs(f.x - x)
            matches.append(Match(src, x, f.x, dev, t, dev <= t))
        unmatched_preds += [pcls[k] for k in range(len(pcls)) if k not in taken_p]
    matched_cls = {c for _, c, _ in preds}
    unmatched_feats = [
        f for i, f in enumerate(report.features) if i not in used and f.classification in matched_cls
    ]
    return FeatureReport(report.features, matches, unmatched_preds, unmatched_feats)


def count_nms_peaks(s: NmsSpectrum) -> int:
    kept, _ = prominent_peaks(s.omega, s.s_x)
    return len(kept)


def nms_report(s: NmsSpectrum, expected: Optional[int] = None, quoted=None, tol: float = 0.1) -> dict:
    """Peak summary; records the deviation from an expected count and quoted positions."""
    out = {
        "peak_count": s.peak_count,
        "peak_positions": s.peak_positions,
        "peak_heights": s.peak_heights,
        "all_local_maxima": s.all_maxima,
        "skipped": list(s.skipped),
    }
    if expected is not None:
        out["expected_peak_count"] = expected
        out["count_deviation"] = s.peak_count - expected
        out["count_matches"] = s.peak_count == expected
    if quoted is not None:
        near = {}
        for q in quoted:
            hits = [x for x in s.peak_positions if abs(x - q) <= tol]
            near[str(q)] = min(hits, key=lambda x: abs(x - q)) if hits else None
        out["quoted_positions"] = near
        out["quoted_positions_found"] = all(v is not None for v in near.values())
    return out
