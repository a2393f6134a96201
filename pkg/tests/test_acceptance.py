"""Acceptance criteria, one check per criterion.

Run under pytest (a summary line per criterion is printed at the end of the
session) or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import time

import numpy as np
import pytest

from hybrid_eom import SystemParams, analysis, checks, nms, probe, steady_state
from hybrid_eom.presets import FIG2, FIG3, FIG4, FIG5, FIG5A_QUOTED_POSITIONS, FIG5_EXPECTED_PEAKS

PROBE_GRID = np.linspace(-1.0, 1.0, 4001)
NMS_GRID = np.linspace(0.05, 2.0, 4001)

RESULTS: dict[int, tuple[bool, str]] = {}


def _features(p: SystemParams) -> analysis.FeatureReport:
    return analysis.extract_probe_features(probe.probe_spectrum(p, PROBE_GRID))


def criterion_1():
    mins = [f.x for f in _features(FIG3["a"]).minima]
    ok = len(mins) == 2 and all(abs(abs(x) - 0.177) <= 0.02 for x in mins) and mins[0] < 0 < mins[1]
    return ok, f"minima at {[round(x, 4) for x in mins]}"


def criterion_2():
    mins = [f.x for f in _features(FIG3["d"]).minima]
    ok = len(mins) == 2 and mins[0] < 0 < mins[1] and all(0.48 <= abs(x) <= 0.58 for x in mins)
    return ok, f"minima at {[round(x, 4) for x in mins]} (closed form 0.5196)"


def criterion_3():
    widths = []
    for key in "abc":
        mins = _features(FIG3[key]).minima
        if len(mins) != 2 or any(f.width is None for f in mins):
            return False, f"set {key}: windows not resolved"
        widths.append([f.width for f in mins])
    ok = all(widths[i + 1][j] < widths[i][j] for i in range(2) for j in range(2))
    return ok, "widths " + " -> ".join(f"{w[0]:.4g}/{w[1]:.4g}" for w in widths)


def criterion_4():
    r = probe.omia_peak_prediction(FIG4["a"])[1]
    maxs = sorted(f.x for f in _features(FIG4["a"]).maxima)
    if len(maxs) != 3:
        return False, f"{len(maxs)} maxima at {maxs}"
    left, mid, right = maxs
    ok = abs(mid) <= 0.005 and abs(right - 0.3012) <= 0.05 * 0.3012 and abs(-left - 0.3012) <= 0.05 * 0.3012
    return ok, f"maxima at {[round(x, 4) for x in maxs]}, closed form +-{r:.5f}"


def _central_and_sides(p):
    maxs = sorted(_features(p).maxima, key=lambda f: f.x)
    centre = min(maxs, key=lambda f: abs(f.x))
    sides = [f.x for f in maxs if f is not centre]
    return centre, sides


def criterion_5():
    c_a, s_a = _central_and_sides(FIG4["a"])
    c_d, s_d = _central_and_sides(FIG4["d"])
    if len(s_a) != 2 or len(s_d) != 2 or c_a.width is None or c_d.width is None:
        return False, "peak structure not resolved"
    narrower = c_d.width < c_a.width
    sep_a, sep_d = s_a[1] - s_a[0], s_d[1] - s_d[0]
    wider_apart = sep_d > sep_a
    detail = (
        f"central width {c_a.width:.4g} -> {c_d.width:.4g} ({'narrower' if narrower else 'NOT narrower'}); "
        f"side separation {sep_a:.4f} -> {sep_d:.4f} ({'larger' if wider_apart else 'NOT larger'})"
    )
    return narrower and wider_apart, detail


def criterion_6():
    res = checks.check_partial_fractions(n_sets=100)
    return res.passed, f"max relative error {res.metric:.3g}"


def criterion_7():
    lam = np.linspace(0.0, 1.0, 2001)
    rng = np.random.default_rng(7)
    sets = list(FIG3.values()) + list(FIG4.values()) + list(FIG5.values())
    sets += [checks.random_red_sideband(rng) for _ in range(50)]
    worst = 0.0
    for p in sets:
        plus = probe.epsilon_T_values(p, 1 + lam)
        minus = probe.epsilon_T_values(p, 1 - lam)
        worst = max(worst, float(np.max(np.abs(plus.real - minus.real))), float(np.max(np.abs(plus.imag + minus.imag))))
    return worst < 1e-9, f"max asymmetry {worst:.3g} over {len(sets)} sets"


def criterion_8():
    counts = {}
    for key in "abcd":
        counts[key] = nms.nms_spectrum(FIG5[key], NMS_GRID).peak_count
    exact = all(counts[k] == FIG5_EXPECTED_PEAKS[k] for k in "abcd")
    detail = "counts " + " ".join(f"{k}={counts[k]}" for k in "abcd") + " (expected 4 3 3 2)"
    if exact:
        return True, detail
    # fallback: physicality holds, deviation reported, quoted positions of (a) survive
    phys, _ = criterion_9()
    rep = analysis.nms_report(
        nms.nms_spectrum(FIG5["a"], NMS_GRID), FIG5_EXPECTED_PEAKS["a"], FIG5A_QUOTED_POSITIONS
    )
    reported = "count_deviation" in rep
    found = rep["quoted_positions"]
    ok = phys and reported and rep["quoted_positions_found"]
    detail += f"; fallback: quoted positions matched {found}"
    return ok, detail


def criterion_9():
    worst_imag = worst_even = 0.0
    lowest = np.inf
    for p in FIG5.values():
        raw = nms.raw_spectrum(p, NMS_GRID)
        raw_m = nms.raw_spectrum(p, -NMS_GRID)
        worst_imag = max(worst_imag, float(np.max(np.abs(raw.imag) / (1 + np.abs(raw.real)))))
        worst_even = max(worst_even, float(np.max(np.abs(raw.real - raw_m.real) / np.maximum(1.0, np.abs(raw.real)))))
        lowest = min(lowest, float(raw.real.min()))
    ok = worst_imag < 1e-12 and worst_even <= 1e-12 and lowest >= -1e-12
    return ok, f"imag {worst_imag:.2g}, evenness {worst_even:.2g}, min S_x {lowest:.3g}"


def criterion_10():
    p = FIG2["thick"]
    grid = np.linspace(0.0, 10.0, 2001)
    branch = steady_state.sweep_pump(p, grid)
    cubic = steady_state.photon_cubic(p)
    three = [E for E, r in zip(branch.pump, branch.roots) if len(r) == 3]
    if not three:
        return False, "no three-root window"
    worst_res = worst_gap = 0.0
    for E in three[:: max(1, len(three) // 20)]:
        fast = cubic.roots(E)
        slow = steady_state.brute_force_roots(cubic, E)
        if len(fast) != 3 or len(slow) != 3 or min(fast) <= 0:
            return False, f"root mismatch at E_p={E}"
        worst_res = max(worst_res, max(abs(cubic.f(n) - E**2) / E**2 for n in fast))
        worst_gap = max(worst_gap, max(abs(a - b) for a, b in zip(fast, slow)))
    ratio, e_up, e_down = steady_state.switching_metrics(branch)
    ok = worst_res < 1e-9 and worst_gap < 1e-6
    return ok, (
        f"window E_p in [{three[0]:.3f}, {three[-1]:.3f}], residual {worst_res:.2g}, oracle gap {worst_gap:.2g}; "
        f"diagnostic switching ratio {ratio:.3f}"
    )


def criterion_11():
    p = SystemParams(G_om=0.0, G_em=0.2, g=0.1, kappa_a=0.9)
    a = abs(probe.epsilon_T(p, p.delta_a_eff).value - 4)
    q = SystemParams(G_om=0.23, G_em=0.0, g=0.0, kappa_a=2.17)
    want = 2 * q.kappa_a / (q.kappa_a / 2 + 2 * q.G_om**2 / q.gamma_b)
    b = abs(probe.epsilon_T(q, q.omega_b).value - want)
    return a <= 1e-12 and b <= 1e-12, f"errors {a:.2g}, {b:.2g}"


def criterion_12():
    slopes = []
    for key in "ad":
        p = FIG3[key]
        for x in probe.omit_minima_prediction(p):
            slopes.append(probe.dispersion_slope(p, p.omega_b + x))
    return all(s < 0 for s in slopes), "slopes " + ", ".join(f"{s:.4g}" for s in slopes)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}
TITLES = {
    1: "transparency minima, double-window set",
    2: "transparency minima, strong-coupling set",
    3: "window width shrinks with optomechanical coupling",
    4: "three absorption peaks",
    5: "absorption trend with weaker qubit coupling",
    6: "partial-fraction identity",
    7: "spectrum symmetry",
    8: "normal-mode peak counts",
    9: "displacement spectrum physicality",
    10: "bistability S-curve",
    11: "trivial-limit exactness",
    12: "anomalous dispersion at the windows",
}


def evaluate(i: int) -> tuple[bool, str, float]:
    t0 = time.perf_counter()
    ok, detail = CRITERIA[i]()
    return bool(ok), detail, time.perf_counter() - t0


def summary_line(i: int, ok: bool, detail: str) -> str:
    return f"criterion {i:2d} {'PASS' if ok else 'FAIL'}  {TITLES[i]}: {detail}"


@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_criterion(i):
    ok, detail, elapsed = evaluate(i)
    RESULTS[i] = (ok, detail)
    assert elapsed < 5.0, f"criterion {i} took {elapsed:.2f} s"
    assert ok, summary_line(i, ok, detail)


if __name__ == "__main__":
    for i in sorted(CRITERIA):
        ok, detail, _ = evaluate(i)
        print(summary_line(i, ok, detail))
