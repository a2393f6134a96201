"""Oracle suites run by ``hybrid-eom check``.

Each suite returns a :class:`CheckResult`; none of them reuse the code path
they verify for computing the expected side.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from hybrid_eom import nms, numerics, probe, steady_state
from hybrid_eom.model import SystemParams, red_sideband
from hybrid_eom.presets import FIG2, FIG3, FIG4, FIG5

SEED = 20240607


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    metric: float
    detail: str


def random_red_sideband(rng: np.random.Generator) -> SystemParams:
    """Couplings in [0, 0.5]; rates spanning the preset values."""
    return red_sideband(
        SystemParams(
            G_om=rng.uniform(0, 0.5),
            G_em=rng.uniform(0, 0.5),
            g=rng.uniform(0, 0.5),
            kappa_a=rng.uniform(0.2, 2.2),
            kappa_c=10 ** rng.uniform(-5.5, -4),
            gamma_b=10 ** rng.uniform(-5, -4),
            gamma_d=10 ** rng.uniform(-5, -4),
            sigma_z=-1.0,
        )
    )


def partial_fraction_deviation(p: SystemParams, lams) -> float:
    """Largest relative gap between the direct response and its pole/residue form."""
    pr = probe.hybrid_poles(p)
    direct = probe.epsilon_T_values(p, p.omega_b + np.asarray(lams))
    via_poles = pr.epsilon_T(p, lams)
    return float(np.max(np.abs(direct - via_poles) / np.abs(direct)))


def check_cubic_roots(n: int = 2000) -> CheckResult:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(n):
        c = rng.uniform(-10, 10, 4)
        # tiny leading coefficients give roots too large for the absolute bound in float64
        if abs(c[0]) < 0.1:
            continue
        roots = numerics.solve_cubic(*c)
        scale = max(1.0, *np.abs(c))
        for r in roots:
            worst = max(worst, abs(((c[0] * r + c[1]) * r + c[2]) * r + c[3]) / scale)
        imag = sorted(r.imag for r in roots)
        if abs(imag[0] + imag[2]) > 1e-9:
            return CheckResult("cubic_roots", False, float("inf"), f"non-conjugate roots for {c}")
    return CheckResult("cubic_roots", bool(worst <= 1e-10), float(worst), "max scaled residual")


def check_partial_fractions(extra: Optional[SystemParams] = None, n_sets: int = 100) -> CheckResult:
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(n_sets):
        p = random_red_sideband(rng)
        worst = max(worst, partial_fraction_deviation(p, rng.uniform(-1, 1, 20)))
    detail = "max relative reconstruction error"
    if extra is not None:
        dev = partial_fraction_deviation(red_sideband(extra), rng.uniform(-1, 1, 20))
        worst = max(worst, dev)
        detail += f"; configured set {dev:.3g}"
    return CheckResult("partial_fractions", worst < 1e-9, worst, detail)


def check_spectrum_symmetry() -> CheckResult:
    lam = np.linspace(0.0, 1.0, 2001)
    worst = 0.0
    for p in list(FIG3.values()) + list(FIG4.values()):
        plus = probe.epsilon_T_values(p, p.omega_b + lam)
        minus = probe.epsilon_T_values(p, p.omega_b - lam)
        scale = 1 + np.abs(plus)
        worst = max(
            worst,
            float(np.max(np.abs(plus.real - minus.real) / scale)),
            float(np.max(np.abs(plus.imag + minus.imag) / scale)),
        )
    return CheckResult("spectrum_symmetry", worst < 1e-9, worst, "max even/odd mismatch")


def check_sx_physicality() -> CheckResult:
    w = np.linspace(0.05, 2.0, 4001)
    worst = 0.0
    for p in FIG5.values():
        raw = nms.raw_spectrum(p, w)
        raw_m = nms.raw_spectrum(p, -w)
        imag = np.abs(raw.imag) / (1 + np.abs(raw.real))
        even = np.abs(raw.real - raw_m.real) / (1 + np.abs(raw.real))
        worst = max(worst, float(imag.max()), float(even.max()))
        if np.any(raw.real < -1e-12):
            return CheckResult("sx_physicality", False, float(raw.real.min()), "negative S_x")
    return CheckResult("sx_physicality", worst < 1e-12, worst, "max imaginary/evenness residue")


def check_bistability_bruteforce() -> CheckResult:
    cubic = steady_state.photon_cubic(FIG2["thick"])
    worst = 0.0
    for E in np.linspace(0.5, 8.0, 31):
        fast = cubic.roots(E)
        slow = steady_state.brute_force_roots(cubic, E)
        if len(fast) != len(slow):
            return CheckResult("bistability_bruteforce", False, float("inf"), f"root count differs at E_p={E}")
        worst = max(worst, max(abs(a - b) for a, b in zip(fast, slow)))
    return CheckResult("bistability_bruteforce", bool(worst < 1e-6), float(worst), "max |n_cubic - n_scan|")


SUITES: dict[str, Callable[..., CheckResult]] = {
    "cubic_roots": check_cubic_roots,
    "partial_fractions": check_partial_fractions,
    "spectrum_symmetry": check_spectrum_symmetry,
    "sx_physicality": check_sx_physicality,
    "bistability_bruteforce": check_bistability_bruteforce,
}


def run_all(extra: Optional[SystemParams] = None) -> list[CheckResult]:
    results = []
    for name, fn in SUITES.items():
        try:
            res = fn(extra) if name == "partial_fractions" else fn()
        except Exception as exc:  # a crashing suite is a failing suite
            res = CheckResult(name, False, float("nan"), f"{type(exc).__name__}: {exc}")
        results.append(res)
    return results
