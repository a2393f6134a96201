"""Mechanical displacement spectrum and normal-mode splitting.

``S_x(w) = [sum_k A_k(w) A_k(-w) + 1] / (d1(w) d1(-w))`` over the seven
closed-form constants ``k in {25, ..., 30, 32}``. Every constant is a
rational function of ``s = -i w`` with real coefficients.

Symbol conventions: the qubit frequency appearing in the constants is
``omega_q``, the electromechanical coupling is the linearized ``G_em`` and
the optical detuning is ``delta_a_eff``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hybrid_eom.errors import NonRealResult, PoleHit
from hybrid_eom.model import SystemParams, validate
from hybrid_eom.numerics import SpectrumSeries, chunked_map, find_extrema

CONSTANT_INDICES = (25, 26, 27, 28, 29, 30, 32)
POLE_EPS = 1e-300
REALITY_RTOL = 1e-12
PROMINENCE_FRACTION = 0.01


def _blocks(p: SystemParams, omega):
    s = -1j * np.asarray(omega, dtype=float)
    wz, dc, G2 = p.omega_q, p.delta_c, p.G_em**2
    qd = s + p.gamma_d / 2
    mc = s + p.kappa_c / 2
    Dd = qd**2 + wz**2 / 4
    Dc = mc**2 + dc**2
    # mechanical self-energy with qubit dressing only, and with microwave added
    mech_q = s + p.gamma_b / 2 - 2 * p.g**2 * p.sigma_z * qd / Dd
    mech = mech_q + G2 * mc / Dc
    freq = p.omega_b + p.g**2 * wz * p.sigma_z / Dd - G2 * dc / Dc
    freq_d1 = p.omega_b + p.g**2 * wz * p.sigma_z / Dd - G2 * dc**2 / Dc
    d1 = mc / mech * (mech**2 + freq_d1**2)
    return dict(s=s, qd=qd, mc=mc, Dd=Dd, Dc=Dc, mech_q=mech_q, mech=mech, freq=freq, d1=d1)


def d1(p: SystemParams, omega):
    return _blocks(p, omega)["d1"]


def appendix_constants(p: SystemParams, omega) -> dict[int, np.ndarray]:
    """All seven constants at ``omega`` (vectorized, no pole checks)."""
    b = _blocks(p, omega)
    g, G, wz, dc = p.g, p.G_em, p.omega_q, p.delta_c
    qd, mc, Dd, Dc = b["qd"], b["mc"], b["Dd"], b["Dc"]
    mech_q, mech, freq = b["mech_q"], b["mech"], b["freq"]
    pref = 2 * p.G_om * p.delta_a_eff / b["d1"]
    return {
        25: pref * (freq * G / (mech_q * Dc / mc + G**2) + dc / mc),
        26: pref * (freq * dc * G / (mech_q * Dc + G**2 * mc) - 1),
        # the qubit denominator here is 2 qd^2 + wz^2/4, unlike Dd elsewhere
        27: pref * (g * qd / Dd - freq * (g * wz / (2 * qd**2 + wz**2 / 4)) / mech),
        28: pref * g * qd / Dd * (wz / (2 * qd) - freq / mech),
        29: pref * freq / mech,
        30: pref,
        32: pref / (b["s"] + p.kappa_a / 2),
    }


def appendix_constant(k: int, p: SystemParams, omega: float) -> complex:
    if k not in CONSTANT_INDICES:
        raise KeyError(f"no constant A{k}; available: {CONSTANT_INDICES}")
    validate(p)
    if abs(d1(p, omega)) < POLE_EPS:
        raise PoleHit(f"d1 vanishes at omega={omega}")
    return complex(appendix_constants(p, omega)[k])


def raw_spectrum(p: SystemParams, omega) -> np.ndarray:
    """Complex value of the closed form before the imaginary residue is dropped."""
    omega = np.asarray(omega, dtype=float)
    plus, minus = appendix_constants(p, omega), appendix_constants(p, -omega)
    acc = np.ones(omega.shape, dtype=complex)
    for k in CONSTANT_INDICES:
        acc = acc + plus[k] * minus[k]
    return acc / (d1(p, omega) * d1(p, -omega))


def displacement_spectrum(p: SystemParams, omega: float) -> float:
    validate(p)
    if abs(d1(p, omega)) < POLE_EPS or abs(d1(p, -omega)) < POLE_EPS:
        raise PoleHit(f"d1 vanishes at omega={omega}")
    raw = complex(raw_spectrum(p, omega))
    if abs(raw.imag) > REALITY_RTOL * (1 + abs(raw.real)):
        raise NonRealResult(f"S_x({omega}) has imaginary part {raw.imag}")
    return raw.real


@dataclass(frozen=True)
class NmsSpectrum:
    omega: np.ndarray
    s_x: np.ndarray
    peak_positions: list[float]
    peak_heights: list[float]
    peak_count: int
    skipped: tuple[float, ...] = field(default=())
    all_maxima: list[float] = field(default_factory=list)


def prominent_peaks(omega, values, fraction: float = PROMINENCE_FRACTION):
    """Local maxima that rise above both adjacent minima by ``fraction`` of the global maximum.

    The adjacent minimum on a side without an interior minimum is the lowest
    sample between the peak and that end of the grid.
    """
    omega = np.asarray(omega, dtype=float)
    values = np.asarray(values, dtype=float)
    series = SpectrumSeries(omega, values)
    ext = find_extrema(series, "both")
    maxima = [e for e in ext if e.kind == "maximum"]
    minima = [e for e in ext if e.kind == "minimum"]
    threshold = fraction * float(np.max(values))
    kept = []
    for m in maxima:
        left = [e for e in minima if e.index < m.index]
        right = [e for e in minima if e.index > m.index]
        lv = left[-1].value if left else float(np.min(values[: m.index + 1]))
        rv = right[0].value if right else float(np.min(values[m.index:]))
        if m.value - lv >= threshold and m.value - rv >= threshold:
            kept.append(m)
    return kept, maxima


def nms_spectrum(p: SystemParams, omega_grid, workers: int = 1) -> NmsSpectrum:
    """Displacement spectrum on a grid, with prominence-filtered peaks."""
    validate(p)
    omega = np.asarray(omega_grid, dtype=float)
    if np.any(np.diff(omega) <= 0):
        raise ValueError("grid must be strictly increasing")
    def chunk(w):
        # floating-point state is per thread, so set it inside the worker
        with np.errstate(all="ignore"):
            return np.stack([d1(p, w), d1(p, -w), raw_spectrum(p, w)])

    dp, dm, raw = chunked_map(chunk, omega, workers)
    bad = (np.abs(dp) < POLE_EPS) | (np.abs(dm) < POLE_EPS) | ~np.isfinite(raw)
    good = ~bad
    w, r = omega[good], raw[good]
    nonreal = np.abs(r.imag) > REALITY_RTOL * (1 + np.abs(r.real))
    if np.any(nonreal):
        raise NonRealResult(f"S_x has a non-negligible imaginary part at omega={w[nonreal][0]}")
    s_x = r.real
    kept, maxima = prominent_peaks(w, s_x)
    return NmsSpectrum(
        omega=w,
        s_x=s_x,
        peak_positions=[m.x for m in kept],
        peak_heights=[m.value for m in kept],
        peak_count=len(kept),
        skipped=tuple(float(v) for v in omega[bad]),
        all_maxima=[m.x for m in maxima],
    )
