"""Probe-field response of the driven hybrid system.

The scaled intracavity response ``eps_T = 2 kappa_a <da+> / E_pr`` comes from
eliminating the mechanical, microwave and qubit fluctuations from the
linearized equations at the probe frequency. Its real part is the absorption
and its imaginary part the dispersion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hybrid_eom.errors import ImaginaryPrediction, PoleHit
from hybrid_eom.model import SystemParams, validate
from hybrid_eom.numerics import SpectrumSeries, chunked_map, numeric_residues, solve_cubic

POLE_EPS = 1e-300


@dataclass(frozen=True)
class ComplexResponse:
    value: complex
    detuning: float
    lam: float

    @property
    def absorption(self) -> float:
        return self.value.real

    @property
    def dispersion(self) -> float:
        return self.value.imag


@dataclass(frozen=True)
class PoleResidueSet:
    """Hybrid-mode poles and residues of the red-sideband response.

    Poles follow the ``lambda_i = -s_i`` convention, so the response
    denominator reads ``(kappa_a/2 - i lam) + sum_i A_i / (lambda_i - i lam)``.
    """

    poles: tuple[complex, complex, complex]
    residues_numeric: tuple[complex, complex, complex]
    residues_printed: tuple[complex, complex, complex]
    max_printed_deviation: float

    def denominator(self, p: SystemParams, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        d = p.kappa_a / 2 - 1j * lam
        for pole, a in zip(self.poles, self.residues_numeric):
            d = d + a / (pole - 1j * lam)
        return d

    def epsilon_T(self, p: SystemParams, lam) -> np.ndarray:
        return 2 * p.kappa_a / self.denominator(p, lam)


def _inner(p: SystemParams, delta):
    lam_b = delta - p.omega_b
    lam_c = delta - p.delta_c
    lam_z = delta - p.omega_q
    return (
        (p.gamma_b / 2 - 1j * lam_b)
        + p.G_em**2 / (p.kappa_c / 2 - 1j * lam_c)
        - 2 * p.g**2 * p.sigma_z / (p.gamma_d / 2 - 1j * lam_z)
    )


def epsilon_T_values(p: SystemParams, delta) -> np.ndarray:
    """Vectorized response at probe detunings ``delta`` (no pole checks)."""
    delta = np.asarray(delta, dtype=float)
    lam_a = delta - p.delta_a_eff
    return 2 * p.kappa_a / ((p.kappa_a / 2 - 1j * lam_a) + abs(p.G_om) ** 2 / _inner(p, delta))


def epsilon_T(p: SystemParams, delta: float) -> ComplexResponse:
    validate(p)
    inner = _inner(p, delta)
    if abs(inner) < POLE_EPS:
        raise PoleHit(f"mechanical-branch denominator vanishes at delta={delta}")
    lam_a = delta - p.delta_a_eff
    value = 2 * p.kappa_a / ((p.kappa_a / 2 - 1j * lam_a) + abs(p.G_om) ** 2 / inner)
    return ComplexResponse(complex(value), float(delta), float(delta - p.omega_b))


def transmission(p: SystemParams, delta: float) -> complex:
    return epsilon_T(p, delta).value - 1


def output_field(p: SystemParams, delta: float, E_pr: float) -> complex:
    if not E_pr > 0:
        raise ValueError(f"probe amplitude must be positive, got {E_pr}")
    return E_pr * transmission(p, delta)


def probe_spectrum(p: SystemParams, x_grid, workers: int = 1) -> SpectrumSeries:
    """Response on a grid of normalized offsets ``x = (delta - omega_b) / omega_b``.

    Points where the inner denominator vanishes exactly are dropped and listed
    in ``skipped``.
    """
    validate(p)
    x = np.asarray(x_grid, dtype=float)
    if len(x) > 1 and np.any(np.diff(x) <= 0):
        raise ValueError("grid must be strictly increasing")
    delta = p.omega_b * (1 + x)
    def chunk(d):
        # floating-point state is per thread, so set it inside the worker
        with np.errstate(all="ignore"):
            return np.stack([_inner(p, d), epsilon_T_values(p, d)])

    inner, vals = chunked_map(chunk, delta, workers) if len(delta) else (delta, delta)
    bad = np.abs(inner) < POLE_EPS
    return SpectrumSeries(x[~bad], vals[~bad], tuple(float(v) for v in x[bad]))


def dispersion_slope(p: SystemParams, delta: float, h: float = 1e-5) -> float:
    """Central difference of the dispersion ``Im eps_T`` with respect to ``delta``."""
    if not h > 0:
        raise ValueError("step must be positive")
    hi = epsilon_T(p, delta + h).dispersion
    lo = epsilon_T(p, delta - h).dispersion
    return (hi - lo) / (2 * h)


def pole_cubic(p: SystemParams) -> tuple[float, float, float, float]:
    """Coefficients (highest first) of the hybrid-mode cubic in ``s = -i lam``.

    ``(gb/2 + s)(kc/2 + s)(gd/2 + s) + G_em^2 (gd/2 + s) - 2 g^2 sz (kc/2 + s)``
    """
    b, c, d = p.gamma_b / 2, p.kappa_c / 2, p.gamma_d / 2
    G2, q = p.G_em**2, 2 * p.g**2 * p.sigma_z
    return (
        1.0,
        b + c + d,
        b * c + b * d + c * d + G2 - q,
        b * c * d + G2 * d - q * c,
    )


def _printed_residues(p: SystemParams, lams) -> tuple[complex, complex, complex]:
    """Residues from the explicit closed-form expressions in the pole positions."""
    l1, l2, l3 = lams
    s = (p.kappa_c + p.gamma_d) / 2
    k = p.kappa_c * p.gamma_d / 4
    G2 = abs(p.G_om) ** 2
    a1 = G2 * (l1 * s - k - l1**2) / ((l1 - l3) * (l1 - l2))
    a2 = G2 * (-l2 * s + k + l2**2) / ((l1 - l2) * (l2 - l3))
    a3 = G2 * (l3 * s - k + l3**2) / ((l2 - l3) * (l1 - l3))
    return a1, a2, a3


def hybrid_poles(p: SystemParams) -> PoleResidueSet:
    """Poles and residues of the red-sideband response.

    Residues are computed numerically from the pole positions; the explicit
    closed forms are evaluated alongside for comparison only.
    """
    validate(p)
    roots = solve_cubic(*pole_cubic(p)).roots
    c, d, G2 = p.kappa_c / 2, p.gamma_d / 2, abs(p.G_om) ** 2
    res = numeric_residues(roots, lambda s: G2 * (c + s) * (d + s))
    poles = tuple(-s for s in roots)
    printed = _printed_residues(p, poles)
    dev = 0.0
    for a_num, a_pr in zip(res, printed):
        scale = max(abs(a_num), abs(a_pr))
        if scale > 0:
            dev = max(dev, abs(a_num - a_pr) / scale)
    return PoleResidueSet(poles, res, printed, dev)


def omit_minima_prediction(p: SystemParams) -> tuple[float, float]:
    """Approximate transparency-window positions ``+-sqrt(G_em^2 - 2 g^2 sz)``."""
    arg = p.G_em**2 - 2 * p.g**2 * p.sigma_z
    if arg < 0:
        raise ImaginaryPrediction(f"G_em^2 - 2 g^2 sigma_z = {arg} < 0")
    r = math.sqrt(arg)
    return -r, r


def omia_peak_prediction(p: SystemParams) -> tuple[float, float, float]:
    """Absorption-peak positions ``(0, +r, -r)`` in the resolved-sideband limit."""
    if not p.kappa_a > 0:
        raise ValueError("kappa_a must be positive")
    r = math.sqrt(p.G_om**4 + p.kappa_a**2 * (p.G_em**2 + 2 * p.g**2)) / p.kappa_a
    return 0.0, r, -r
