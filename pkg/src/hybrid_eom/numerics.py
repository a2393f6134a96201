"""Shared numerical kernels.

Cubic roots (closed form plus Newton polish), grid extrema with parabolic
refinement and residues of rational functions with simple poles.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from hybrid_eom.errors import DegenerateLeadingCoefficient, DegeneratePoles, TooFewPoints

POLE_SEPARATION_MIN = 1e-9

ExtremumKind = Literal["minimum", "maximum"]


@dataclass(frozen=True)
class CubicRoots:
    """Three complex roots sorted by real part, ties broken by imaginary part."""

    roots: tuple[complex, complex, complex]

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    def real(self, tol: float = 1e-7) -> list[float]:
        """Roots whose imaginary part is negligible, as floats."""
        return [r.real for r in self.roots if abs(r.imag) <= tol * max(1.0, abs(r))]


@dataclass(frozen=True)
class Extremum:
    x: float
    value: float
    kind: ExtremumKind
    refined: bool = True
    index: int = -1


@dataclass(frozen=True)
class SpectrumSeries:
    """Ordered abscissa grid with real or complex ordinates.

    ``skipped`` holds abscissae that could not be evaluated (e.g. exact poles).
    """

    x: np.ndarray
    y: np.ndarray
    skipped: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y))
        if self.x.shape != self.y.shape:
            raise ValueError("x and y must have the same shape")

    def __len__(self):
        return len(self.x)

    def mirrored(self) -> "SpectrumSeries":
        return SpectrumSeries(-self.x[::-1], self.y[::-1], tuple(-s for s in self.skipped))


def _horner(c: Sequence[float], x):
    c3, c2, c1, c0 = c
    return ((c3 * x + c2) * x + c1) * x + c0


def _horner_d(c: Sequence[float], x):
    c3, c2, c1, _ = c
    return (3 * c3 * x + 2 * c2) * x + c1


def _polish(c, x, steps: int = 3):
    """Newton steps on the original cubic, kept only while the residual drops."""
    best, best_res = x, abs(_horner(c, x))
    for _ in range(steps):
        if best_res == 0.0:
            break
        d = _horner_d(c, best)
        if d == 0:
            break
        cand = best - _horner(c, best) / d
        res = abs(_horner(c, cand))
        if res < best_res:
            best, best_res = cand, res
        else:
            break
    return best


def _real_cubic_root(a: float, b: float, c: float) -> float:
    """One real root of x^3 + a x^2 + b x + c, the largest in magnitude when three exist."""
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    shift = -a / 3.0
    if p == 0.0 and q == 0.0:
        return shift
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0:
        sq = math.sqrt(disc)
        # pick the non-cancelling branch
        u = -q / 2.0 - math.copysign(sq, q)
        u = math.copysign(abs(u) ** (1.0 / 3.0), u)
        t = u - p / (3.0 * u) if u != 0 else 0.0
        return t + shift
    # three real roots: trigonometric form
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m) if p != 0 else 0.0
    arg = max(-1.0, min(1.0, arg))
    theta = math.acos(arg) / 3.0
    ts = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
    return max(ts, key=abs) + shift


def _quadratic_roots(a: float, b: float, c: float) -> tuple[complex, complex]:
    """Roots of a x^2 + b x + c without catastrophic cancellation."""
    disc = b * b - 4 * a * c
    if disc >= 0:
        sq = math.sqrt(disc)
        qq = -0.5 * (b + math.copysign(sq, b))
        if qq == 0.0:
            return 0j, 0j
        return complex(qq / a), complex(c / qq)
    sq = math.sqrt(-disc)
    re = -b / (2 * a)
    im = sq / (2 * a)
    return complex(re, im), complex(re, -im)


def solve_cubic(c3: float, c2: float, c1: float, c0: float) -> CubicRoots:
    """All three roots of ``c3 x^3 + c2 x^2 + c1 x + c0`` for real coefficients.

    A real root from the Cardano/trigonometric closed form is polished and
    deflated; the remaining quadratic is solved in stable form and every root
    gets a final Newton polish. Complex roots are returned as exact conjugates.
    """
    if c3 == 0:
        raise DegenerateLeadingCoefficient("leading coefficient is zero; use a quadratic solver")
    coeffs = (float(c3), float(c2), float(c1), float(c0))
    a, b, c = c2 / c3, c1 / c3, c0 / c3
    r1 = _polish(coeffs, _real_cubic_root(a, b, c))
    # synthetic division by (x - r1)
    q1 = c2 + c3 * r1
    q0 = c1 + r1 * q1
    z2, z3 = _quadratic_roots(c3, q1, q0)
    if z2.imag == 0.0 and z3.imag == 0.0:
        z2 = complex(_polish(coeffs, z2.real))
        z3 = complex(_polish(coeffs, z3.real))
    else:
        z2 = _polish(coeffs, z2)
        z3 = z2.conjugate()
    roots = sorted([complex(r1), z2, z3], key=lambda z: (z.real, z.imag))
    return CubicRoots(tuple(roots))


def cubic_residual_ok(c: Sequence[float], r: complex, rtol: float = 1e-10) -> bool:
    scale = max(1.0, *(abs(v) for v in c))
    return abs(_horner(c, r)) <= rtol * scale


def _parabola_vertex(x0, x1, x2, y0, y1, y2):
    h0, h2 = x0 - x1, x2 - x1
    s0, s2 = (y0 - y1) / h0, (y2 - y1) / h2
    curv = (s0 - s2) / (h0 - h2)
    if curv == 0:
        return x1, y1, False
    lin = s0 - curv * h0
    hv = -lin / (2 * curv)
    hv = min(max(hv, h0), h2)
    return x1 + hv, y1 + lin * hv + curv * hv * hv, True


def find_extrema(
    series: SpectrumSeries,
    kind: Literal["minima", "maxima", "both"] = "both",
    part: Literal["real", "imag"] = "real",
) -> list[Extremum]:
    """Strict interior local extrema of a sampled ordinate.

    Each one is refined by the vertex of the parabola through the sample and
    its two neighbours. Endpoints are never reported.
    """
    x = np.asarray(series.x, dtype=float)
    y = np.asarray(series.y)
    y = y.imag if part == "imag" else y.real
    if len(x) < 3:
        raise TooFewPoints(f"need at least 3 points, got {len(x)}")
    if np.any(np.diff(x) <= 0):
        raise ValueError("abscissa must be strictly increasing")
    left, mid, right = y[:-2], y[1:-1], y[2:]
    idx_min = np.nonzero((mid < left) & (mid < right))[0] + 1
    idx_max = np.nonzero((mid > left) & (mid > right))[0] + 1
    wanted = []
    if kind in ("minima", "both"):
        wanted += [(i, "minimum") for i in idx_min]
    if kind in ("maxima", "both"):
        wanted += [(i, "maximum") for i in idx_max]
    out = []
    for i, k in sorted(wanted):
        xv, yv, ok = _parabola_vertex(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1])
        out.append(Extremum(float(xv), float(yv), k, ok, int(i)))
    return out


def numeric_residues(
    poles: Sequence[complex], numerator_at: Callable[[complex], complex]
) -> tuple[complex, ...]:
    """Residues of ``N(s) / prod_j (s - s_j)`` at each simple pole ``s_i``."""
    poles = [complex(p) for p in poles]
    for i in range(len(poles)):
        for j in range(i + 1, len(poles)):
            if abs(poles[i] - poles[j]) <= POLE_SEPARATION_MIN:
                raise DegeneratePoles(
                    f"poles {poles[i]} and {poles[j]} closer than {POLE_SEPARATION_MIN}"
                )
    res = []
    for i, si in enumerate(poles):
        den = 1.0 + 0j
        for j, sj in enumerate(poles):
            if j != i:
                den *= si - sj
        res.append(complex(numerator_at(si)) / den)
    return tuple(res)


def partial_fraction_eval(poles, residues, s):
    """Evaluate ``sum_i A_i / (s - s_i)`` (vectorized over ``s``)."""
    s = np.asarray(s, dtype=complex)
    total = np.zeros_like(s)
    for p, a in zip(poles, residues):
        total = total + a / (s - p)
    return total


def polynomial_product(poles, s):
    s = np.asarray(s, dtype=complex)
    out = np.ones_like(s)
    for p in poles:
        out = out * (s - p)
    return out


def chunked_map(fn: Callable[[np.ndarray], np.ndarray], grid: np.ndarray, workers: int = 1) -> np.ndarray:
    """Apply a vectorized ``fn`` to grid chunks on a thread pool, preserving grid order."""
    if workers <= 1:
        return fn(grid)
    parts = np.array_split(grid, workers)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return np.concatenate(list(ex.map(fn, parts)), axis=-1)
