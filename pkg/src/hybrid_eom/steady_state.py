"""Mean-field steady state and optical bistability.

The intracavity photon number ``n = |a_s|^2`` obeys

    E_p^2 = n [kappa_a^2/4 + (A6 - A7 (g_om n + A3))^2]

which is a real cubic in ``n``. Sweeping the pump amplitude traces the
S-shaped response; its turning points bound the bistable window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from hybrid_eom.errors import InconsistentRoot, NotBistable
from hybrid_eom.model import SystemParams, validate
from hybrid_eom.numerics import solve_cubic

CLOSURE_RTOL = 1e-8


@dataclass(frozen=True)
class SteadyCoeffs:
    """Mean-field constants A1..A7.

    ``A5 = g_om n + A3`` depends on the unknown photon number, so only its
    affine parts are kept (see :meth:`A5`).
    """

    A1: float
    A2: float
    A3: float
    A4: float
    A6: float
    A7: float
    g_om: float

    def A5(self, n: float) -> float:
        return self.g_om * n + self.A3


def steady_coeffs(p: SystemParams, exact_qubit_term: bool = False) -> SteadyCoeffs:
    """Constants of the photon-number equation.

    By default the qubit contribution to A1 carries ``omega_q`` in its
    numerator. ``exact_qubit_term=True`` uses ``gamma_d`` instead, which is
    what eliminating the qubit amplitude from the steady-state equations
    actually produces.
    """
    validate(p)
    mw = p.delta_c**2 + p.kappa_c**2 / 4
    qb = p.omega_q**2 + p.gamma_d**2
    qubit_num = p.gamma_d if exact_qubit_term else p.omega_q
    A1 = p.gamma_b / 2 + p.G_em**2 * p.kappa_c / (2 * mw) - 4 * p.g**2 * p.sigma_z * qubit_num / qb
    A2 = p.omega_b - p.G_em**2 * p.delta_c / mw + 4 * p.g**2 * p.sigma_z * p.omega_q / qb
    A3 = p.kappa_c * p.G_em * p.E_m / (2 * mw)
    A4 = p.delta_c * p.G_em * p.E_m / mw
    norm = A1**2 + A2**2
    A6 = p.delta_a - 2 * p.g_om * A1 * A4 / norm
    A7 = 2 * p.g_om * A2 / norm
    return SteadyCoeffs(A1, A2, A3, A4, A6, A7, p.g_om)


@dataclass(frozen=True)
class PhotonCubic:
    """``f(n) = n [kappa_a^2/4 + (u - K n)^2]`` with ``K = A7 g_om`` and ``u = A6 - A7 A3``."""

    K: float
    u: float
    kappa_a: float

    @classmethod
    def from_coeffs(cls, c: SteadyCoeffs, kappa_a: float) -> "PhotonCubic":
        return cls(c.A7 * c.g_om, c.A6 - c.A7 * c.A3, kappa_a)

    def f(self, n):
        return n * (self.kappa_a**2 / 4 + (self.u - self.K * n) ** 2)

    def df(self, n):
        return self.kappa_a**2 / 4 + self.u**2 - 4 * self.u * self.K * n + 3 * self.K**2 * n**2

    def coefficients(self, E_p: float) -> tuple[float, float, float, float]:
        K, u = self.K, self.u
        return K * K, -2 * u * K, self.kappa_a**2 / 4 + u * u, -(E_p**2)

    def discriminant(self, E_p: float) -> float:
        """Discriminant of the monic form; positive means three distinct real roots."""
        a, b, c, d = self.coefficients(E_p)
        b, c, d = b / a, c / a, d / a
        return 18 * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * c**3 - 27 * d * d

    def _polish(self, n: float, E_p: float) -> float:
        target = E_p**2
        for _ in range(4):
            d = self.df(n)
            if d == 0:
                break
            step = (self.f(n) - target) / d
            n_new = n - step
            if abs(self.f(n_new) - target) >= abs(self.f(n) - target):
                break
            n = n_new
        return n

    def roots(self, E_p: float) -> list[float]:
        """Real non-negative photon numbers for pump amplitude ``E_p``."""
        if E_p == 0:
            return [0.0]
        if self.K == 0:
            return [E_p**2 / (self.kappa_a**2 / 4 + self.u**2)]
        r = solve_cubic(*self.coefficients(E_p)).roots
        if self.discriminant(E_p) > 0:
            cand = [z.real for z in r]
        else:
            cand = [min(r, key=lambda z: abs(z.imag)).real]
        out = sorted(self._polish(n, E_p) for n in cand if n > 0)
        return out


@dataclass(frozen=True)
class TurningPoint:
    E_p: float
    n_double: float
    n_other: float

    @property
    def direction(self) -> Literal["up", "down"]:
        """``up``: the lower branch ends here and the system jumps to the upper one."""
        return "up" if self.n_other > self.n_double else "down"


@dataclass(frozen=True)
class BistabilityBranch:
    pump: np.ndarray
    roots: list[list[tuple[float, bool]]]
    turning_points: list[TurningPoint] = field(default_factory=list)

    def counts(self) -> list[int]:
        return [len(r) for r in self.roots]


def photon_cubic(p: SystemParams, exact_qubit_term: bool = False) -> PhotonCubic:
    return PhotonCubic.from_coeffs(steady_coeffs(p, exact_qubit_term), p.kappa_a)


def label_roots(cubic: PhotonCubic, ns: Sequence[float]) -> list[tuple[float, bool]]:
    # negative slope of E_p^2(n) marks the middle (unstable) branch
    return [(n, bool(cubic.df(n) >= 0)) for n in ns]


def photon_number_roots(
    p: SystemParams, E_p: float, exact_qubit_term: bool = False
) -> list[tuple[float, bool]]:
    """Steady-state photon numbers with stability labels."""
    if E_p < 0:
        raise ValueError(f"pump amplitude must be non-negative, got {E_p}")
    cubic = photon_cubic(p, exact_qubit_term)
    return label_roots(cubic, cubic.roots(E_p))


def steady_amplitudes(
    p: SystemParams, n: float, exact_qubit_term: bool = False
) -> tuple[complex, complex, complex, complex]:
    """Mean amplitudes ``(a_s, b_s, c_s, sigma_s)`` for a photon-number root ``n``.

    ``b_s`` follows from eliminating ``c_s`` and ``sigma_s``:
    ``b_s (A1 + i A2) = A4 + i A5``. The closure ``|a_s|^2 == n`` is checked.
    """
    c = steady_coeffs(p, exact_qubit_term)
    b_s = (c.A4 + 1j * c.A5(n)) / (c.A1 + 1j * c.A2)
    c_s = (1j * p.G_em * b_s + p.E_m) / (1j * p.delta_c + p.kappa_c / 2)
    sigma_s = 4j * p.g * p.sigma_z * b_s / (p.gamma_d + 1j * p.omega_q)
    delta_shifted = p.delta_a - p.g_om * 2 * b_s.real
    a_s = p.E_p / (1j * delta_shifted + p.kappa_a / 2)
    n_back = abs(a_s) ** 2
    if abs(n_back - n) > CLOSURE_RTOL * max(abs(n), 1e-300) and not (n == 0 and n_back == 0):
        raise InconsistentRoot(f"|a_s|^2 = {n_back} does not reproduce n = {n}")
    return complex(a_s), complex(b_s), complex(c_s), complex(sigma_s)


def _locate_turning_point(cubic: PhotonCubic, lo: float, hi: float) -> TurningPoint:
    """Bisect the discriminant sign change between two pump values."""
    d_lo = cubic.discriminant(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        d_mid = cubic.discriminant(mid)
        if (d_mid > 0) == (d_lo > 0):
            lo, d_lo = mid, d_mid
        else:
            hi = mid
    E = 0.5 * (lo + hi)
    r = solve_cubic(*cubic.coefficients(E)).roots
    pairs = [(0, 1), (0, 2), (1, 2)]
    i, j = min(pairs, key=lambda ij: abs(r[ij[0]] - r[ij[1]]))
    k = 3 - i - j
    return TurningPoint(E, 0.5 * (r[i].real + r[j].real), r[k].real)


def sweep_pump(p: SystemParams, E_p_grid, exact_qubit_term: bool = False) -> BistabilityBranch:
    """Photon-number roots over a pump grid, with turning points located between samples."""
    grid = np.asarray(E_p_grid, dtype=float)
    if np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("pump grid must be non-negative and strictly increasing")
    cubic = photon_cubic(p, exact_qubit_term)
    roots = [label_roots(cubic, cubic.roots(E)) for E in grid]
    turning = []
    if cubic.K != 0:
        for i in range(1, len(grid)):
            if len(roots[i]) != len(roots[i - 1]):
                turning.append(_locate_turning_point(cubic, grid[i - 1], grid[i]))
    return BistabilityBranch(grid, roots, turning)


def switching_metrics(b: BistabilityBranch) -> tuple[float, float, float]:
    """``(ratio, E_up, E_down)``.

    ``ratio`` is the upper- to lower-branch photon number at the upward
    switching threshold ``E_up``.
    """
    ups = [t for t in b.turning_points if t.direction == "up"]
    downs = [t for t in b.turning_points if t.direction == "down"]
    if not ups or not downs:
        raise NotBistable("no turning-point pair inside the pump grid")
    up, down = ups[0], downs[0]
    return up.n_other / up.n_double, up.E_p, down.E_p


def brute_force_roots(cubic: PhotonCubic, E_p: float, samples: int = 200_001) -> list[float]:
    """Roots of ``f(n) = E_p^2`` found by sign-change scanning and bisection.

    Independent of the cubic solver; used as an oracle.
    """
    if E_p == 0:
        return [0.0]
    n_max = 10 * E_p**2 / (cubic.kappa_a**2 / 4)
    n = np.linspace(0.0, n_max, samples)[1:]
    g = cubic.f(n) - E_p**2
    sg = np.sign(g)
    idx = np.nonzero((sg[:-1] == 0) | (sg[:-1] * sg[1:] < 0))[0]
    out = []
    for i in idx:
        lo, hi = n[i], n[i + 1]
        glo = cubic.f(lo) - E_p**2
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            gm = cubic.f(mid) - E_p**2
            if math.copysign(1, gm) == math.copysign(1, glo):
                lo, glo = mid, gm
            else:
                hi = mid
        out.append(0.5 * (lo + hi))
    return out
