"""System parameters in units of the mechanical frequency.

``BareParams`` carries the drive-level quantities of the full Hamiltonian;
``effective_params`` turns them into the linearized detunings and the
electromechanical coupling. ``SystemParams`` is what every solver consumes.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from hybrid_eom.errors import NegativeCoupling, NoConvergence, NonPositiveRate, SigmaZOutOfRange
from hybrid_eom.numerics import solve_cubic

OMEGA_B = 1.0


@dataclass(frozen=True)
class BareParams:
    """Bare detunings, single-excitation couplings and the microwave drive."""

    delta_a: float = 1.0
    delta_c: float = 1.0
    g_em: float = 0.0
    g_om: float = 0.0
    E_m: float = 0.0
    kappa_c: float = 1.25e-5
    omega_b: float = OMEGA_B

    def __post_init__(self):
        if self.omega_b != OMEGA_B:
            raise ValueError("omega_b is the unit of frequency and must equal 1")
        if not self.kappa_c > 0:
            raise NonPositiveRate(f"kappa_c must be positive, got {self.kappa_c}")
        for name in ("g_em", "g_om", "E_m"):
            if getattr(self, name) < 0:
                raise NegativeCoupling(f"{name} must be non-negative, got {getattr(self, name)}")


@dataclass(frozen=True)
class SystemParams:
    """Linearized parameter set.

    ``delta_a`` is the optical detuning entering the mean-field equations
    (before the radiation-pressure shift); ``delta_a_eff`` is the shifted
    detuning used by the fluctuation (probe and displacement) calculations.
    ``G_om`` is the net optomechanical coupling and ``g_om`` the
    single-photon one, used only in the steady-state solver.
    """

    G_om: float = 0.0
    G_em: float = 0.0
    g: float = 0.0
    kappa_a: float = 1.0
    kappa_c: float = 1.25e-5
    gamma_b: float = 4.2e-5
    gamma_d: float = 4.2e-5
    sigma_z: float = -1.0
    delta_a_eff: float = 1.0
    delta_a: float = 1.0
    delta_c: float = 1.0
    omega_q: float = 1.0
    g_om: float = 0.0
    E_p: float = 0.0
    E_m: float = 0.0
    omega_b: float = OMEGA_B

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise KeyError(f"unknown parameter(s): {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in d.items()})


RATE_FIELDS = ("kappa_a", "kappa_c", "gamma_b", "gamma_d")
COUPLING_FIELDS = ("G_om", "G_em", "g", "g_om", "E_p", "E_m")


def validate(p: SystemParams) -> SystemParams:
    """Return ``p`` unchanged if every invariant holds, raise otherwise."""
    if p.omega_b != OMEGA_B:
        raise ValueError("omega_b is the unit of frequency and must equal 1")
    for name in RATE_FIELDS:
        v = getattr(p, name)
        if not v > 0:
            raise NonPositiveRate(f"{name} must be positive, got {v}")
    if not -1.0 <= p.sigma_z <= 1.0:
        raise SigmaZOutOfRange(f"sigma_z must lie in [-1, 1], got {p.sigma_z}")
    for name in COUPLING_FIELDS:
        v = getattr(p, name)
        if v < 0:
            raise NegativeCoupling(f"{name} must be non-negative, got {v}")
    return p


def red_sideband(p: SystemParams) -> SystemParams:
    """Pin every effective detuning to the mechanical frequency."""
    return p.replace(delta_a_eff=p.omega_b, delta_c=p.omega_b, omega_q=p.omega_b)


def _microwave_shift_residual(b: BareParams, dc: float) -> float:
    return dc - b.delta_c + b.g_em**2 * b.E_m**2 / (b.omega_b * (b.kappa_c**2 + dc**2))


def _solve_delta_c(b: BareParams) -> float:
    """Self-consistent microwave detuning.

    Multiplying out the fixed-point equation gives the real cubic
    ``x^3 - d x^2 + k^2 x - d k^2 + s = 0`` with ``s = g_em^2 E_m^2 / omega_b``.
    The drive strength ``s`` is ramped from zero so the selected root is the
    one continuously connected to the bare detuning.
    """
    k2 = b.kappa_c**2
    s_full = b.g_em**2 * b.E_m**2 / b.omega_b
    if s_full == 0.0:
        return b.delta_c
    x = b.delta_c
    steps = 64
    for i in range(1, steps + 1):
        s = s_full * i / steps
        roots = solve_cubic(1.0, -b.delta_c, k2, -b.delta_c * k2 + s).real(tol=1e-9)
        if not roots:
            raise NoConvergence("microwave detuning cubic has no real root")
        x = min(roots, key=lambda r: abs(r - x))
    # Newton cleanup on the scalar equation
    for _ in range(50):
        f = _microwave_shift_residual(b, x)
        df = 1.0 - 2.0 * s_full * x / (k2 + x * x) ** 2
        if df == 0:
            break
        step = f / df
        x -= step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    if not math.isfinite(x) or abs(_microwave_shift_residual(b, x)) > 1e-10:
        raise NoConvergence(f"microwave detuning did not converge (residual {_microwave_shift_residual(b, x)})")
    return x


def effective_params(b: BareParams) -> tuple[float, float, float]:
    """Linearized ``(delta_c, delta_a, G_em)`` from bare parameters."""
    dc = _solve_delta_c(b)
    denom = b.omega_b * (b.kappa_c**2 + dc**2)
    da = b.delta_a + b.g_om * b.g_em * b.E_m**2 / denom
    G_em = b.g_em * b.E_m / math.sqrt(b.kappa_c**2 + dc**2)
    return dc, da, G_em
