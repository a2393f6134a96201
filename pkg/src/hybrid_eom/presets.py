"""Named reference parameter sets.

Detunings not listed take the red-sideband value 1.
"""
from hybrid_eom.model import SystemParams

_RATES = dict(gamma_b=4.2e-5, gamma_d=4.2e-5, kappa_c=1.25e-5, sigma_z=-1.0)

# switching curves; the dashed and thin sets are identical
BISTABILITY_E_M = 100.0
FIG2 = {
    "thick": SystemParams(G_em=0.1, g_om=0.06, g=0.001, kappa_a=0.9, E_m=BISTABILITY_E_M, **_RATES),
    "dashed": SystemParams(G_em=0.1, g_om=0.04, g=0.001, kappa_a=0.9, E_m=BISTABILITY_E_M, **_RATES),
    "thin": SystemParams(G_em=0.1, g_om=0.04, g=0.001, kappa_a=0.9, E_m=BISTABILITY_E_M, **_RATES),
}

# double transparency, kappa_a > omega_b
FIG3 = {
    "a": SystemParams(G_om=0.23, G_em=0.005, g=0.125, kappa_a=2.17, **_RATES),
    "b": SystemParams(G_om=0.1375, G_em=0.005, g=0.125, kappa_a=2.17, **_RATES),
    "c": SystemParams(G_om=0.0458333, G_em=0.005, g=0.125, kappa_a=2.17, **_RATES),
    "d": SystemParams(G_om=0.3, G_em=0.3, g=0.3, kappa_a=2.17, **_RATES),
}

# three-peak absorption, kappa_a < omega_b
FIG4 = {
    "a": SystemParams(G_om=0.23, G_em=0.005, g=0.125, kappa_a=0.217, **_RATES),
    "b": SystemParams(G_om=0.183, G_em=0.005, g=0.125, kappa_a=0.217, **_RATES),
    "c": SystemParams(G_om=0.1375, G_em=0.005, g=0.125, kappa_a=0.217, **_RATES),
    "d": SystemParams(G_om=0.23, G_em=0.005, g=0.0125, kappa_a=0.217, **_RATES),
}

# displacement spectra; b-d are the dashed curves
FIG5 = {
    "a": SystemParams(G_om=0.4, G_em=0.4, g=0.4, kappa_a=0.8, **_RATES),
    "b": SystemParams(G_om=0.4, G_em=0.4, g=0.01, kappa_a=0.8, **_RATES),
    "c": SystemParams(G_om=0.4, G_em=0.2, g=0.01, kappa_a=0.8, **_RATES),
    "d": SystemParams(G_om=0.4, G_em=0.01, g=0.01, kappa_a=0.8, **_RATES),
}
FIG5_EXPECTED_PEAKS = {"a": 4, "b": 3, "c": 3, "d": 2}
FIG5A_QUOTED_POSITIONS = (0.3, 0.7, 1.45)

PRESETS = {
    **{f"fig2{k}": v for k, v in FIG2.items()},
    **{f"fig3{k}": v for k, v in FIG3.items()},
    **{f"fig4{k}": v for k, v in FIG4.items()},
    **{f"fig5{k}": v for k, v in FIG5.items()},
}
