"""Steady-state, probe-response and displacement-spectrum simulator for a
hybrid electro-opto-mechanical system coupled to a qubit.

All quantities are dimensionless, in units of the mechanical frequency.
"""
from hybrid_eom.model import BareParams, SystemParams, effective_params, red_sideband, validate

__all__ = ["BareParams", "SystemParams", "effective_params", "red_sideband", "validate"]
__version__ = "0.1.0"
