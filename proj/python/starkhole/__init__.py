"""Spectral-hole Stark response toolkit.

Forward-model the field-broadened hole shape, simulate three-scan
hole-burning campaigns, fit profiles, and extract Stark coefficients.
"""

from ._core import (
    __version__,
    amorphous_field_plan,
    bandwidth_from_duration,
    crystal_field_plan,
    extract,
    fit_broadened,
    fit_lorentzian,
    hole_fwhm,
    hole_shape,
    hole_shape_curve,
    linfit_origin,
    mc_hole_shape,
    simulate_campaign,
)

__all__ = [
    "__version__",
    "amorphous_field_plan",
    "bandwidth_from_duration",
    "crystal_field_plan",
    "extract",
    "fit_broadened",
    "fit_lorentzian",
    "hole_fwhm",
    "hole_shape",
    "hole_shape_curve",
    "linfit_origin",
    "mc_hole_shape",
    "simulate_campaign",
]
