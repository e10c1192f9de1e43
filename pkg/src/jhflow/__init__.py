"""Exact self-similar solutions of the planar stationary Navier-Stokes equations.

Radial (Jeffery-Hamel) profiles in closed form, their global periodic
extensions, non-radial solutions built from Weierstrass' P, and numerical
verification tools.
"""
__version__ = "0.1.0"

from .cubic import ParameterPoint, RegionTag, classify, solve_cubic  # noqa: E402
from .nonradial import NonRadialSpec, Variant, nonradial_field  # noqa: E402
from .radial import Family, RadialProfileSpec, eval_f, eval_field_radial, global_periodic_solve  # noqa: E402

__all__ = [
    "Family", "NonRadialSpec", "ParameterPoint", "RadialProfileSpec", "RegionTag", "Variant",
    "classify", "eval_f", "eval_field_radial", "global_periodic_solve", "nonradial_field",
    "solve_cubic",
]
