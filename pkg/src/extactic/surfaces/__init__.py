"""Surfaces in P^3: lines, asymptotic directions, parabolic and flecnodal curves."""

from .forms import asymptotic_form, binary_resultant, discriminant_II, flecnodal, parabolic_check, salmon_bound
from .lines import InfiniteFamily, Line3, line_on_surface_check, lines_on_surface
from .numbers import AlgNumber, NumberField
from .surface import X4, ModF, ProjSurface, hessian_det

__all__ = [
    "AlgNumber",
    "InfiniteFamily",
    "Line3",
    "ModF",
    "NumberField",
    "ProjSurface",
    "X4",
    "asymptotic_form",
    "binary_resultant",
    "discriminant_II",
    "flecnodal",
    "hessian_det",
    "line_on_surface_check",
    "lines_on_surface",
    "parabolic_check",
    "salmon_bound",
]
