"""Non-retarded Casimir-Polder shifts of an atom near a reflecting wire or halfplane."""

__version__ = "0.1.0"

from .errors import CasimirPolderError, ConvergenceError, InvalidGeometryError
from .halfplane import gh_halfplane_closed, shift_halfplane, xi_halfplane, xi_halfplane_small_phi
from .models import (
    CylPoint,
    DipoleMeanSquares,
    HalfplaneGeometry,
    NumericsConfig,
    WireGeometry,
    XiTriple,
    energy_shift,
)
from .wire import (
    shift_wire,
    xi_phi_far,
    xi_plane_limit,
    xi_wire_asymptotic,
    xi_wire_exact,
    xi_wire_leading,
)

__all__ = [
    "CasimirPolderError",
    "ConvergenceError",
    "InvalidGeometryError",
    "CylPoint",
    "DipoleMeanSquares",
    "HalfplaneGeometry",
    "NumericsConfig",
    "WireGeometry",
    "XiTriple",
    "energy_shift",
    "gh_halfplane_closed",
    "shift_halfplane",
    "shift_wire",
    "xi_halfplane",
    "xi_halfplane_small_phi",
    "xi_phi_far",
    "xi_plane_limit",
    "xi_wire_asymptotic",
    "xi_wire_exact",
    "xi_wire_leading",
]
