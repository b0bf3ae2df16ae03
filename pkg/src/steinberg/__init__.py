"""Necklace curves, the sphere of non-crossing diagonals and its image among
multicurves, with the hyperbolic geometry of the critical point ``p``."""

from .curves import Multicurve, boundary_multicurve, fills, relabel
from .hyperbolic import (
    collar_width,
    delta_star,
    gamma_point,
    geodesic_length,
    holonomy_from_tesselation,
    length_profile,
    right_angled_regular_side,
    semiregular_polygon,
    separating_length_at_p,
)
from .minima import (
    LengthFunctional,
    critical_point,
    curve_lengths,
    jacobian_rank,
    locate_admissible_vertex,
    min_membership,
    minimize,
    systole_set,
    verify_min_equality_sample,
)
from .necklace import DihedralElement, build_necklace, build_tesselation
from .sphere import build_phi, crossing, diagonals, fundamental_cycle, homology
from .steinberg_map import (
    action_sign,
    choose_single_component,
    dihedral_action,
    pushforward_cycle,
    q_vertex,
    stabilizer_report,
    verify_flag_structure,
    verify_qg_simpliciality,
)

__version__ = "0.1.0"
