"""Symmetries of Julia sets of rational maps of the Riemann sphere."""

from .dynamics import (Estimate, PointCloud, Raster, boettcher_potential, ergodic_potential,
                       escape_rate, escape_time_raster, general_escape_radius, local_degree,
                       potential_difference, sample_julia)
from .errors import *  # noqa: F401,F403
from .isometry import (IDENTITY, GroupClass, GroupTag, Isometry, classify_finite_group,
                       element_order, fixed_points, group_closure, inversion, rotation,
                       rotation_about, rotation_axis_angle)
from .mcmullen import (McMullenParams, classify_mcmullen_symmetries, escape_radius,
                       make_mcmullen, render_parameter_plane)
from .parser import parse_isometry, parse_map
from .rational import (Polynomial, RationalMap, compose, conjugate, critical_points, equals,
                       newton_map, rational_map)
from .sphere import SpherePoint, antipode, chordal_distance, format_point, parse_point
from .symmetry import (SymmetryReport, check_commutation, classify_symmetry_group,
                       hausdorff_distance, necessary_condition_check,
                       precritical_permutation_check, shared_julia_criterion,
                       verify_symmetry_numeric)

__version__ = "0.1.0"
