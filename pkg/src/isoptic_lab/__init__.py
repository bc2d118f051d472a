"""Support-function toolkit for planar convex bodies: isoptics, chords and rotors,
plus a small 3-D probe for tangent chords and alpha-chords."""

from .fourier_body import (
    FourierBody,
    Harmonic,
    boundary_point,
    convexity_margin,
    perimeter,
    support_eval,
    symmetry_predicates,
    width_profile,
)
from .isoptic import (
    circumscribed_polygon,
    homothety_fit,
    isoptic_point,
    profile,
    sample_isoptic,
    tangent_chords,
)
from .rotors import admissible_angles, admissible_harmonics, build_rotor, determinant_c, determinant_h

__version__ = "0.1.0"
