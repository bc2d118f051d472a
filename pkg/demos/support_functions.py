"""Convex bodies described by a handful of Fourier coefficients.

A body is its support function p(t): the distance from the origin to the
tangent line with outward normal (cos t, sin t). Everything else (boundary,
width, perimeter, curvature) follows from p and its derivatives.
"""

import math

from isoptic_lab.fourier_body import (
    FourierBody,
    NonConvexBodyError,
    boundary_point,
    convexity_margin,
    min_width,
    perimeter,
    symmetry_predicates,
    width_profile,
)

bodies = {
    "centrally symmetric": FourierBody.from_terms(30, {4: (0, 1)}),
    "constant width": FourierBody.from_terms(80, {7: (1, 0)}),
    "neither": FourierBody.from_terms(70, {4: (0, 1), 5: (1, 0)}),
}

for label, body in bodies.items():
    sym = symmetry_predicates(body)
    wp = width_profile(body)
    print(f"p(t) = {body.describe():<22} [{label}]")
    print(f"  boundary at t=0     {boundary_point(body, 0.0)}")
    print(f"  perimeter           {perimeter(body):.6f}  (pi * min width = {math.pi * min_width(body):.6f})")
    print(f"  width range         [{wp.width.min():.4f}, {wp.width.max():.4f}]")
    print(f"  radius of curvature >= {convexity_margin(body):.4f}")
    print(f"  constant width {sym.constant_width}, centrally symmetric {sym.centrally_symmetric}, "
          f"period {sym.rotational_period}")

# too much high-frequency wiggle makes p + p'' negative somewhere
try:
    FourierBody.from_terms(10, {7: (1, 0)})
except NonConvexBodyError as exc:
    print("\nrejected:", exc)
