"""Chords in three dimensions.

Chords of a ball that touch a concentric inner ball all have the same length.
For an ellipsoid around a ball they do not, and the spread grows as the
ellipsoid stretches. Likewise, chords joining points whose tangent planes
meet at a right angle are constant on a ball only.
"""

import math

from isoptic_lab.chords3d import Ball, Ellipsoid, PerturbedSphere, alpha_chords, chord_spread, tangent_chord_lengths

inner = Ball(radius=1.0)
cases = [("ball R=2", Ball(radius=2.0))]
cases += [(f"ellipsoid (1.5, 1.5, {s})", Ellipsoid(semi_axes=(1.5, 1.5, s))) for s in (1.6, 1.8, 2.0)]
cases += [("perturbed sphere R=2 eps=0.02", PerturbedSphere(radius=2.0, eps=0.02, order=2))]

print("chords tangent to the unit ball")
for label, outer in cases:
    st = chord_spread(tangent_chord_lengths(outer, inner, 500, seed=0))
    print(f"  {label:<30} mean {st.mean:.6f}  spread {st.relative_spread:.2e}  failures {st.failures}")
print(f"  (closed form for the balls: 2 sqrt 3 = {2 * math.sqrt(3):.6f})")

print("\nright-angle chords")
for label, body in [("unit ball", Ball(radius=1.0)), ("ellipsoid (1, 1, 1.5)", Ellipsoid(semi_axes=(1, 1, 1.5))),
                    ("perturbed sphere", PerturbedSphere(radius=1.0, eps=0.02, order=2))]:
    st = chord_spread(alpha_chords(body, math.pi / 2, 500, seed=0))
    print(f"  {label:<30} min {st.min:.6f}  max {st.max:.6f}  spread {st.relative_spread:.2e}")
