"""Rotors: bodies that turn inside a regular polygon while touching every side.

The circumscribed regular N-gon has a constant side length exactly when the
tangent-segment sum c(t) is constant at the interior angle (N - 2) pi / N.
Harmonic n survives in such a body only at special angles; we list them,
build a few rotors and draw them with their polygon frames.
"""

import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from isoptic_lab.isoptic import circumscribed_polygon, profile
from isoptic_lab.rotors import InadmissibleHarmonicError, admissible_angles, determinant_c, format_angle, rotor
from isoptic_lab.svg import FIGURES, figure_scene, render_svg

print("angles (multiples of pi) at which harmonic n may appear:")
for n in range(2, 9):
    print(f"  n={n}: {', '.join(format_angle(a) for a in admissible_angles(n))}")

print("\ndeterminant of the order-n system at the triangle angle pi/3:")
for n in range(2, 9):
    d = determinant_c(n, Fraction(1, 3)).det
    print(f"  n={n}: {d:.3e}{'  <- admissible' if d <= 1e-12 else ''}")

for sides, terms, a0 in [(3, {4: (0, 1)}, 30), (6, {7: (1, 0)}, 80), (4, {5: (1, 0)}, 60), (5, {4: (0.3, 0), 6: (0, 0.2)}, None)]:
    body = rotor(sides, terms, a0)
    alpha = (sides - 2) * math.pi / sides
    lengths = np.concatenate([circumscribed_polygon(body, sides, ph).side_lengths for ph in np.linspace(0, 1, 25)])
    print(f"\n{sides}-gon rotor p(t) = {body.describe()}")
    print(f"  c spread {profile(body, alpha, 'c').relative_spread:.1e}, "
          f"side length {lengths.mean():.6f} (spread {np.ptp(lengths) / lengths.mean():.1e})")

try:
    rotor(3, {3: (1, 0)}, 30)
except InadmissibleHarmonicError as exc:
    print("\nrejected:", exc)

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
for name in FIGURES:
    render_svg(figure_scene(name), out / f"{name}.svg")
print(f"\nSVG drawings written to {out}/")
