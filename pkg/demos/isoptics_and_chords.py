"""Isoptics: where a body is seen under a fixed angle.

For each angle alpha the two tangent lines with normals t and t + pi - alpha
meet on the isoptic. Along the way we get a family of chord lengths: tangent
segments a and b, their sum c, the chord q between the contact points, and
lambda, a chord of the isoptic itself.
"""

import math

import numpy as np

from isoptic_lab.analysis import disc_reference
from isoptic_lab.fourier_body import FourierBody
from isoptic_lab.isoptic import (
    CHORD_FUNCTIONS,
    homothety_fit,
    profile,
    sample_isoptic,
    tangent_chords,
    tangent_chords_geometric,
)

# a disc is the sanity check: every chord has a closed form
disc, alpha = FourierBody.disc(2.0), math.pi / 3
print("disc, alpha = pi/3")
ref = disc_reference(2.0, alpha).as_dict()
got = tangent_chords(disc, alpha, 0.4).as_dict()
for name in ref:
    print(f"  {name:>6}: {got[name]:.12f}   closed form {ref[name]:.12f}")

# on a general body, the analytic formulas match plain point-to-point distances
body = FourierBody.from_terms(70, {4: (0, 1), 5: (1, 0)})
t = np.linspace(0, 2 * np.pi, 7)
geo = tangent_chords_geometric(body, 1.0, t)
# h is signed, the geometric route only sees its size
worst = max(np.max(np.abs(np.abs(CHORD_FUNCTIONS[k](body, 1.0, t)) - geo[k])) for k in geo)
print(f"\n{body.describe()}: analytic vs geometric chords, max difference {worst:.2e}")

for which in ("c", "q", "lambda"):
    prof = profile(body, 1.0, which)
    print(f"  {which:>6}: min {prof.min:9.4f}  max {prof.max:9.4f}  spread {prof.relative_spread:.3e}")

# two isoptics of a disc are concentric circles: a homothety with ratio sin(a1/2)/sin(a2/2)
fit = homothety_fit(sample_isoptic(disc, math.pi / 5), sample_isoptic(disc, 3 * math.pi / 5))
print(f"\ndisc isoptics pi/5 -> 3pi/5: ratio {fit.ratio:.12f}, residual {fit.residual:.1e}")
