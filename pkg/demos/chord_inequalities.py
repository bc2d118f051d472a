"""Lower bounds for chords in terms of the minimal width.

For every body and angle some isoptic chord lambda reaches 2 w0 cos(alpha/2)
and some contact chord q reaches w0 cos(alpha/2). Discs meet both bounds
everywhere; constant-width rotors at their special angles meet the lambda
bound everywhere too.
"""

import math

from isoptic_lab.analysis import (
    check_lambda_inequality,
    check_q_inequality,
    corpus,
    mean_chord_c,
    quadrature_mean_c,
    search_lambda_equality,
)
from isoptic_lab.fourier_body import FourierBody

body = FourierBody.from_terms(30, {4: (0, 1)})
rep = check_lambda_inequality(body, math.pi / 3)
m = rep.measurements
print(f"{body.describe()} at pi/3: max lambda {m['max_lambda']:.4f} >= bound {m['bound']:.4f} -> {rep.verdict}")

disc = FourierBody.disc(1.0)
for check in (check_lambda_inequality, check_q_inequality):
    r = check(disc, math.pi / 2)
    print(f"disc, {check.__name__}: equality everywhere = {r.measurements['equality_everywhere']}")

# the mean of c depends only on the perimeter
bodies = corpus(20, seed=0)
worst = max(abs(quadrature_mean_c(b, a) - mean_chord_c(b, a)) / mean_chord_c(b, a) for b in bodies for a in (0.5, 1.5, 2.5))
print(f"\nmean of c vs cot(alpha/2) L / pi over 20 random bodies: max relative gap {worst:.1e}")
verdicts = {check_lambda_inequality(b, a).verdict for b in bodies for a in (0.5, 1.5, 2.5)}
print(f"lambda bound over the same bodies: {verdicts}")

print("\nbodies with lambda = 2 w0 cos(alpha/2) for every t:")
for f in search_lambda_equality(orders=(3, 5, 7, 9)):
    print(f"  {f['body']:<14} alpha {f['alpha']:<7} deviation {f['max_deviation']:.1e}  equality {f['equality_everywhere']}")
