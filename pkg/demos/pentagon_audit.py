"""A closer look at p(t) = 60 + cos 5t + sin 5t at the angles pi/5 and 3pi/5.

This body has been put forward as having constant c at both angles, with the
two isoptics related by a homothety of ratio -1/(2 - tau) (tau the golden
ratio). Measuring settles both claims separately.
"""

import json

from isoptic_lab.analysis import pentagon_audit

rep = pentagon_audit()
print(json.dumps(rep, indent=2))
tau = (1 + 5**0.5) / 2
print(f"\nc is constant at pi/5: {rep['c_constant_pi_5']}, at 3pi/5: {rep['c_constant_3pi_5']}")
print(f"isoptic homothety ratio {rep['homothety_ratio']:.12f} vs -1/(2 - tau) = {-1 / (2 - tau):.12f}")
print(f"ratio of mean c values {rep['c_mean_ratio']:.9f} (2 + sqrt 5 = {2 + 5**0.5:.9f})")
