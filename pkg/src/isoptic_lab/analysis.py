"""Numerical checks of the planar chord/isoptic theorems.

Each ``check_*`` function returns a `VerificationReport` whose verdict is a
pure function of the measured numbers and the tolerances stored with it.
Existence statements ("some t has ...") are decided on the evaluation grid
with a one-sided slack of ``1e-9 * a0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .fourier_body import (
    CONSTANCY_TOL,
    FourierBody,
    Harmonic,
    has_rotational_symmetry,
    min_width,
    perimeter,
    random_corpus,
    symmetry_predicates,
    uniform_grid,
)
from .isoptic import (
    DEFAULT_GRID,
    check_alpha,
    chord_c,
    chord_d,
    contact_chord_q,
    homothety_fit,
    isoptic_chord_lambda,
    isoptic_point,
    profile,
    sample_isoptic,
)
from .rotors import admissible_angles, determinant_c, determinant_h

EXISTENCE_SLACK = 1e-9  # multiplied by a0
IDENTITY_TOL = 1e-9  # relative

PASS, FAIL, INFO = "pass", "fail", "informational"


@dataclass
class VerificationReport:
    theorem: str
    body: dict
    alpha: float | None
    measurements: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    verdict: str = INFO

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), default=_json_default, **kwargs)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def describe_body(body) -> dict:
    if isinstance(body, FourierBody):
        return {**body.to_dict(), "support_function": body.describe()}
    return dict(body)


# disc closed forms ----------------------------------------------------------------

@dataclass(frozen=True)
class DiscReference:
    radius: float
    alpha: float
    a: float
    b: float
    c: float
    d: float
    q: float
    lam: float
    h: float
    isoptic_radius: float

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "q": self.q, "lambda": self.lam, "h": self.h}


def disc_reference(radius: float, alpha: float) -> DiscReference:
    if radius <= 0:
        raise ValueError("radius must be positive")
    alpha = check_alpha(alpha)
    cot = 1 / math.tan(alpha / 2)
    cos = math.cos(alpha / 2)
    return DiscReference(
        radius, alpha,
        a=radius * cot, b=radius * cot, c=2 * radius * cot,
        d=2 * radius * cos, q=2 * radius * cos, lam=4 * radius * cos,
        h=radius * cot, isoptic_radius=radius / math.sin(alpha / 2),
    )


# mean value identity ------------------------------------------------------------------

def mean_chord_c(body: FourierBody, alpha: float) -> float:
    """Mean of ``c`` over a full turn: ``cot(alpha/2) L / pi``."""
    alpha = check_alpha(alpha)
    return perimeter(body) / (math.tan(alpha / 2) * math.pi)


def quadrature_mean_c(body: FourierBody, alpha: float, grid_size: int = DEFAULT_GRID) -> float:
    """Trapezoidal mean of ``c``; exact for trig polynomials once the grid exceeds the degree."""
    return float(np.mean(chord_c(body, alpha, uniform_grid(grid_size))))


# constancy checks ---------------------------------------------------------------------

def check_constant_c(body: FourierBody, alpha: float, tolerance: float = CONSTANCY_TOL,
                     grid_size: int = DEFAULT_GRID) -> VerificationReport:
    prof = profile(body, alpha, "c", grid_size)
    dets = {str(h.order): determinant_c(h.order, alpha).det for h in body.active_harmonics() if h.order >= 2}
    return VerificationReport(
        "1", describe_body(body), float(alpha),
        {"relative_spread": prof.relative_spread, "mean": prof.mean, "min": prof.min, "max": prof.max,
         "determinants": dets},
        {"constancy": tolerance},
        PASS if prof.relative_spread <= tolerance else FAIL,
    )


def check_constant_h(body: FourierBody, alpha: float, tolerance: float = CONSTANCY_TOL,
                     grid_size: int = DEFAULT_GRID) -> VerificationReport:
    """Constant ``h`` must force a disc centred at the origin."""
    prof = profile(body, alpha, "h", grid_size)
    dets = {str(h.order): determinant_h(h.order, alpha) for h in body.active_harmonics()}
    centred_disc = not body.active_harmonics()
    constant = prof.relative_spread <= tolerance
    return VerificationReport(
        "3", describe_body(body), float(alpha),
        {"relative_spread": prof.relative_spread, "h_constant": constant,
         "centred_disc": centred_disc, "determinants": dets},
        {"constancy": tolerance},
        FAIL if constant and not centred_disc else PASS,
    )


def check_lambda_equals_2d(body: FourierBody, alpha: float, grid_size: int = DEFAULT_GRID,
                           tolerance: float = IDENTITY_TOL) -> VerificationReport:
    """``lambda = 2 d`` for bodies invariant under rotation by ``pi - alpha`` or ``2 alpha``."""
    alpha = check_alpha(alpha)
    t = uniform_grid(grid_size)
    lam = isoptic_chord_lambda(body, alpha, t)
    d = chord_d(body, alpha, t)
    radius = np.linalg.norm(isoptic_point(body, alpha, t), axis=1)
    dev_2d = float(np.max(np.abs(lam - 2 * d)) / np.max(np.abs(lam)))
    expected_r = lam / (2 * math.sin(alpha))
    dev_circle = float(np.max(np.abs(radius - expected_r)) / np.max(radius))
    lam_spread = float((lam.max() - lam.min()) / lam.mean())
    r_spread = float((radius.max() - radius.min()) / radius.mean())
    sym_a = has_rotational_symmetry(body, math.pi - alpha)
    sym_b = has_rotational_symmetry(body, 2 * alpha)
    meas = {
        "symmetric_pi_minus_alpha": sym_a, "symmetric_2alpha": sym_b,
        "max_relative_deviation_lambda_2d": dev_2d,
        "max_relative_deviation_radius": dev_circle,
        "lambda_relative_spread": lam_spread, "lambda_constant": lam_spread <= CONSTANCY_TOL,
        "isoptic_radius_spread": r_spread,
    }
    tols = {"identity": tolerance, "constancy": CONSTANCY_TOL}
    if not (sym_a or sym_b):
        return VerificationReport("4", describe_body(body), alpha, meas, tols, INFO)
    ok = dev_2d <= tolerance and dev_circle <= tolerance
    if meas["lambda_constant"]:
        meas["isoptic_is_circle"] = r_spread <= tolerance
        ok = ok and meas["isoptic_is_circle"]
    return VerificationReport("4", describe_body(body), alpha, meas, tols, PASS if ok else FAIL)


# inequalities ----------------------------------------------------------------------

def _mean_crossing(t: np.ndarray, values: np.ndarray, target: float, fn) -> float:
    """A parameter where the trig polynomial ``fn`` equals ``target`` (bracketed from grid samples)."""
    diff = values - target
    if np.max(np.abs(diff)) <= 1e-12 * max(1.0, abs(target)):
        return float(t[0])
    idx = np.nonzero(np.sign(diff) != np.sign(np.roll(diff, -1)))[0]
    if idx.size == 0:
        return float(t[int(np.argmin(np.abs(diff)))])
    k = int(idx[0])
    lo, hi = t[k], t[k] + (t[1] - t[0])
    if diff[k] == 0:
        return float(lo)
    return float(brentq(lambda s: fn(s) - target, lo, hi, xtol=1e-15))


def check_lambda_inequality(body: FourierBody, alpha: float,
                            grid_size: int = DEFAULT_GRID) -> VerificationReport:
    """Some ``t`` has ``lambda(t) >= 2 w0 cos(alpha/2)``; equality everywhere only for constant width."""
    alpha = check_alpha(alpha)
    slack = EXISTENCE_SLACK * body.a0
    t = uniform_grid(grid_size)
    lam = isoptic_chord_lambda(body, alpha, t)
    w0 = min_width(body, grid_size)
    length = perimeter(body)
    bound = 2 * w0 * math.cos(alpha / 2)
    exists = bool(lam.max() >= bound - slack)

    def csum(s):
        return chord_c(body, alpha, s) + chord_c(body, alpha, s - math.pi + alpha)

    mean_sum = 2 * length / (math.tan(alpha / 2) * math.pi)
    t0 = _mean_crossing(t, csum(t), mean_sum, csum)
    lam0 = float(isoptic_chord_lambda(body, alpha, t0))
    chained = 2 * math.cos(alpha / 2) * length / math.pi
    chained_ok = lam0 >= chained - slack
    equality = bool(np.max(np.abs(lam - bound)) <= slack)
    constant_width = symmetry_predicates(body).constant_width
    meas = {
        "max_lambda": float(lam.max()), "min_lambda": float(lam.min()), "bound": bound,
        "min_width": w0, "perimeter": length, "t0": t0, "lambda_t0": lam0,
        "chained_bound": chained, "chained_ok": chained_ok,
        "equality_everywhere": equality, "constant_width": constant_width,
        "perimeter_minus_pi_w0": length - math.pi * w0,
    }
    ok = exists and chained_ok and (constant_width or not equality)
    return VerificationReport("5", describe_body(body), alpha, meas, {"existence_slack": slack},
                              PASS if ok else FAIL)


def check_q_inequality(body: FourierBody, alpha: float, grid_size: int = DEFAULT_GRID) -> VerificationReport:
    """Some ``t`` has ``q(t) >= w0 cos(alpha/2)``; equality everywhere only for a disc."""
    alpha = check_alpha(alpha)
    slack = EXISTENCE_SLACK * body.a0
    t = uniform_grid(grid_size)
    q = contact_chord_q(body, alpha, t)
    w0 = min_width(body, grid_size)
    bound = w0 * math.cos(alpha / 2)
    exists = bool(q.max() >= bound - slack)
    equality = bool(np.max(np.abs(q - bound)) <= slack)
    disc = all(h.order == 1 for h in body.active_harmonics())
    meas = {"max_q": float(q.max()), "min_q": float(q.min()), "bound": bound, "min_width": w0,
            "equality_everywhere": equality, "disc": disc}
    ok = exists and (disc or not equality)
    return VerificationReport("JY", describe_body(body), alpha, meas, {"existence_slack": slack},
                              PASS if ok else FAIL)


@dataclass(frozen=True)
class TriangleBound:
    lhs: float
    rhs: float
    ok: bool
    equality: bool


def triangle_bound_check(body: FourierBody, alpha: float, t: float) -> TriangleBound:
    """``lambda(t) >= (c(t) + c(t - pi + alpha)) sin(alpha/2)``, equality iff the two c's agree."""
    alpha = check_alpha(alpha)
    slack = EXISTENCE_SLACK * body.a0
    c1 = float(chord_c(body, alpha, t))
    c2 = float(chord_c(body, alpha, t - math.pi + alpha))
    lhs = float(isoptic_chord_lambda(body, alpha, t))
    rhs = (c1 + c2) * math.sin(alpha / 2)
    return TriangleBound(lhs, rhs, lhs >= rhs - slack, abs(c1 - c2) <= slack)


# searches and audits -------------------------------------------------------------------

def search_lambda_equality(orders=range(3, 16, 2), a0: float | None = None,
                           grid_size: int = DEFAULT_GRID) -> list[dict]:
    """Look for bodies with ``lambda = 2 w0 cos(alpha/2)`` at every ``t``.

    Candidates are constant-width bodies ``a0 + cos nt`` (odd ``n``) at each
    angle admissible for ``n``; all candidates are returned with their
    deviation so the caller can see which ones hit equality.
    """
    findings = []
    for n in orders:
        if n % 2 == 0:
            continue
        body = FourierBody(a0 if a0 is not None else 2.0 * (n * n - 1), (Harmonic(n, 1.0, 0.0),))
        for frac in admissible_angles(n):
            alpha = float(frac) * math.pi
            rep = check_lambda_inequality(body, alpha, grid_size)
            m = rep.measurements
            findings.append({
                "body": body.describe(), "alpha": f"{frac.numerator}/{frac.denominator}pi",
                "max_deviation": max(m["max_lambda"] - m["bound"], m["bound"] - m["min_lambda"]),
                "equality_everywhere": m["equality_everywhere"],
            })
    return findings


def pentagon_audit(grid_size: int = DEFAULT_GRID) -> dict:
    """Measure the two isoptics ``K_{pi/5}``, ``K_{3pi/5}`` of ``60 + cos 5t + sin 5t``.

    Reports the ``c`` spreads, the ratio of mean ``c`` values and the best
    homothety between the isoptics, next to the values ``1/(2 - tau)`` and
    ``-1/(2 - tau)`` that have been claimed for this body.
    """
    body = FourierBody(60.0, (Harmonic(5, 1.0, 1.0),))
    a1, a2 = math.pi / 5, 3 * math.pi / 5
    tau = (1 + math.sqrt(5)) / 2
    p1, p2 = profile(body, a1, "c", grid_size), profile(body, a2, "c", grid_size)
    fit = homothety_fit(sample_isoptic(body, a2, grid_size), sample_isoptic(body, a1, grid_size))
    return {
        "body": body.describe(),
        "c_spread_pi_5": p1.relative_spread,
        "c_spread_3pi_5": p2.relative_spread,
        "c_constant_pi_5": p1.is_constant(),
        "c_constant_3pi_5": p2.is_constant(),
        "c_mean_ratio": p1.mean / p2.mean,
        "claimed_c_ratio": 1 / (2 - tau),
        "homothety_ratio": fit.ratio,
        "homothety_residual": fit.residual,
        "homothety_center": fit.center,
        "claimed_homothety_ratio": -1 / (2 - tau),
        "determinant_pi_5": determinant_c(5, Fraction(1, 5)).det,
        "determinant_3pi_5": determinant_c(5, Fraction(3, 5)).det,
    }


def predicted_c_spread(n: int, alpha: float, a0: float, amplitude: float = 1.0) -> float:
    """Relative spread of ``c`` for ``a0 + amplitude cos nt``: ``2 A sqrt(det) / (sin a · c0)``."""
    c0 = 2 * a0 / math.tan(alpha / 2)
    return 2 * amplitude * math.sqrt(determinant_c(n, alpha).det) / math.sin(alpha) / c0


def corpus(count: int = 20, seed: int = 0) -> list[FourierBody]:
    """The reference random corpus (orders 2-7, ``a0 = 1``, convexity margin >= 0.1)."""
    return random_corpus(count, seed)
