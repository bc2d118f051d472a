"""Isoptic curves, chord functions and circumscribed polygons of a `FourierBody`.

Every chord function takes ``(body, alpha, t)`` and accepts scalar or array
``t``. The canonical values come from closed forms in the support function;
the ``*_geometric`` twins recompute the same lengths from explicit points and
exist so the two routes can be checked against each other.

Notation: ``s = t + pi - alpha`` is the direction of the second support line
through the isoptic point ``gamma_alpha(t)``.
"""

from __future__ import annotations

import contextlib
import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .fourier_body import (
    CONSTANCY_TOL,
    FourierBody,
    boundary_point,
    support_eval,
    uniform_grid,
    unit,
    unit_prime,
)

DEFAULT_GRID = 2048

CHORD_NAMES = ("a", "b", "c", "d", "q", "lambda", "h")


class AngleError(ValueError):
    pass


class DegenerateFitError(ValueError):
    pass


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0 < alpha < math.pi:
        raise AngleError(f"isoptic angle must lie in (0, pi), got {alpha!r}")
    return alpha


def _scalar_or_array(value, t):
    return float(value) if np.ndim(t) == 0 else value


# points -------------------------------------------------------------------

def isoptic_point(body: FourierBody, alpha: float, t):
    """Intersection of the support lines with normals ``u(t)`` and ``u(t + pi - alpha)``."""
    alpha = check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    p = support_eval(body, t)
    p2 = support_eval(body, t + np.pi - alpha)
    tangential = p / math.tan(alpha) + p2 / math.sin(alpha)
    return np.asarray(p)[..., None] * unit(t) + np.asarray(tangential)[..., None] * unit_prime(t)


def support_line_residual(body: FourierBody, point, direction):
    """Signed offset ``<x, u(direction)> - p(direction)`` of ``point`` from a support line."""
    point = np.asarray(point, dtype=float)
    return np.sum(point * unit(direction), axis=-1) - support_eval(body, direction)


# chord functions ----------------------------------------------------------

def chord_a(body, alpha, t):
    """Distance from the isoptic point to the contact point ``gamma(t)``."""
    alpha = check_alpha(alpha)
    s = np.asarray(t, dtype=float) + np.pi - alpha
    val = (support_eval(body, s) + support_eval(body, t) * math.cos(alpha)
           - support_eval(body, t, 1) * math.sin(alpha)) / math.sin(alpha)
    return _scalar_or_array(val, t)


def chord_b(body, alpha, t):
    """Distance from the isoptic point to the contact point ``gamma(t + pi - alpha)``."""
    alpha = check_alpha(alpha)
    s = np.asarray(t, dtype=float) + np.pi - alpha
    val = (support_eval(body, s) * math.cos(alpha) + support_eval(body, s, 1) * math.sin(alpha)
           + support_eval(body, t)) / math.sin(alpha)
    return _scalar_or_array(val, t)


def chord_c(body, alpha, t):
    """Length of the isoptic chord ``[gamma_alpha(t), gamma_alpha(t + pi - alpha)]``; it touches the body."""
    alpha = check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    val = (2 * support_eval(body, t + np.pi - alpha) * math.cos(alpha) + support_eval(body, t)
           + support_eval(body, t - 2 * alpha)) / math.sin(alpha)
    return _scalar_or_array(val, t)


def chord_d(body, alpha, t):
    """Distance between the feet of the origin on the two support lines."""
    alpha = check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    p = support_eval(body, t)
    p2 = support_eval(body, t + np.pi - alpha)
    val = np.sqrt(p**2 + p2**2 + 2 * p * p2 * math.cos(alpha))
    return _scalar_or_array(val, t)


def contact_chord_q(body, alpha, t):
    """Distance between the two contact points ``gamma(t)`` and ``gamma(t + pi - alpha)``."""
    alpha = check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    diff = boundary_point(body, t) - boundary_point(body, t + np.pi - alpha)
    return _scalar_or_array(np.linalg.norm(diff, axis=-1), t)


def isoptic_chord_lambda(body, alpha, t):
    """``|gamma_alpha(t + pi - alpha) - gamma_alpha(t - pi + alpha)|`` from its closed form.

    The chord vector has ``u(t)`` component ``2 p(t+pi-a) cos a + p(t-2a) + p(t)``
    and ``u'(t)`` component
    ``[p(t+pi-a) cos 2a - p(t-pi+a) + (p(t-2a) - p(t)) cos a] / sin a``.
    """
    alpha = check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    ca, sa = math.cos(alpha), math.sin(alpha)
    p = support_eval(body, t)
    p_fwd = support_eval(body, t + np.pi - alpha)
    p_back = support_eval(body, t - np.pi + alpha)
    p_2a = support_eval(body, t - 2 * alpha)
    normal = 2 * p_fwd * ca + p_2a + p
    tangential = (p_fwd * math.cos(2 * alpha) - p_back + (p_2a - p) * ca) / sa
    return _scalar_or_array(np.hypot(normal, tangential), t)


def h_value(body, alpha, t):
    """Signed offset along ``u'(t)`` from the foot of the origin on the support line at ``t``
    to the isoptic point; its absolute value is the distance between the two."""
    alpha = check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    val = (support_eval(body, t) * math.cos(alpha) + support_eval(body, t + np.pi - alpha)) / math.sin(alpha)
    return _scalar_or_array(val, t)


def isoptic_speed(body, alpha, t):
    """``|gamma_alpha'(t)| = q(t) / sin(alpha)``."""
    alpha = check_alpha(alpha)
    return contact_chord_q(body, alpha, t) / math.sin(alpha)


CHORD_FUNCTIONS = {
    "a": chord_a,
    "b": chord_b,
    "c": chord_c,
    "d": chord_d,
    "q": contact_chord_q,
    "lambda": isoptic_chord_lambda,
    "h": h_value,
}


def chord_function(which: str):
    try:
        return CHORD_FUNCTIONS[which]
    except KeyError:
        raise ValueError(f"unknown chord {which!r}; expected one of {', '.join(CHORD_NAMES)}") from None


# geometric cross-checks -------------------------------------------------------

def tangent_chords_geometric(body, alpha, t) -> dict:
    """``a, b, c, d, q, lambda, h`` recomputed as plain point distances."""
    alpha = check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    s = t + np.pi - alpha
    iso = isoptic_point(body, alpha, t)
    foot_t = np.asarray(support_eval(body, t))[..., None] * unit(t)
    foot_s = np.asarray(support_eval(body, s))[..., None] * unit(s)
    dist = lambda x, y: _scalar_or_array(np.linalg.norm(x - y, axis=-1), t)  # noqa: E731
    return {
        "a": dist(iso, boundary_point(body, t)),
        "b": dist(iso, boundary_point(body, s)),
        "c": dist(iso, isoptic_point(body, alpha, s)),
        "d": dist(foot_t, foot_s),
        "q": dist(boundary_point(body, t), boundary_point(body, s)),
        "lambda": dist(isoptic_point(body, alpha, s), isoptic_point(body, alpha, t - np.pi + alpha)),
        "h": dist(iso, foot_t),  # unsigned
    }


@dataclass(frozen=True)
class ChordSet:
    t: float
    alpha: float
    a: float
    b: float
    c: float
    d: float
    q: float
    lam: float
    h: float

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "q": self.q, "lambda": self.lam, "h": self.h}


def tangent_chords(body, alpha, t: float) -> ChordSet:
    """All chord functions at a single parameter ``t``."""
    t = float(t)
    vals = {k: float(fn(body, alpha, t)) for k, fn in CHORD_FUNCTIONS.items()}
    return ChordSet(t, float(alpha), vals["a"], vals["b"], vals["c"], vals["d"], vals["q"], vals["lambda"], vals["h"])


# profiles -------------------------------------------------------------------------

@dataclass(frozen=True)
class ChordProfile:
    which: str
    alpha: float
    t: np.ndarray
    values: np.ndarray
    min: float
    max: float
    mean: float
    relative_spread: float

    def is_constant(self, tol: float = CONSTANCY_TOL) -> bool:
        return self.relative_spread <= tol

    def stats(self) -> dict:
        return {"min": self.min, "max": self.max, "mean": self.mean, "relative_spread": self.relative_spread}


def profile(body, alpha, which: str = "c", grid_size: int = DEFAULT_GRID) -> ChordProfile:
    """Sample one chord function on a uniform grid of ``[0, 2π)``."""
    if grid_size < 256:
        raise ValueError("grid_size must be >= 256")
    fn = chord_function(which)
    t = uniform_grid(grid_size)
    values = np.asarray(fn(body, alpha, t), dtype=float)
    lo, hi, mean = float(values.min()), float(values.max()), float(values.mean())
    return ChordProfile(which, float(alpha), t, values, lo, hi, mean, (hi - lo) / mean)


@contextlib.contextmanager
def _text_sink(target):
    """Yield a writable text stream for a path or an already open stream."""
    if hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", newline="") as fh:
            yield fh


def write_profile_csv(prof: ChordProfile, path) -> None:
    with _text_sink(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in zip(prof.t, prof.values):
            w.writerow([f"{t:.17g}", f"{v:.17g}"])


# sampled isoptics and homothety ----------------------------------------------------------

@dataclass(frozen=True)
class IsopticCurve:
    body: FourierBody
    alpha: float
    t: np.ndarray
    points: np.ndarray

    def __len__(self):
        return len(self.t)

    def closure_gap(self) -> float:
        """Distance between the point at ``t = 2π`` and the first sample."""
        return float(np.linalg.norm(isoptic_point(self.body, self.alpha, 2 * np.pi) - self.points[0]))


def sample_isoptic(body, alpha, grid_size: int = DEFAULT_GRID) -> IsopticCurve:
    t = uniform_grid(grid_size)
    return IsopticCurve(body, check_alpha(alpha), t, isoptic_point(body, alpha, t))


def write_curve_csv(t, points, path) -> None:
    with _text_sink(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x", "y"])
        for ti, (x, y) in zip(t, points):
            w.writerow([f"{ti:.17g}", f"{x:.17g}", f"{y:.17g}"])


@dataclass(frozen=True)
class HomothetyFit:
    ratio: float
    center: tuple[float, float] | None  # None for a pure translation (ratio 1)
    residual: float
    shift: float  # parameter offset (radians) pairing B(t) with A(t + shift)


def homothety_fit(curve_a, curve_b, refine: bool = True) -> HomothetyFit:
    """Least-squares fit ``B ≈ center + ratio (A - center)`` over cyclic alignments.

    ``curve_a``/``curve_b`` are `IsopticCurve` objects or ``(N, 2)`` arrays
    sampled on the same uniform parameter grid. All integer shifts are tried
    (ratio may be negative); with ``refine`` the best shift is then polished to
    a fractional offset using trigonometric interpolation, which is exact for
    curves of bandwidth below the Nyquist limit.
    """
    pa = np.asarray(getattr(curve_a, "points", curve_a), dtype=float)
    pb = np.asarray(getattr(curve_b, "points", curve_b), dtype=float)
    if pa.shape != pb.shape or pa.ndim != 2 or pa.shape[1] != 2:
        raise ValueError("curves must be sampled with equal counts as (N, 2) arrays")
    n = len(pa)
    za = pa[:, 0] + 1j * pa[:, 1]
    zb = pb[:, 0] + 1j * pb[:, 1]
    za0 = za - za.mean()
    zb0 = zb - zb.mean()
    norm_a = float(np.sum(np.abs(za0) ** 2))
    if norm_a <= 1e-300 or norm_a <= 1e-24 * n * max(1.0, float(np.max(np.abs(za))) ** 2):
        raise DegenerateFitError("first curve has no spread about its centroid")

    fa, fb = np.fft.fft(za0), np.fft.fft(zb0)
    # corr[k] = sum_i zb0[i] * conj(za0[i + k])
    corr = np.fft.fft(fb * np.conj(fa)) / n
    k = int(np.argmax(np.abs(corr.real)))
    shift = float(k)

    if refine:
        freq = np.fft.fftfreq(n) * n
        if n % 2 == 0:
            freq[n // 2] = 0.0  # the Nyquist bin has no well-defined fractional shift
        w = fb * np.conj(fa) / n

        def dcorr(s):
            return float(np.sum(w * (-2j * np.pi * freq / n) * np.exp(-2j * np.pi * freq * s / n)).real)

        lo, hi = k - 1.0, k + 1.0
        if dcorr(lo) * dcorr(hi) < 0:
            shift = brentq(dcorr, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)

    freq = np.fft.fftfreq(n) * n
    if n % 2 == 0:
        freq[n // 2] = 0.0
    za_shift = np.fft.ifft(fa * np.exp(2j * np.pi * freq * shift / n)) if shift != k else np.roll(za0, -k)
    ratio = float(np.sum(zb0 * np.conj(za_shift)).real / norm_a)
    resid = zb0 - ratio * za_shift
    rms = math.sqrt(float(np.mean(np.abs(resid) ** 2)))
    mean_radius = float(np.mean(np.abs(zb0)))
    offset = zb.mean() - ratio * za.mean()
    center = None
    if abs(1 - ratio) > 1e-12:
        c = offset / (1 - ratio)
        center = (float(c.real), float(c.imag))
    return HomothetyFit(ratio, center, rms / mean_radius if mean_radius > 0 else math.inf,
                        float(shift) * 2 * math.pi / n)


# circumscribed polygons ------------------------------------------------------------------

@dataclass(frozen=True)
class PolygonFrame:
    """Regular-angled N-gon circumscribed about a body.

    Side ``k`` lies on the support line with normal ``u(phase + 2πk/N)``; vertex
    ``k`` is where sides ``k`` and ``k+1`` meet.
    """

    sides: int
    phase: float
    directions: np.ndarray
    vertices: np.ndarray
    tangency_points: np.ndarray
    side_lengths: np.ndarray

    @property
    def interior_angle(self) -> float:
        return (self.sides - 2) * math.pi / self.sides

    def tangency_parameters(self) -> np.ndarray:
        """Position of each contact point along its side (0 = previous vertex, 1 = next)."""
        prev = np.roll(self.vertices, 1, axis=0)
        seg = self.vertices - prev
        return np.sum((self.tangency_points - prev) * seg, axis=1) / np.sum(seg * seg, axis=1)

    def isoptic_residuals(self, body: FourierBody) -> np.ndarray:
        expected = isoptic_point(body, self.interior_angle, self.directions)
        return np.linalg.norm(self.vertices - expected, axis=1)


def circumscribed_polygon(body: FourierBody, sides: int, phase: float = 0.0) -> PolygonFrame:
    if int(sides) != sides or sides < 3:
        raise ValueError(f"a polygon needs at least 3 sides, got {sides!r}")
    sides = int(sides)
    theta = phase + 2 * np.pi * np.arange(sides) / sides
    p = support_eval(body, theta)
    normals = unit(theta)
    nxt = np.roll(np.arange(sides), -1)
    vertices = np.empty((sides, 2))
    for k in range(sides):
        m = np.array([normals[k], normals[nxt[k]]])
        vertices[k] = np.linalg.solve(m, [p[k], p[nxt[k]]])
    side_lengths = np.linalg.norm(vertices - np.roll(vertices, 1, axis=0), axis=1)
    return PolygonFrame(sides, float(phase), theta, vertices, boundary_point(body, theta), side_lengths)
