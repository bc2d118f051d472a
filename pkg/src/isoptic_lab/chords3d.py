"""Tangent chords and alpha-chords of convex bodies in R^3.

Bodies are implicit (``F(x) <= 0`` inside) with analytic gradients and live
in their own local frame given by ``center`` and an orthogonal ``rotation``.
Random draws happen in that local frame, so rigidly moving a configuration
with the same seed moves every sample with it.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import brentq, minimize
from scipy.special import eval_legendre

from .analysis import FAIL, PASS, VerificationReport
from .isoptic import _text_sink

ENDPOINT_TOL = 1e-9
NEWTON_TOL = 1e-9
#: sufficient bound on |eps| m (m + 1) for a strictly convex perturbed sphere
CURVATURE_SAFE = 0.5


class ContainmentError(ValueError):
    pass


class BodySpec3DError(ValueError):
    pass


def _orthonormal_basis(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors completing ``n`` to a right-handed frame."""
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(n, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n, e1)


def random_unit_vectors(rng: np.random.Generator, count: int) -> np.ndarray:
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@dataclass(frozen=True)
class ImplicitBody3D:
    """Base class. Subclasses implement the local-frame methods."""

    center: tuple = (0.0, 0.0, 0.0)
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        rot = np.asarray(self.rotation, dtype=float)
        if rot.shape != (3, 3) or not np.allclose(rot @ rot.T, np.eye(3), atol=1e-12):
            raise BodySpec3DError("rotation must be an orthogonal 3x3 matrix")
        object.__setattr__(self, "rotation", rot)

    # frame helpers
    def to_local(self, x):
        return (np.asarray(x, dtype=float) - np.asarray(self.center)) @ self.rotation

    def to_world(self, y):
        return np.asarray(y, dtype=float) @ self.rotation.T + np.asarray(self.center)

    def transformed(self, rotation, translation):
        """Copy moved by ``x -> rotation @ x + translation``."""
        rotation = np.asarray(rotation, dtype=float)
        center = rotation @ np.asarray(self.center) + np.asarray(translation, dtype=float)
        return dataclasses.replace(self, center=tuple(center), rotation=rotation @ self.rotation)

    # world-frame API
    def implicit(self, x):
        return self._implicit_local(self.to_local(x))

    def gradient(self, x):
        return self._gradient_local(self.to_local(x)) @ self.rotation.T

    def normal(self, x):
        g = self.gradient(x)
        return g / np.linalg.norm(g, axis=-1, keepdims=True)

    def boundary_from_normal(self, u):
        """Boundary point whose outward normal is ``u``."""
        u = np.asarray(u, dtype=float)
        return self.to_world(self._support_point_local(u @ self.rotation))

    def sample_surface(self, rng: np.random.Generator, count: int):
        """``count`` boundary points and their outward normals (world frame)."""
        pts, nrm = self._sample_surface_local(rng, count)
        return self.to_world(pts), nrm @ self.rotation.T

    def support(self, u):
        u = np.asarray(u, dtype=float)
        return float(np.dot(self.boundary_from_normal(u), u))

    def width(self, u) -> float:
        u = np.asarray(u, dtype=float)
        return self.support(u) + self.support(-u)

    # to be provided
    def _implicit_local(self, y):
        raise NotImplementedError

    def _gradient_local(self, y):
        raise NotImplementedError

    def _support_point_local(self, u):
        raise NotImplementedError

    def _sample_surface_local(self, rng, count):
        raise NotImplementedError

    def bounding_radius(self) -> float:
        raise NotImplementedError

    def min_width(self) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Ball(ImplicitBody3D):
    radius: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if not self.radius > 0:
            raise BodySpec3DError("ball radius must be positive")

    def _implicit_local(self, y):
        return np.sum(y * y, axis=-1) / self.radius**2 - 1.0

    def _gradient_local(self, y):
        return 2 * y / self.radius**2

    def _support_point_local(self, u):
        return self.radius * u

    def _sample_surface_local(self, rng, count):
        u = random_unit_vectors(rng, count)
        return self.radius * u, u

    def bounding_radius(self):
        return self.radius

    def min_width(self):
        return 2 * self.radius

    def to_dict(self):
        return {"kind": "ball", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Ellipsoid(ImplicitBody3D):
    semi_axes: tuple = (1.0, 1.0, 1.0)

    def __post_init__(self):
        super().__post_init__()
        axes = tuple(float(a) for a in self.semi_axes)
        if len(axes) != 3 or min(axes) <= 0:
            raise BodySpec3DError("ellipsoid needs three positive semi-axes")
        object.__setattr__(self, "semi_axes", axes)

    @property
    def _axes(self):
        return np.asarray(self.semi_axes)

    def _implicit_local(self, y):
        return np.sum((y / self._axes) ** 2, axis=-1) - 1.0

    def _gradient_local(self, y):
        return 2 * y / self._axes**2

    def _support_point_local(self, u):
        a2u = self._axes**2 * u
        return a2u / np.sqrt(np.sum(u * a2u, axis=-1, keepdims=True))

    def _sample_surface_local(self, rng, count):
        # area-uniform: map sphere points, accept with probability of the area element
        a = self._axes
        gmax = max(a[0] * a[1], a[1] * a[2], a[0] * a[2])
        pts = []
        while len(pts) < count:
            v = random_unit_vectors(rng, 1)[0]
            g = math.sqrt((a[1] * a[2] * v[0]) ** 2 + (a[0] * a[2] * v[1]) ** 2 + (a[0] * a[1] * v[2]) ** 2)
            if rng.uniform() * gmax <= g:
                pts.append(a * v)
        pts = np.array(pts)
        grad = self._gradient_local(pts)
        return pts, grad / np.linalg.norm(grad, axis=1, keepdims=True)

    def bounding_radius(self):
        return max(self.semi_axes)

    def min_width(self):
        return 2 * min(self.semi_axes)

    def to_dict(self):
        return {"kind": "ellipsoid", "center": list(self.center), "semi_axes": list(self.semi_axes)}


@dataclass(frozen=True)
class PerturbedSphere(ImplicitBody3D):
    """Radial function ``radius (1 + eps P_m(z))`` with ``P_m`` the Legendre polynomial of the polar cosine."""

    radius: float = 1.0
    eps: float = 0.0
    order: int = 2

    def __post_init__(self):
        super().__post_init__()
        if not self.radius > 0:
            raise BodySpec3DError("radius must be positive")
        if self.order < 1:
            raise BodySpec3DError("perturbation order must be >= 1")
        if not abs(self.eps) * self.order * (self.order + 1) < CURVATURE_SAFE:
            raise BodySpec3DError(f"need |eps| m (m + 1) < {CURVATURE_SAFE} to keep the surface strictly convex")

    def radial(self, mu):
        return self.radius * (1 + self.eps * eval_legendre(self.order, mu))

    def _dlegendre(self, mu):
        m = self.order
        # P_m'(x) = m (x P_m - P_{m-1}) / (x^2 - 1), with the endpoint limit m(m+1)/2
        mu = np.asarray(mu, dtype=float)
        den = mu * mu - 1
        safe = np.abs(den) > 1e-12
        out = np.where(safe, m * (mu * eval_legendre(m, mu) - eval_legendre(m - 1, mu)) / np.where(safe, den, 1.0),
                       np.sign(mu) ** (m + 1) * m * (m + 1) / 2)
        return out

    def _implicit_local(self, y):
        r = np.linalg.norm(y, axis=-1)
        return r - self.radial(y[..., 2] / r)

    def _gradient_local(self, y):
        r = np.linalg.norm(y, axis=-1, keepdims=True)
        yhat = y / r
        mu = yhat[..., 2:3]
        ez = np.zeros_like(y)
        ez[..., 2] = 1.0
        dmu = (ez - mu * yhat) / r
        return yhat - self.radius * self.eps * self._dlegendre(mu) * dmu

    def _support_point_local(self, u):
        u = np.asarray(u, dtype=float)
        if u.ndim == 2:
            return np.array([self._support_point_local(v) for v in u])
        return _newton_support_point(self, u)

    def _sample_surface_local(self, rng, count):
        # radial projection of uniform directions; close to area-uniform for small eps
        v = random_unit_vectors(rng, count)
        pts = self.radial(v[:, 2])[:, None] * v
        grad = self._gradient_local(pts)
        return pts, grad / np.linalg.norm(grad, axis=1, keepdims=True)

    def bounding_radius(self):
        return self.radius * (1 + abs(self.eps))

    def min_width(self, samples: int = 300):
        """Minimal width: best direction of a Fibonacci lattice, polished by Nelder-Mead."""
        k = np.arange(samples) + 0.5
        z = k / samples  # upper hemisphere suffices, width(u) == width(-u)
        phi = np.pi * (1 + 5**0.5) * k
        dirs = np.column_stack([np.sqrt(1 - z * z) * np.cos(phi), np.sqrt(1 - z * z) * np.sin(phi), z])

        def width_local(u):
            u = u / np.linalg.norm(u)
            return float(np.dot(self._support_point_local(u) - self._support_point_local(-u), u))

        widths = [width_local(u) for u in dirs]
        u0 = dirs[int(np.argmin(widths))]
        e1, e2 = _orthonormal_basis(u0)
        res = minimize(lambda st: width_local(u0 + st[0] * e1 + st[1] * e2), np.zeros(2),
                       method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
        return float(min(res.fun, min(widths)))

    def to_dict(self):
        return {"kind": "perturbed_sphere", "center": list(self.center), "radius": self.radius,
                "eps": self.eps, "order": self.order}


class NewtonFailure(RuntimeError):
    pass


def _newton_support_point(body: PerturbedSphere, u: np.ndarray, max_iter: int = 50) -> np.ndarray:
    """Damped Newton for the boundary point with outward normal ``u`` (local frame)."""
    e1, e2 = _orthonormal_basis(u)

    def point(st):
        w = u + st[0] * e1 + st[1] * e2
        w = w / np.linalg.norm(w)
        return body.radial(w[2]) * w

    def resid(st):
        g = body._gradient_local(point(st))
        g = g / np.linalg.norm(g)
        return np.array([g @ e1, g @ e2])

    st = np.zeros(2)
    r = resid(st)
    h = 1e-7
    for _ in range(max_iter):
        if np.linalg.norm(r) <= NEWTON_TOL * 1e-2:
            break
        jac = np.column_stack([(resid(st + h * e) - resid(st - h * e)) / (2 * h) for e in np.eye(2)])
        step = np.linalg.solve(jac, -r)
        lam = 1.0
        while lam > 1e-6:
            trial = st + lam * step
            rt = resid(trial)
            if np.linalg.norm(rt) < np.linalg.norm(r):
                st, r = trial, rt
                break
            lam *= 0.5
        else:
            break
    if np.linalg.norm(r) > NEWTON_TOL:
        raise NewtonFailure(f"Newton did not converge for normal {u.tolist()} (residual {np.linalg.norm(r):.3g})")
    return point(st)


def body3d_from_dict(data: Mapping) -> ImplicitBody3D:
    if not isinstance(data, Mapping) or "kind" not in data:
        raise BodySpec3DError("3-D body spec must be an object with field 'kind'")
    kind = data["kind"]
    center = data.get("center", [0.0, 0.0, 0.0])
    if len(center) != 3:
        raise BodySpec3DError("field 'center' must have three entries")
    try:
        if kind == "ball":
            return Ball(center, radius=float(data["radius"]))
        if kind == "ellipsoid":
            return Ellipsoid(center, semi_axes=tuple(data["semi_axes"]))
        if kind == "perturbed_sphere":
            return PerturbedSphere(center, radius=float(data["radius"]), eps=float(data.get("eps", 0.0)),
                                   order=int(data.get("order", 2)))
    except KeyError as exc:
        raise BodySpec3DError(f"{kind} spec is missing field {exc.args[0]!r}") from None
    raise BodySpec3DError(f"unknown body kind {kind!r}")


def load_body3d(source) -> ImplicitBody3D:
    """Parse a JSON file path or an inline JSON object string."""
    text = str(source).strip()
    if not text.startswith("{"):
        with open(source) as fh:
            text = fh.read()
    try:
        return body3d_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise BodySpec3DError(f"invalid JSON for 3-D body ({exc})") from exc


# sampling ------------------------------------------------------------------------

@dataclass(frozen=True)
class ChordSample3D:
    point: np.ndarray
    direction: np.ndarray
    endpoint_a: np.ndarray
    endpoint_b: np.ndarray
    length: float
    ok: bool = True
    message: str = ""


def _line_exit(outer: ImplicitBody3D, z: np.ndarray, d: np.ndarray, step: float) -> float:
    """Parameter ``s > 0`` where ``z + s d`` leaves ``outer``."""
    f = lambda s: float(outer.implicit(z + s * d))  # noqa: E731
    lo, hi = 0.0, step
    for _ in range(10_000):
        if f(hi) > 0:
            break
        lo, hi = hi, hi + step
    else:
        raise RuntimeError("failed to bracket the boundary along the chord")
    s = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return s


def check_containment(outer: ImplicitBody3D, inner: ImplicitBody3D, samples: int = 2000, seed: int = 0) -> None:
    pts, _ = inner.sample_surface(np.random.default_rng(seed), samples)
    worst = float(np.max(outer.implicit(pts)))
    if worst >= 0:
        raise ContainmentError(f"inner body is not strictly inside the outer body (max F = {worst:.3g})")


def _chord_through(outer, z, d, step) -> ChordSample3D:
    try:
        s_plus = _line_exit(outer, z, d, step)
        s_minus = _line_exit(outer, z, -d, step)
    except (RuntimeError, ValueError) as exc:
        nan = np.full(3, np.nan)
        return ChordSample3D(z, d, nan, nan, math.nan, False, str(exc))
    a, b = z - s_minus * d, z + s_plus * d
    worst = max(abs(float(outer.implicit(a))), abs(float(outer.implicit(b))))
    if worst > ENDPOINT_TOL:
        return ChordSample3D(z, d, a, b, s_plus + s_minus, False, f"endpoint residual {worst:.3g}")
    return ChordSample3D(z, d, a, b, float(np.linalg.norm(b - a)))


def tangent_chord_lengths(outer: ImplicitBody3D, inner: ImplicitBody3D, count: int, seed: int = 0,
                          check: bool = True) -> list[ChordSample3D]:
    """Chords of ``outer`` touching ``inner`` at random points in random tangent directions."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if check:
        check_containment(outer, inner, seed=seed + 1)
    rng = np.random.default_rng(seed)
    pts, normals = inner.sample_surface(rng, count)
    phis = rng.uniform(0, 2 * np.pi, count)
    step = 0.1 * 2 * outer.bounding_radius()
    samples = []
    for z, n, phi in zip(pts, normals, phis):
        # tangent frame built in the inner body's local frame, then rotated out
        n_loc = n @ inner.rotation
        e1, e2 = _orthonormal_basis(n_loc)
        d = (math.cos(phi) * e1 + math.sin(phi) * e2) @ inner.rotation.T
        samples.append(_chord_through(outer, z, d, step))
    return samples


def alpha_chords(body: ImplicitBody3D, alpha: float, count: int, seed: int = 0) -> list[ChordSample3D]:
    """Segments joining boundary points whose tangent planes meet at angle ``alpha``.

    The outward normals are ``u1`` (uniform) and ``u2`` at angle ``pi - alpha``
    from ``u1`` (uniform on that cone). ``point`` is the midpoint and
    ``direction`` the unit chord direction.
    """
    if not 0 < alpha < math.pi:
        raise ValueError(f"alpha must lie in (0, pi), got {alpha!r}")
    rng = np.random.default_rng(seed)
    u1s = random_unit_vectors(rng, count)
    phis = rng.uniform(0, 2 * np.pi, count)
    beta = math.pi - alpha
    samples = []
    for u1, phi in zip(u1s, phis):
        e1, e2 = _orthonormal_basis(u1)
        u2 = math.cos(beta) * u1 + math.sin(beta) * (math.cos(phi) * e1 + math.sin(phi) * e2)
        w1, w2 = u1 @ body.rotation.T, u2 @ body.rotation.T
        try:
            a = body.boundary_from_normal(w1)
            b = body.boundary_from_normal(w2)
        except NewtonFailure as exc:
            nan = np.full(3, np.nan)
            samples.append(ChordSample3D(nan, nan, nan, nan, math.nan, False, str(exc)))
            continue
        vec = b - a
        length = float(np.linalg.norm(vec))
        samples.append(ChordSample3D((a + b) / 2, vec / length if length > 0 else vec, a, b, length))
    return samples


@dataclass(frozen=True)
class ChordSpread:
    min: float
    max: float
    mean: float
    relative_spread: float
    count: int
    failures: int


def chord_spread(samples) -> ChordSpread:
    if not samples:
        raise ValueError("no samples")
    lengths = np.array([s.length for s in samples if s.ok])
    failures = sum(not s.ok for s in samples)
    if lengths.size == 0:
        raise ValueError("every sample failed")
    lo, hi, mean = float(lengths.min()), float(lengths.max()), float(lengths.mean())
    return ChordSpread(lo, hi, mean, (hi - lo) / mean, int(lengths.size), failures)


def write_samples_csv(samples, path) -> None:
    with _text_sink(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["px", "py", "pz", "dx", "dy", "dz", "ax", "ay", "az", "bx", "by", "bz", "length"])
        for s in samples:
            row = [*s.point, *s.direction, *s.endpoint_a, *s.endpoint_b, s.length]
            w.writerow([f"{float(v):.17g}" for v in row])


# verification reports -------------------------------------------------------------

def _concentric_balls(outer, inner) -> bool:
    return (isinstance(outer, Ball) and isinstance(inner, Ball)
            and np.allclose(outer.center, inner.center, atol=1e-12))


def check_equichordal(outer: ImplicitBody3D, inner: ImplicitBody3D, count: int = 500, seed: int = 0,
                      tolerance: float = 1e-6):
    """Tangent chords are constant for concentric balls and only then.

    A constant-length sample from anything but concentric balls fails; so
    does a concentric-ball sample off the closed form ``2 sqrt(R^2 - r^2)``.
    """
    samples = tangent_chord_lengths(outer, inner, count, seed)
    st = chord_spread(samples)
    constant = st.max - st.min <= tolerance
    meas = {"min": st.min, "max": st.max, "mean": st.mean, "relative_spread": st.relative_spread,
            "count": st.count, "failures": st.failures, "constant": constant}
    if _concentric_balls(outer, inner):
        expected = 2 * math.sqrt(outer.radius**2 - inner.radius**2)
        meas["expected_length"] = expected
        meas["max_error"] = max(abs(st.max - expected), abs(st.min - expected))
        ok = meas["max_error"] <= tolerance
    else:
        ok = not constant
    ok = ok and st.failures == 0
    return VerificationReport("7", {"outer": outer.to_dict(), "inner": inner.to_dict()}, None, meas,
                              {"length": tolerance}, PASS if ok else FAIL)


def check_alpha_chord_bound(body: ImplicitBody3D, alpha: float, count: int = 500, seed: int = 0,
                            tolerance: float = 1e-6):
    """Some alpha-chord is at least ``w0 cos(alpha/2)`` long; never longer only for a ball."""
    st = chord_spread(alpha_chords(body, alpha, count, seed))
    w0 = body.min_width()
    bound = w0 * math.cos(alpha / 2)
    exists = st.max >= bound - tolerance
    equality = st.max <= bound + tolerance
    meas = {"max_length": st.max, "min_length": st.min, "bound": bound, "min_width": w0,
            "no_longer_chord": equality, "is_ball": isinstance(body, Ball), "failures": st.failures}
    ok = exists and (isinstance(body, Ball) or not equality) and st.failures == 0
    return VerificationReport("8", {"body": body.to_dict()}, alpha, meas, {"length": tolerance},
                              PASS if ok else FAIL)


def check_right_chords(body: ImplicitBody3D, count: int = 500, seed: int = 0, tolerance: float = 1e-6):
    """Constant-length right-angle chords only for a ball."""
    st = chord_spread(alpha_chords(body, math.pi / 2, count, seed))
    constant = st.max - st.min <= tolerance
    meas = {"min": st.min, "max": st.max, "mean": st.mean, "relative_spread": st.relative_spread,
            "constant": constant, "is_ball": isinstance(body, Ball), "failures": st.failures}
    if isinstance(body, Ball):
        meas["expected_length"] = body.radius * math.sqrt(2)
        ok = abs(st.max - meas["expected_length"]) <= tolerance and constant
    else:
        ok = not constant
    ok = ok and st.failures == 0
    return VerificationReport("9", {"body": body.to_dict()}, math.pi / 2, meas, {"length": tolerance},
                              PASS if ok else FAIL)
