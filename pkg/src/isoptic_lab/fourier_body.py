"""Planar convex bodies given by a truncated Fourier support function.

A body is stored as ``p(t) = a0 + sum_n (a_n cos nt + b_n sin nt)``, where
``p(t)`` is the support function in the direction ``u(t) = (cos t, sin t)``.
Order-1 terms only translate the body.
"""

from __future__ import annotations

import json
import math
from dataclasses import InitVar, dataclass, field
from functools import reduce
from typing import Iterable, Mapping

import numpy as np
from scipy.optimize import minimize_scalar

#: relative spread below which a sampled function counts as constant
CONSTANCY_TOL = 1e-9

#: coefficients with magnitude at or below this are treated as absent
COEFF_ZERO = 1e-14


class BodySpecError(ValueError):
    """Malformed body description (bad order, duplicate order, bad field)."""


class NonConvexBodyError(ValueError):
    """The support function does not describe a strictly convex body."""

    def __init__(self, margin: float):
        super().__init__(f"body is not strictly convex: min(p + p'') = {margin:.6g} <= 0")
        self.margin = margin


@dataclass(frozen=True)
class Harmonic:
    order: int
    cos_coeff: float = 0.0
    sin_coeff: float = 0.0

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise BodySpecError(f"harmonic order must be an integer >= 1, got {self.order!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "cos_coeff", float(self.cos_coeff))
        object.__setattr__(self, "sin_coeff", float(self.sin_coeff))

    @property
    def amplitude(self) -> float:
        return math.hypot(self.cos_coeff, self.sin_coeff)


@dataclass(frozen=True)
class FourierBody:
    """Immutable convex body ``p(t) = a0 + sum(a_n cos nt + b_n sin nt)``.

    Harmonics are kept sorted by order. Construction rejects bodies whose
    radius of curvature ``p + p''`` is not strictly positive; pass
    ``check=False`` to build one anyway (e.g. to measure how bad it is).
    """

    a0: float
    harmonics: tuple[Harmonic, ...] = field(default=())
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        a0 = float(self.a0)
        if not math.isfinite(a0) or a0 <= 0:
            raise BodySpecError(f"mean term a0 must be a positive number, got {self.a0!r}")
        object.__setattr__(self, "a0", a0)
        hs = tuple(h if isinstance(h, Harmonic) else Harmonic(*h) for h in self.harmonics)
        orders = [h.order for h in hs]
        if len(set(orders)) != len(orders):
            raise BodySpecError(f"duplicate harmonic order in {sorted(orders)}")
        for h in hs:
            if not (math.isfinite(h.cos_coeff) and math.isfinite(h.sin_coeff)):
                raise BodySpecError(f"non-finite coefficient for order {h.order}")
        object.__setattr__(self, "harmonics", tuple(sorted(hs, key=lambda h: h.order)))
        if check and curvature_bound(self) <= 0:
            margin = convexity_margin(self)
            if margin <= 0:
                raise NonConvexBodyError(margin)

    @classmethod
    def disc(cls, radius: float = 1.0, center: tuple[float, float] = (0.0, 0.0)) -> "FourierBody":
        hs = () if center == (0.0, 0.0) else (Harmonic(1, center[0], center[1]),)
        return cls(radius, hs)

    @classmethod
    def from_terms(cls, a0: float, terms: Mapping[int, tuple[float, float]], check: bool = True):
        """Build from ``{n: (a_n, b_n)}``."""
        return cls(a0, tuple(Harmonic(n, a, b) for n, (a, b) in terms.items()), check)

    # coefficient arrays used by the vectorised evaluators
    @property
    def orders(self) -> np.ndarray:
        return np.array([h.order for h in self.harmonics], dtype=float)

    @property
    def cos_coeffs(self) -> np.ndarray:
        return np.array([h.cos_coeff for h in self.harmonics], dtype=float)

    @property
    def sin_coeffs(self) -> np.ndarray:
        return np.array([h.sin_coeff for h in self.harmonics], dtype=float)

    @property
    def max_order(self) -> int:
        return max((h.order for h in self.harmonics), default=0)

    def active_harmonics(self) -> tuple[Harmonic, ...]:
        return tuple(h for h in self.harmonics if h.amplitude > COEFF_ZERO)

    def __call__(self, t, derivative_order: int = 0):
        return support_eval(self, t, derivative_order)

    # transformations -----------------------------------------------------
    def scaled(self, s: float) -> "FourierBody":
        if s <= 0:
            raise ValueError("scale factor must be positive")
        return FourierBody(
            self.a0 * s, tuple(Harmonic(h.order, h.cos_coeff * s, h.sin_coeff * s) for h in self.harmonics)
        )

    def rotated(self, theta: float) -> "FourierBody":
        """Body rotated by ``theta`` about the origin, i.e. ``p_new(t) = p(t - theta)``."""
        hs = []
        for h in self.harmonics:
            c, s = math.cos(h.order * theta), math.sin(h.order * theta)
            hs.append(Harmonic(h.order, h.cos_coeff * c - h.sin_coeff * s, h.cos_coeff * s + h.sin_coeff * c))
        return FourierBody(self.a0, tuple(hs))

    def translated(self, dx: float, dy: float) -> "FourierBody":
        terms = {h.order: (h.cos_coeff, h.sin_coeff) for h in self.harmonics}
        a1, b1 = terms.get(1, (0.0, 0.0))
        terms[1] = (a1 + dx, b1 + dy)
        return FourierBody.from_terms(self.a0, terms)

    def centered(self) -> "FourierBody":
        """Drop the order-1 terms (translate the Steiner point to the origin)."""
        return FourierBody(self.a0, tuple(h for h in self.harmonics if h.order != 1))

    # serialisation -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "a0": self.a0,
            "harmonics": [{"n": h.order, "a": h.cos_coeff, "b": h.sin_coeff} for h in self.harmonics],
        }

    def describe(self) -> str:
        """Human-readable support function, e.g. ``30 + sin 4t``."""
        parts = [f"{self.a0:g}"]
        for h in self.harmonics:
            for coeff, fn in ((h.cos_coeff, "cos"), (h.sin_coeff, "sin")):
                if coeff == 0:
                    continue
                arg = "t" if h.order == 1 else f"{h.order}t"
                mag = "" if abs(coeff) == 1 else f"{abs(coeff):g}·"
                parts.append(f"{'-' if coeff < 0 else '+'} {mag}{fn} {arg}")
        return " ".join(parts)


def parse_harmonics(raw) -> tuple[Harmonic, ...]:
    """Validate a JSON ``harmonics`` list: integer ``n >= 1``, no repeats, numeric ``a``/``b``."""
    if not isinstance(raw, list):
        raise BodySpecError("field 'harmonics' must be a list")
    hs = []
    seen = set()
    for i, entry in enumerate(raw):
        if not isinstance(entry, Mapping) or "n" not in entry:
            raise BodySpecError(f"harmonics[{i}] must be an object with field 'n'")
        n = entry["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise BodySpecError(f"harmonics[{i}].n must be an integer, got {n!r}")
        if n < 1:
            raise BodySpecError(f"harmonics[{i}].n must be >= 1, got {n}")
        if n in seen:
            raise BodySpecError(f"harmonics[{i}].n duplicates order {n}")
        seen.add(n)
        for key in ("a", "b"):
            v = entry.get(key, 0.0)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise BodySpecError(f"harmonics[{i}].{key} must be a number, got {v!r}")
        hs.append(Harmonic(n, entry.get("a", 0.0), entry.get("b", 0.0)))
    return tuple(hs)


def body_from_dict(data: Mapping) -> FourierBody:
    """Parse ``{"a0": x, "harmonics": [{"n": k, "a": x, "b": y}, ...]}``."""
    if not isinstance(data, Mapping):
        raise BodySpecError("body spec must be a JSON object")
    if "a0" not in data:
        raise BodySpecError("missing field 'a0'")
    a0 = data["a0"]
    if isinstance(a0, bool) or not isinstance(a0, (int, float)):
        raise BodySpecError(f"field 'a0' must be a number, got {a0!r}")
    return FourierBody(a0, parse_harmonics(data.get("harmonics", [])))


def load_body(path) -> FourierBody:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BodySpecError(f"{path}: invalid JSON ({exc})") from exc
    return body_from_dict(data)


def dump_body(body: FourierBody, path) -> None:
    with open(path, "w") as fh:
        json.dump(body.to_dict(), fh, indent=2)
        fh.write("\n")


# evaluation ---------------------------------------------------------------

def support_eval(body: FourierBody, t, derivative_order: int = 0):
    """Evaluate ``p``, ``p'`` or ``p''`` at angle(s) ``t``.

    Returns a float for scalar ``t`` and an array shaped like ``t`` otherwise.
    """
    if derivative_order not in (0, 1, 2):
        raise ValueError(f"derivative_order must be 0, 1 or 2, got {derivative_order}")
    t_arr = np.asarray(t, dtype=float)
    n = body.orders
    if n.size == 0:
        out = np.full(t_arr.shape, body.a0 if derivative_order == 0 else 0.0)
    else:
        nt = t_arr[..., None] * n
        c, s = np.cos(nt), np.sin(nt)
        a, b = body.cos_coeffs, body.sin_coeffs
        if derivative_order == 0:
            out = body.a0 + (a * c + b * s).sum(axis=-1)
        elif derivative_order == 1:
            out = (n * (b * c - a * s)).sum(axis=-1)
        else:
            out = -(n**2 * (a * c + b * s)).sum(axis=-1)
    return float(out) if np.ndim(t) == 0 else out


def unit(t):
    """Outward normal ``u(t)``; shape ``(..., 2)``."""
    t = np.asarray(t, dtype=float)
    return np.stack([np.cos(t), np.sin(t)], axis=-1)


def unit_prime(t):
    """``u'(t) = (-sin t, cos t)``."""
    t = np.asarray(t, dtype=float)
    return np.stack([-np.sin(t), np.cos(t)], axis=-1)


def boundary_point(body: FourierBody, t):
    """Boundary point with outward normal ``u(t)``: ``p u + p' u'``."""
    p = np.asarray(support_eval(body, t, 0))[..., None]
    dp = np.asarray(support_eval(body, t, 1))[..., None]
    return p * unit(t) + dp * unit_prime(t)


def radius_of_curvature(body: FourierBody, t):
    return support_eval(body, t, 0) + support_eval(body, t, 2)


def uniform_grid(grid_size: int) -> np.ndarray:
    """``grid_size`` angles on ``[0, 2π)``."""
    return 2 * np.pi * np.arange(grid_size) / grid_size


# derived quantities -------------------------------------------------------

@dataclass(frozen=True)
class WidthProfile:
    t: np.ndarray
    width: np.ndarray
    min_width: float
    relative_spread: float
    is_constant: bool


def width_profile(body: FourierBody, grid_size: int = 2048, tol: float = CONSTANCY_TOL) -> WidthProfile:
    if grid_size < 8:
        raise ValueError("grid_size must be >= 8")
    t = uniform_grid(grid_size)
    w = support_eval(body, t) + support_eval(body, t + np.pi)
    spread = float((w.max() - w.min()) / w.mean())
    return WidthProfile(t, w, float(w.min()), spread, spread <= tol)


def min_width(body: FourierBody, grid_size: int = 2048) -> float:
    """Minimal width, polished around the grid minimum with a bounded Brent search."""
    prof = width_profile(body, grid_size)
    if prof.is_constant:
        return prof.min_width
    k = int(np.argmin(prof.width))
    h = 2 * np.pi / grid_size
    res = minimize_scalar(lambda t: support_eval(body, t) + support_eval(body, t + np.pi),
                          bounds=(prof.t[k] - h, prof.t[k] + h), method="bounded",
                          options={"xatol": 1e-12})
    return float(min(res.fun, prof.min_width))


def perimeter(body: FourierBody) -> float:
    """Cauchy's formula; every harmonic integrates to zero."""
    return 2 * np.pi * body.a0


def curvature_bound(body: FourierBody) -> float:
    """Lower bound ``a0 - sum (n^2 - 1)|c_n|`` for ``min(p + p'')``."""
    return body.a0 - sum((h.order**2 - 1) * h.amplitude for h in body.harmonics)


def convexity_margin(body: FourierBody, grid_size: int | None = None) -> float:
    """Minimum of ``p + p''`` over a uniform grid.

    The grid must have at least ``64 (1 + max order)`` points; that is also
    the default. ``p + p''`` is itself a trigonometric polynomial of the same
    degree, so this resolution pins the minimum down tightly.
    """
    need = 64 * (1 + body.max_order)
    if grid_size is None:
        grid_size = need
    elif grid_size < need:
        raise ValueError(f"grid_size must be >= {need} for max order {body.max_order}")
    t = uniform_grid(grid_size)
    return float(np.min(radius_of_curvature(body, t)))


def is_convex(body: FourierBody) -> bool:
    if curvature_bound(body) > 0:
        return True
    return convexity_margin(body) > 0


def has_rotational_symmetry(body: FourierBody, theta: float, tol: float = 1e-12) -> bool:
    """True when ``p(t + theta) == p(t)`` identically (every active order n has n·theta ∈ 2πZ)."""
    return all(abs(math.sin(h.order * theta / 2)) <= tol for h in body.active_harmonics())


@dataclass(frozen=True)
class SymmetryInfo:
    constant_width: bool
    centrally_symmetric: bool
    rotational_period: float | None


def symmetry_predicates(body: FourierBody) -> SymmetryInfo:
    active = body.active_harmonics()
    constant_width = all(h.order % 2 == 1 for h in active)
    centrally_symmetric = all(h.order % 2 == 0 or h.order == 1 for h in active)
    g = reduce(math.gcd, (h.order for h in active), 0)
    period = 2 * math.pi / g if g >= 2 else None
    return SymmetryInfo(constant_width, centrally_symmetric, period)


def random_body(rng: np.random.Generator, orders: Iterable[int] = range(2, 8), a0: float = 1.0,
                min_margin: float = 0.1, max_terms: int = 3) -> FourierBody:
    """Rejection-sample a body with ``convexity_margin >= min_margin``."""
    orders = list(orders)
    while True:
        k = int(rng.integers(1, max_terms + 1))
        chosen = sorted(rng.choice(orders, size=min(k, len(orders)), replace=False))
        hs = []
        for n in chosen:
            scale = a0 / (n * n - 1)
            a, b = rng.uniform(-scale, scale, size=2)
            hs.append(Harmonic(int(n), a, b))
        body = FourierBody(a0, tuple(hs), check=False)
        if convexity_margin(body) >= min_margin:
            return body


def random_corpus(count: int = 20, seed: int = 0, **kwargs) -> list[FourierBody]:
    rng = np.random.default_rng(seed)
    return [random_body(rng, **kwargs) for _ in range(count)]
