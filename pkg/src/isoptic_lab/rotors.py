"""Harmonic/angle admissibility and rotor construction for regular polygons.

A harmonic of order ``n`` can appear in a body whose ``c``-chord is constant
at angle ``alpha`` exactly when the 2x2 system for ``(a_n, b_n)`` is singular.
That happens iff ``cos n·alpha = -cos alpha`` (n even) or
``cos n·alpha = cos alpha`` (n odd). Rational angles ``s/q · π`` are handled
as `fractions.Fraction` so the number-theoretic test stays exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .fourier_body import (
    BodySpecError,
    FourierBody,
    Harmonic,
    NonConvexBodyError,
    convexity_margin,
    parse_harmonics,
)

#: determinant values at or below this count as zero
DET_TOL = 1e-12


class InadmissibleHarmonicError(ValueError):
    def __init__(self, n: int, alpha: float, det: float):
        super().__init__(
            f"harmonic n={n} is not admissible at alpha={alpha:.17g} (determinant {det:.6g} > {DET_TOL:g})"
        )
        self.n, self.alpha, self.det = n, alpha, det


@dataclass(frozen=True)
class Determinant:
    e1: float
    e2: float
    det: float

    @property
    def admissible(self) -> bool:
        return self.det <= DET_TOL


def _radians(alpha) -> float:
    return float(alpha) * math.pi if isinstance(alpha, Fraction) else float(alpha)


def determinant_c(n: int, alpha) -> Determinant:
    """Singularity measure of the order-``n`` system for constant ``c``.

    ``alpha`` is in radians, or a `Fraction` meaning that multiple of π.
    """
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    a = _radians(alpha)
    if not 0 < a < math.pi:
        raise ValueError(f"alpha must lie in (0, pi), got {a!r}")
    e1 = -2 * math.sin(n * (math.pi - a)) * math.cos(a) + math.sin(2 * n * a)
    e2 = 2 * math.cos(n * (math.pi - a)) * math.cos(a) + 1 + math.cos(2 * n * a)
    return Determinant(e1, e2, e1 * e1 + e2 * e2)


def determinant_h(n: int, alpha) -> float:
    """Determinant of the order-``n`` system for constant ``h``; positive for every n >= 1."""
    a = _radians(alpha)
    s = math.sin(n * (math.pi - a))
    c = math.cos(a) + math.cos(n * (math.pi - a))
    return n * n * (s * s + c * c)


def parity_admissible(n: int, alpha: Fraction) -> bool:
    """Exact test: is ``alpha·π`` of the form ``(2r+1)π/(n±1)`` (n even) or ``2rπ/(n±1)`` (n odd)?"""
    alpha = Fraction(alpha)
    want = 1 if n % 2 == 0 else 0
    for m in (n + 1, n - 1):
        x = alpha * m
        if x.denominator == 1 and x.numerator % 2 == want:
            return True
    return False


def admissible_angles(n: int) -> list[Fraction]:
    """All admissible angles in ``(0, π)`` for order ``n``, as fractions of π, sorted."""
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    start = 1 if n % 2 == 0 else 2
    found = set()
    for m in (n + 1, n - 1):
        for k in range(start, m, 2):
            found.add(Fraction(k, m))
    return sorted(found)


def admissible_harmonics(s: int, q: int, n_max: int) -> list[int]:
    """Orders ``2 <= n <= n_max`` admissible at ``alpha = s/q · π`` (determinant test)."""
    if not (0 < s < q) or math.gcd(s, q) != 1:
        raise ValueError(f"need 0 < s < q with gcd(s, q) = 1, got s={s}, q={q}")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    alpha = Fraction(s, q)
    return [n for n in range(2, n_max + 1) if determinant_c(n, alpha).admissible]


def format_angle(alpha: Fraction) -> str:
    """``Fraction(3, 5)`` -> ``'3/5pi'``."""
    return f"{alpha.numerator}/{alpha.denominator}pi"


# rotor construction -----------------------------------------------------------------

@dataclass(frozen=True)
class RotorSpec:
    sides: int
    harmonics: tuple[Harmonic, ...]
    a0: float | None = None  # None -> automatic

    @property
    def interior_angle(self) -> Fraction:
        return Fraction(self.sides - 2, self.sides)

    def auto_a0(self) -> float:
        deficit = sum((h.order**2 - 1) * h.amplitude for h in self.harmonics)
        return max(1.0, 2 * deficit)


def rotor_spec_from_dict(data: Mapping) -> RotorSpec:
    """Parse ``{"sides": N, "harmonics": [{"n", "a", "b"}], "a0": number | "auto"}``."""
    if not isinstance(data, Mapping):
        raise BodySpecError("rotor spec must be a JSON object")
    sides = data.get("sides")
    if isinstance(sides, bool) or not isinstance(sides, int) or sides < 3:
        raise BodySpecError(f"field 'sides' must be an integer >= 3, got {sides!r}")
    a0 = data.get("a0", "auto")
    if a0 != "auto" and (isinstance(a0, bool) or not isinstance(a0, (int, float))):
        raise BodySpecError(f"field 'a0' must be a number or \"auto\", got {a0!r}")
    hs = parse_harmonics(data.get("harmonics", []))
    return RotorSpec(sides, hs, None if a0 == "auto" else float(a0))


def load_rotor_spec(path) -> RotorSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BodySpecError(f"{path}: invalid JSON ({exc})") from exc
    return rotor_spec_from_dict(data)


def build_rotor(spec: RotorSpec) -> FourierBody:
    """Body with the requested harmonics that rotates inside the regular ``spec.sides``-gon.

    Order-1 terms are translations and always allowed. Raises
    `InadmissibleHarmonicError` or `NonConvexBodyError`.
    """
    alpha = spec.interior_angle
    for h in spec.harmonics:
        if h.order == 1:
            continue
        d = determinant_c(h.order, alpha)
        if not d.admissible or not parity_admissible(h.order, alpha):
            raise InadmissibleHarmonicError(h.order, float(alpha) * math.pi, d.det)
    a0 = spec.auto_a0() if spec.a0 is None else spec.a0
    body = FourierBody(a0, spec.harmonics, check=False)
    margin = convexity_margin(body)
    if margin <= 0:
        raise NonConvexBodyError(margin)
    return FourierBody(a0, spec.harmonics)


def rotor(sides: int, terms: Mapping[int, tuple[float, float]] | Sequence[Harmonic], a0: float | None = None):
    """Shorthand: ``rotor(3, {4: (0, 1)}, a0=30)``."""
    hs = tuple(Harmonic(n, a, b) for n, (a, b) in terms.items()) if isinstance(terms, Mapping) else tuple(terms)
    return build_rotor(RotorSpec(sides, hs, a0))
