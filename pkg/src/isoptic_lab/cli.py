"""``isoptic-lab`` command line.

Exit status: 0 on success or a passing/informational verdict, 1 on a failing
verdict, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import analysis, chords3d
from .fourier_body import (
    CONSTANCY_TOL,
    BodySpecError,
    NonConvexBodyError,
    convexity_margin,
    dump_body,
    load_body,
    perimeter,
    support_eval,
    boundary_point,
    symmetry_predicates,
    width_profile,
)
from .isoptic import (
    CHORD_NAMES,
    AngleError,
    circumscribed_polygon,
    profile,
    sample_isoptic,
    write_curve_csv,
    write_profile_csv,
)
from .rotors import (
    InadmissibleHarmonicError,
    admissible_angles,
    build_rotor,
    determinant_c,
    format_angle,
    load_rotor_spec,
    parity_admissible,
)
from .svg import FIGURES, build_scene, figure_scene, render_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_RATIONAL = [
    (re.compile(r"^(\d+)/(\d+)\*?pi$"), lambda m: Fraction(int(m[1]), int(m[2]))),
    (re.compile(r"^(\d*)\*?pi/(\d+)$"), lambda m: Fraction(int(m[1] or 1), int(m[2]))),
    (re.compile(r"^(\d*)\*?pi$"), lambda m: Fraction(int(m[1] or 1))),
]


#: descriptive aliases for the numeric check ids
CHECK_ALIASES = {
    "constant-c": "1", "constant-c-and-q": "2", "constant-h": "3", "lambda-2d": "4",
    "lambda-bound": "5", "q-bound": "JY", "sections": "6", "equichordal": "7",
    "alpha-chord": "8", "right-chord": "9",
}


class UsageError(Exception):
    pass


def parse_angle(text: str) -> tuple[float, Fraction | None]:
    """``'1/3pi'``, ``'pi/3'``, ``'2pi/3'`` or a decimal in radians -> ``(radians, fraction-of-pi or None)``."""
    s = text.strip().replace("π", "pi").replace(" ", "")
    for pattern, make in _RATIONAL:
        m = pattern.match(s)
        if m:
            frac = make(m)
            return float(frac) * math.pi, frac
    try:
        return float(s), None
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}; use s/qpi (e.g. 1/3pi) or radians") from None


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2, default=analysis._json_default)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _alpha(args) -> float:
    if args.alpha is None:
        raise UsageError("--alpha is required")
    return parse_angle(args.alpha)[0]


# subcommands ------------------------------------------------------------------------

def cmd_body(args) -> int:
    body = load_body(args.body)
    if args.action == "export":
        if args.out:
            dump_body(body, args.out)
        else:
            _emit(body.to_dict())
        return EXIT_OK
    t = parse_angle(args.t)[0]
    sym = symmetry_predicates(body)
    wp = width_profile(body, args.grid)
    _emit({
        "t": t,
        "p": support_eval(body, t, 0),
        "dp": support_eval(body, t, 1),
        "ddp": support_eval(body, t, 2),
        "boundary_point": boundary_point(body, t).tolist(),
        "perimeter": perimeter(body),
        "min_width": wp.min_width,
        "constant_width": sym.constant_width,
        "centrally_symmetric": sym.centrally_symmetric,
        "rotational_period": sym.rotational_period,
        "convexity_margin": convexity_margin(body),
    })
    return EXIT_OK


def cmd_isoptic(args) -> int:
    body = load_body(args.body)
    curve = sample_isoptic(body, _alpha(args), args.grid)
    if args.out:
        write_curve_csv(curve.t, curve.points, args.out)
    else:
        write_curve_csv(curve.t, curve.points, sys.stdout)
    return EXIT_OK


def cmd_profile(args) -> int:
    body = load_body(args.body)
    prof = profile(body, _alpha(args), args.chord, args.grid)
    if args.out:
        write_profile_csv(prof, args.out)
        _emit({"chord": args.chord, "alpha": prof.alpha, **prof.stats()})
    else:
        write_profile_csv(prof, sys.stdout)
    return EXIT_OK


def cmd_rotor(args) -> int:
    if args.action == "angles":
        if args.n is None or args.n < 2:
            raise UsageError("rotor angles needs --n >= 2")
        angles = admissible_angles(args.n)
        _emit({"n": args.n, "angles": [format_angle(a) for a in angles],
               "radians": [float(a) * math.pi for a in angles]})
        return EXIT_OK
    if args.action == "harmonics":
        alpha, frac = parse_angle(args.alpha or "")
        if not 0 < alpha < math.pi:
            raise UsageError("alpha must lie in (0, pi)")
        if frac is not None:
            orders = [n for n in range(2, args.n_max + 1) if parity_admissible(n, frac)]
        else:
            orders = [n for n in range(2, args.n_max + 1) if determinant_c(n, alpha).admissible]
        _emit({"alpha": format_angle(frac) if frac is not None else alpha, "n_max": args.n_max,
               "harmonics": orders})
        return EXIT_OK
    if not args.spec:
        raise UsageError("rotor build needs --spec")
    spec = load_rotor_spec(args.spec)
    body = build_rotor(spec)
    if args.out:
        dump_body(body, args.out)
    alpha = float(spec.interior_angle) * math.pi
    prof = profile(body, alpha, "c", args.grid)
    _emit({"body": body.to_dict(), "sides": spec.sides, "interior_angle": format_angle(spec.interior_angle),
           "c0": prof.mean, "c_relative_spread": prof.relative_spread})
    return EXIT_OK


def _verdict_code(report) -> int:
    return EXIT_FAIL if report.verdict == analysis.FAIL else EXIT_OK


def cmd_verify(args) -> int:
    theorem = CHECK_ALIASES.get(args.theorem.lower(), args.theorem.upper())
    if theorem in ("2", "6"):
        _emit({"theorem": theorem, "verdict": analysis.INFO,
               "notice": "not machine-checkable at desk scale; see the corpus-level property tests"})
        return EXIT_OK
    if theorem in ("1", "3", "4", "5", "JY"):
        if not args.body:
            raise UsageError(f"theorem {theorem} needs --body")
        body = load_body(args.body)
        alpha = _alpha(args)
        check = {
            "1": lambda: analysis.check_constant_c(body, alpha, args.tol or CONSTANCY_TOL, args.grid),
            "3": lambda: analysis.check_constant_h(body, alpha, args.tol or CONSTANCY_TOL, args.grid),
            "4": lambda: analysis.check_lambda_equals_2d(body, alpha, args.grid),
            "5": lambda: analysis.check_lambda_inequality(body, alpha, args.grid),
            "JY": lambda: analysis.check_q_inequality(body, alpha, args.grid),
        }[theorem]
        report = check()
    elif theorem == "7":
        outer = chords3d.load_body3d(args.outer) if args.outer else chords3d.Ball(radius=2.0)
        inner = chords3d.load_body3d(args.inner) if args.inner else chords3d.Ball(radius=1.0)
        report = chords3d.check_equichordal(outer, inner, args.count, args.seed, args.tol or 1e-6)
    elif theorem in ("8", "9"):
        body = chords3d.load_body3d(args.body3d) if args.body3d else chords3d.Ball(radius=1.0)
        if theorem == "8":
            alpha = _alpha(args) if args.alpha else math.pi / 2
            report = chords3d.check_alpha_chord_bound(body, alpha, args.count, args.seed, args.tol or 1e-6)
        else:
            report = chords3d.check_right_chords(body, args.count, args.seed, args.tol or 1e-6)
    else:
        raise UsageError(f"unknown theorem id {args.theorem!r}")
    _emit(report.to_dict(), args.out)
    return _verdict_code(report)


def cmd_polygon(args) -> int:
    body = load_body(args.body)
    if args.sides is None or args.sides < 3:
        raise UsageError("polygon frames needs --sides >= 3")
    phases = [parse_angle(p)[0] for p in args.phase] if args.phase else [
        2 * math.pi * k / (args.sides * args.count) for k in range(args.count)]
    frames = []
    for ph in phases:
        f = circumscribed_polygon(body, args.sides, ph)
        frames.append({
            "phase": ph,
            "vertices": f.vertices.tolist(),
            "tangency_points": f.tangency_points.tolist(),
            "side_lengths": f.side_lengths.tolist(),
            "max_isoptic_residual": float(f.isoptic_residuals(body).max()),
        })
    _emit({"sides": args.sides, "frames": frames}, args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    if args.figure:
        scene = figure_scene(args.figure, args.count)
    else:
        if not args.body:
            raise UsageError("render needs --body or --figure")
        body = load_body(args.body)
        alphas = [parse_angle(a)[0] for a in (args.isoptic or [])]
        scene = build_scene(body, alphas, args.sides, args.count, title=body.describe())
    if not args.out:
        raise UsageError("render needs --out")
    render_svg(scene, args.out)
    return EXIT_OK


def cmd_probe3d(args) -> int:
    if args.action == "tangent":
        if not (args.outer and args.inner):
            raise UsageError("probe3d tangent needs --outer and --inner")
        outer, inner = chords3d.load_body3d(args.outer), chords3d.load_body3d(args.inner)
        samples = chords3d.tangent_chord_lengths(outer, inner, args.count, args.seed)
    else:
        if not args.body3d:
            raise UsageError("probe3d alpha needs --body3d")
        samples = chords3d.alpha_chords(chords3d.load_body3d(args.body3d), _alpha(args), args.count, args.seed)
    if args.out:
        chords3d.write_samples_csv(samples, args.out)
    st = chords3d.chord_spread(samples)
    _emit({"min": st.min, "max": st.max, "mean": st.mean, "relative_spread": st.relative_spread,
           "count": st.count, "failures": st.failures,
           "diagnostics": [s.message for s in samples if not s.ok]})
    return EXIT_OK


# parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=2048, help="samples per curve (default 2048)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="override the constancy/length tolerance")
    common.add_argument("--out", help="output file")

    parser = argparse.ArgumentParser(prog="isoptic-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("body", parents=[common], help="evaluate or re-export a body spec")
    p.add_argument("action", choices=["eval", "export"])
    p.add_argument("--body", required=True)
    p.add_argument("--t", default="0")
    p.set_defaults(func=cmd_body)

    p = sub.add_parser("isoptic", parents=[common], help="sample an isoptic curve as t,x,y CSV")
    p.add_argument("action", choices=["sample"])
    p.add_argument("--body", required=True)
    p.add_argument("--alpha")
    p.set_defaults(func=cmd_isoptic)

    p = sub.add_parser("profile", parents=[common], help="sample one chord function as t,value CSV")
    p.add_argument("--body", required=True)
    p.add_argument("--alpha")
    p.add_argument("--chord", choices=CHORD_NAMES, default="c")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("rotor", parents=[common], help="admissible angles/harmonics and rotor bodies")
    p.add_argument("action", choices=["angles", "harmonics", "build"])
    p.add_argument("--n", type=int)
    p.add_argument("--alpha")
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--spec")
    p.set_defaults(func=cmd_rotor)

    p = sub.add_parser("verify", parents=[common], help="run one theorem check and print a JSON report")
    p.add_argument("--theorem", required=True, help="check id (1-9 or JY) or name: " + ", ".join(CHECK_ALIASES))
    p.add_argument("--body")
    p.add_argument("--alpha")
    p.add_argument("--outer")
    p.add_argument("--inner")
    p.add_argument("--body3d")
    p.add_argument("--count", type=int, default=500)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("polygon", parents=[common], help="circumscribed regular-angled polygons")
    p.add_argument("action", choices=["frames"])
    p.add_argument("--body", required=True)
    p.add_argument("--sides", type=int)
    p.add_argument("--phase", action="append", help="repeatable; default is --count evenly spaced phases")
    p.add_argument("--count", type=int, default=3)
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("render", parents=[common], help="SVG of a body with isoptics and frames")
    p.add_argument("--body")
    p.add_argument("--figure", choices=sorted(FIGURES))
    p.add_argument("--isoptic", action="append", help="isoptic angle, repeatable")
    p.add_argument("--sides", type=int)
    p.add_argument("--count", type=int, default=3, help="number of polygon frames")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("probe3d", parents=[common], help="3-D tangent-chord and alpha-chord sampling")
    p.add_argument("action", choices=["tangent", "alpha"])
    p.add_argument("--outer")
    p.add_argument("--inner")
    p.add_argument("--body3d")
    p.add_argument("--alpha")
    p.add_argument("--count", type=int, default=500)
    p.set_defaults(func=cmd_probe3d)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InadmissibleHarmonicError as exc:
        print(f"isoptic-lab: inadmissible rotor spec: {exc}", file=sys.stderr)
    except (UsageError, BodySpecError, NonConvexBodyError, AngleError,
            chords3d.BodySpec3DError, chords3d.ContainmentError) as exc:
        print(f"isoptic-lab: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"isoptic-lab: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"isoptic-lab: {exc}", file=sys.stderr)
    return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
