import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from isoptic_lab.analysis import predicted_c_spread
from isoptic_lab.fourier_body import BodySpecError, FourierBody, Harmonic, NonConvexBodyError
from isoptic_lab.isoptic import circumscribed_polygon, profile
from isoptic_lab.rotors import (
    DET_TOL,
    InadmissibleHarmonicError,
    RotorSpec,
    admissible_angles,
    admissible_harmonics,
    build_rotor,
    determinant_c,
    determinant_h,
    format_angle,
    load_rotor_spec,
    parity_admissible,
    rotor,
    rotor_spec_from_dict,
)


def fractions_up_to(q_max):
    for q in range(2, q_max + 1):
        for s in range(1, q):
            if math.gcd(s, q) == 1:
                yield Fraction(s, q)


class TestDeterminantC:
    def test_triangle_order_four(self):
        assert determinant_c(4, math.pi / 3).det <= 1e-14

    def test_order_two_right_angle(self):
        d = determinant_c(2, math.pi / 2)
        assert d.e1 == pytest.approx(0.0, abs=1e-15)
        assert d.e2 == pytest.approx(2.0)
        assert d.det == pytest.approx(4.0)

    def test_square_order_five(self):
        assert determinant_c(5, math.pi / 2).admissible

    def test_fraction_means_multiple_of_pi(self):
        assert determinant_c(7, Fraction(2, 3)).det == pytest.approx(determinant_c(7, 2 * math.pi / 3).det, abs=1e-15)

    def test_det_is_sum_of_squares(self):
        d = determinant_c(6, 0.77)
        assert d.det == pytest.approx(d.e1**2 + d.e2**2, rel=1e-15)

    @pytest.mark.parametrize("n", [0, 1])
    def test_rejects_low_order(self, n):
        with pytest.raises(ValueError):
            determinant_c(n, 1.0)

    @pytest.mark.parametrize("alpha", [0.0, math.pi, 5.0])
    def test_rejects_bad_angle(self, alpha):
        with pytest.raises(ValueError):
            determinant_c(3, alpha)


class TestDeterminantH:
    def test_order_one_right_angle(self):
        assert determinant_h(1, math.pi / 2) == pytest.approx(1.0)

    def test_order_three_third_turn(self):
        assert determinant_h(3, math.pi / 3) == pytest.approx(20.25)

    def test_positive_example(self):
        assert determinant_h(4, math.pi / 5) > 0

    def test_positive_over_sweep(self):
        alphas = np.linspace(0.01, math.pi - 0.01, 1000)
        worst = min(determinant_h(n, a) for n in range(1, 51) for a in alphas)
        assert worst > 0


class TestAdmissibleAngles:
    @pytest.mark.parametrize(
        "n, expected",
        [
            (4, {Fraction(1, 5), Fraction(3, 5), Fraction(1, 3)}),
            (7, {Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1, 3), Fraction(2, 3)}),
            (5, {Fraction(1, 3), Fraction(2, 3), Fraction(1, 2)}),
        ],
    )
    def test_examples(self, n, expected):
        assert set(admissible_angles(n)) == expected

    def test_sorted_and_unique(self):
        for n in range(2, 30):
            got = admissible_angles(n)
            assert got == sorted(set(got))
            assert all(0 < a < 1 for a in got)

    @pytest.mark.parametrize("n", range(2, 16))
    def test_every_angle_has_vanishing_determinant(self, n):
        assert all(determinant_c(n, a).det <= DET_TOL for a in admissible_angles(n))

    @pytest.mark.parametrize("n", range(2, 13))
    def test_no_zero_missing_on_fine_grid(self, n):
        # refine each local minimum of det on a 1e5-point grid; any true zero must be listed
        grid = np.linspace(0, math.pi, 100_001)[1:-1]
        dets = _det_vec(n, grid)
        is_min = (dets[1:-1] <= dets[:-2]) & (dets[1:-1] <= dets[2:]) & (dets[1:-1] < 1e-3)
        listed = [float(a) * math.pi for a in admissible_angles(n)]
        h = grid[1] - grid[0]
        for i in np.nonzero(is_min)[0] + 1:
            res = minimize_scalar(lambda a: determinant_c(n, a).det, bounds=(grid[i] - h, grid[i] + h),
                                  method="bounded", options={"xatol": 1e-13})
            if res.fun <= DET_TOL:
                assert min(abs(res.x - a) for a in listed) < 1e-6, res.x

    def test_rejects_low_order(self):
        with pytest.raises(ValueError):
            admissible_angles(1)


def _det_vec(n, a):
    e1 = -2 * np.sin(n * (np.pi - a)) * np.cos(a) + np.sin(2 * n * a)
    e2 = 2 * np.cos(n * (np.pi - a)) * np.cos(a) + 1 + np.cos(2 * n * a)
    return e1 * e1 + e2 * e2


class TestAdmissibilityEquivalence:
    def test_determinant_matches_parity_rule(self):
        mismatches = [
            (n, alpha)
            for n in range(2, 51)
            for alpha in fractions_up_to(30)
            if determinant_c(n, alpha).admissible != parity_admissible(n, alpha)
        ]
        assert mismatches == []

    def test_parity_rule_matches_listed_angles(self):
        for n in range(2, 51):
            listed = set(admissible_angles(n))
            assert {a for a in fractions_up_to(60) if parity_admissible(n, a)} <= listed
            assert all(parity_admissible(n, a) for a in listed)

    def test_admissible_zeros_are_tiny(self):
        worst = max(determinant_c(n, a).det for n in range(2, 51) for a in admissible_angles(n) if a.denominator <= 30)
        assert worst < 1e-14


class TestAdmissibleHarmonics:
    def test_third_turn(self):
        got = admissible_harmonics(1, 3, 10)
        assert 4 in got and 5 in got

    def test_two_thirds(self):
        assert 7 in admissible_harmonics(2, 3, 10)

    def test_right_angle(self):
        got = admissible_harmonics(1, 2, 10)
        assert {3, 5} <= set(got)
        assert 2 not in got and 4 not in got

    @pytest.mark.parametrize("s, q", [(2, 4), (0, 3), (3, 3), (4, 3)])
    def test_rejects_bad_fraction(self, s, q):
        with pytest.raises(ValueError):
            admissible_harmonics(s, q, 10)

    def test_format(self):
        assert format_angle(Fraction(3, 5)) == "3/5pi"


class TestBuildRotor:
    @pytest.mark.parametrize(
        "sides, terms, a0, c0",
        [
            (3, {4: (0.0, 1.0)}, 30.0, 60 / math.tan(math.pi / 6)),
            (6, {7: (1.0, 0.0)}, 80.0, 160 / math.tan(math.pi / 3)),
            (4, {5: (1.0, 0.0)}, 60.0, 120.0),
            (3, {4: (0.0, 1.0), 5: (1.0, 0.0)}, 70.0, 140 / math.tan(math.pi / 6)),
        ],
    )
    def test_reference_rotors(self, sides, terms, a0, c0):
        b = rotor(sides, terms, a0)
        alpha = (sides - 2) * math.pi / sides
        prof = profile(b, alpha, "c")
        assert prof.relative_spread <= 1e-9
        assert prof.mean == pytest.approx(c0, rel=1e-12)
        frames = [circumscribed_polygon(b, sides, ph) for ph in np.linspace(0, 2 * math.pi / sides, 7)]
        lengths = np.concatenate([f.side_lengths for f in frames])
        assert (lengths.max() - lengths.min()) / lengths.mean() <= 1e-9
        assert max(f.isoptic_residuals(b).max() for f in frames) <= 1e-9 * a0

    def test_hexagon_constant(self):
        assert 160 / math.tan(math.pi / 3) == pytest.approx(92.3760430703, rel=1e-10)

    @given(
        st.integers(3, 9),
        st.data(),
    )
    @settings(max_examples=30, deadline=None)
    def test_random_admissible_rotors(self, sides, data):
        alpha = Fraction(sides - 2, sides)
        orders = [n for n in range(2, 25) if parity_admissible(n, alpha)]
        chosen = data.draw(st.lists(st.sampled_from(orders), min_size=1, max_size=3, unique=True))
        hs = tuple(Harmonic(n, data.draw(st.floats(-1, 1)), data.draw(st.floats(-1, 1))) for n in chosen)
        if all(h.amplitude == 0 for h in hs):
            return
        b = build_rotor(RotorSpec(sides, hs))
        a = float(alpha) * math.pi
        assert profile(b, a, "c").relative_spread <= 1e-9
        f = circumscribed_polygon(b, sides, data.draw(st.floats(0, 2 * math.pi)))
        assert (f.side_lengths.max() - f.side_lengths.min()) / f.side_lengths.mean() <= 1e-9
        assert f.isoptic_residuals(b).max() <= 1e-9 * b.a0

    def test_auto_a0_keeps_half_margin(self):
        spec = RotorSpec(4, (Harmonic(5, 1.0, 0.0), Harmonic(3, 0.0, 0.5)))
        assert spec.auto_a0() == pytest.approx(2 * (24 + 8 * 0.5))
        b = build_rotor(spec)
        from isoptic_lab.fourier_body import convexity_margin

        assert convexity_margin(b) >= b.a0 / 2 - 1e-9

    def test_translation_always_allowed(self):
        b = rotor(3, {1: (2.0, -1.0), 4: (0.0, 1.0)}, 30.0)
        assert profile(b, math.pi / 3, "c").relative_spread <= 1e-9

    def test_inadmissible_rejected_with_determinant(self):
        with pytest.raises(InadmissibleHarmonicError, match=r"n=3.*determinant 9"):
            rotor(3, {3: (1.0, 0.0)}, 30.0)

    def test_nonconvex_rejected(self):
        with pytest.raises(NonConvexBodyError):
            rotor(4, {5: (1.0, 0.0)}, 10.0)


class TestContrapositive:
    @pytest.mark.parametrize("n, alpha", [(5, Fraction(2, 5)), (2, Fraction(1, 2)), (4, Fraction(1, 2)), (3, Fraction(1, 3))])
    def test_inadmissible_pair_has_predicted_spread(self, n, alpha):
        a = float(alpha) * math.pi
        a0 = 2.0 * (n * n - 1)
        b = FourierBody(a0, (Harmonic(n, 1.0, 0.0),))
        spread = profile(b, a, "c").relative_spread
        assert spread == pytest.approx(predicted_c_spread(n, a, a0), rel=1e-6)
        assert spread > 1e-4

    @given(st.integers(2, 20), st.sampled_from(list(fractions_up_to(12))), st.floats(0, 2 * math.pi))
    @settings(max_examples=60, deadline=None)
    def test_spread_formula(self, n, alpha, phase):
        a = float(alpha) * math.pi
        a0 = 2.0 * (n * n - 1)
        b = FourierBody(a0, (Harmonic(n, math.cos(phase), math.sin(phase)),))
        measured = profile(b, a, "c", 4096).relative_spread
        predicted = predicted_c_spread(n, a, a0)
        # a sampled sinusoid can miss its peaks by a relative (n h)^2 / 8 on each side
        h = 2 * math.pi / 4096
        assert predicted * (1 - (n * h) ** 2 / 4) - 1e-13 <= measured <= predicted * (1 + 1e-9) + 1e-13


class TestRotorSpecFiles:
    def test_parse(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text(json.dumps({"sides": 4, "harmonics": [{"n": 5, "a": 1, "b": 0}], "a0": "auto"}))
        spec = load_rotor_spec(path)
        assert spec.sides == 4 and spec.a0 is None
        assert spec.interior_angle == Fraction(1, 2)

    @pytest.mark.parametrize(
        "data, field",
        [
            ({"sides": 2, "harmonics": []}, "sides"),
            ({"sides": "x"}, "sides"),
            ({"sides": 4, "a0": "big"}, "a0"),
            ({"sides": 4, "harmonics": [{"n": 0}]}, r"harmonics\[0\]\.n"),
        ],
    )
    def test_errors_name_field(self, data, field):
        with pytest.raises(BodySpecError, match=field):
            rotor_spec_from_dict(data)
