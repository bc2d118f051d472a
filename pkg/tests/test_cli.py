import csv
import json
import math
import subprocess
import sys

import pytest

from isoptic_lab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, parse_angle, run


@pytest.fixture
def specs(tmp_path):
    files = {
        "triangle.json": {"a0": 30, "harmonics": [{"n": 4, "a": 0, "b": 1}]},
        "square.json": {"a0": 60, "harmonics": [{"n": 5, "a": 1, "b": 0}]},
        "disc.json": {"a0": 1.5},
        "bad_field.json": {"a0": 5, "harmonics": [{"n": 3, "a": "x"}]},
        "rotor_ok.json": {"sides": 4, "harmonics": [{"n": 5, "a": 1, "b": 0}], "a0": "auto"},
        "rotor_bad.json": {"sides": 3, "harmonics": [{"n": 3, "a": 1, "b": 0}], "a0": "auto"},
    }
    for name, data in files.items():
        (tmp_path / name).write_text(json.dumps(data))
    return tmp_path


def run_json(argv, capsys):
    code = run([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


class TestParseAngle:
    @pytest.mark.parametrize(
        "text, frac",
        [("1/3pi", (1, 3)), ("pi/3", (1, 3)), ("2pi/3", (2, 3)), ("3/5π", (3, 5)), ("pi", (1, 1))],
    )
    def test_rationals(self, text, frac):
        rad, f = parse_angle(text)
        assert (f.numerator, f.denominator) == frac
        assert rad == pytest.approx(math.pi * frac[0] / frac[1])

    def test_decimal(self):
        assert parse_angle("0.75") == (0.75, None)

    def test_garbage(self):
        from isoptic_lab.cli import UsageError

        with pytest.raises(UsageError):
            parse_angle("third")


class TestCommands:
    def test_rotor_angles(self, capsys):
        code, out = run_json(["rotor", "angles", "--n", "4"], capsys)
        assert code == EXIT_OK
        assert out["angles"] == ["1/5pi", "1/3pi", "3/5pi"]

    def test_verify_lambda_inequality(self, specs, capsys):
        code, out = run_json(["verify", "--theorem", "5", "--body", specs / "triangle.json", "--alpha", "1/3pi"], capsys)
        assert code == EXIT_OK and out["verdict"] == "pass"
        assert set(out) == {"theorem", "body", "alpha", "measurements", "tolerances", "verdict"}

    def test_profile_square_rotor(self, specs, capsys):
        out_csv = specs / "c.csv"
        code, stats = run_json(["profile", "--body", specs / "square.json", "--alpha", "1/2pi", "--chord", "c",
                                "--out", out_csv], capsys)
        assert code == EXIT_OK
        with open(out_csv) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2048
        assert all(abs(float(r["value"]) - 120.0) <= 1e-7 for r in rows)
        assert stats["relative_spread"] <= 1e-9

    def test_profile_to_stdout(self, specs, capsys):
        code = run(["profile", "--body", str(specs / "disc.json"), "--alpha", "1.0", "--grid", "256"])
        lines = capsys.readouterr().out.splitlines()
        assert code == EXIT_OK and lines[0] == "t,value" and len(lines) == 257

    def test_verify_failure_exit_code(self, specs, capsys):
        code, out = run_json(["verify", "--theorem", "1", "--body", specs / "square.json", "--alpha", "2/5pi"], capsys)
        assert code == EXIT_FAIL and out["verdict"] == "fail"

    def test_named_check_alias(self, specs, capsys):
        code, out = run_json(["verify", "--theorem", "lambda-bound", "--body", specs / "triangle.json",
                              "--alpha", "1/3pi"], capsys)
        assert code == EXIT_OK and out["theorem"] == "5"

    @pytest.mark.parametrize("theorem", ["2", "6"])
    def test_verify_not_checkable(self, theorem, capsys):
        code, out = run_json(["verify", "--theorem", theorem], capsys)
        assert code == EXIT_OK and "not machine-checkable" in out["notice"]

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "--theorem", "3", "--alpha", "1.0"],
            ["verify", "--theorem", "4", "--alpha", "1/3pi"],
            ["verify", "--theorem", "JY", "--alpha", "1/3pi"],
        ],
    )
    def test_verify_planar_ids(self, specs, argv, capsys):
        code, out = run_json(argv + ["--body", specs / "triangle.json"], capsys)
        assert code == EXIT_OK and out["verdict"] in ("pass", "informational")

    def test_verify_3d_ids(self, capsys):
        code, out = run_json(["verify", "--theorem", "7", "--count", "100"], capsys)
        assert code == EXIT_OK and out["measurements"]["expected_length"] == pytest.approx(2 * math.sqrt(3))
        code, out = run_json(["verify", "--theorem", "9", "--count", "100",
                              "--body3d", '{"kind": "ellipsoid", "semi_axes": [1, 1, 1.5]}'], capsys)
        assert code == EXIT_OK and out["verdict"] == "pass"
        code, out = run_json(["verify", "--theorem", "8", "--count", "50", "--alpha", "1/3pi"], capsys)
        assert code == EXIT_OK

    def test_rotor_harmonics_rational_and_decimal_agree(self, capsys):
        _, rational = run_json(["rotor", "harmonics", "--alpha", "1/2pi", "--n-max", "12"], capsys)
        _, decimal = run_json(["rotor", "harmonics", "--alpha", repr(math.pi / 2), "--n-max", "12"], capsys)
        assert rational["harmonics"] == decimal["harmonics"] == [3, 5, 7, 9, 11]

    def test_rotor_build(self, specs, capsys):
        code, out = run_json(["rotor", "build", "--spec", specs / "rotor_ok.json", "--out", specs / "built.json"], capsys)
        assert code == EXIT_OK and out["c_relative_spread"] <= 1e-9
        assert json.loads((specs / "built.json").read_text())["a0"] == 48.0

    def test_body_eval_and_export(self, specs, capsys):
        code, out = run_json(["body", "eval", "--body", specs / "triangle.json", "--t", "0"], capsys)
        assert code == EXIT_OK
        assert out["boundary_point"] == [30.0, 4.0] and out["min_width"] == pytest.approx(58.0)
        code, out = run_json(["body", "export", "--body", specs / "triangle.json"], capsys)
        assert out == {"a0": 30.0, "harmonics": [{"n": 4, "a": 0.0, "b": 1.0}]}

    def test_isoptic_sample(self, specs, capsys):
        code = run(["isoptic", "sample", "--body", str(specs / "disc.json"), "--alpha", "1/2pi", "--grid", "300"])
        rows = capsys.readouterr().out.splitlines()
        assert code == EXIT_OK and rows[0] == "t,x,y" and len(rows) == 301
        x, y = map(float, rows[1].split(",")[1:])
        assert math.hypot(x, y) == pytest.approx(1.5 * math.sqrt(2))

    def test_polygon_frames(self, specs, capsys):
        code, out = run_json(["polygon", "frames", "--body", specs / "square.json", "--sides", "4", "--count", "3"], capsys)
        assert code == EXIT_OK and len(out["frames"]) == 3
        for f in out["frames"]:
            assert f["side_lengths"] == pytest.approx([120.0] * 4, rel=1e-12)
            assert f["max_isoptic_residual"] <= 1e-9 * 60

    def test_probe3d(self, specs, capsys):
        code, out = run_json(["probe3d", "tangent", "--outer", '{"kind": "ball", "radius": 2}',
                              "--inner", '{"kind": "ball", "radius": 1}', "--count", "20",
                              "--out", specs / "s.csv"], capsys)
        assert code == EXIT_OK and out["relative_spread"] <= 1e-12 and out["failures"] == 0
        assert len((specs / "s.csv").read_text().splitlines()) == 21

    def test_render(self, specs, capsys):
        assert run(["render", "--figure", "triangle-sin4", "--out", str(specs / "f.svg")]) == EXIT_OK
        assert (specs / "f.svg").read_text().count("<polyline") == 3


class TestErrors:
    def test_malformed_spec_names_field(self, specs, capsys):
        code = run(["body", "eval", "--body", str(specs / "bad_field.json")])
        assert code == EXIT_USAGE
        assert "harmonics[0].a" in capsys.readouterr().err

    def test_inadmissible_rotor_cites_determinant(self, specs, capsys):
        code = run(["rotor", "build", "--spec", str(specs / "rotor_bad.json")])
        err = capsys.readouterr().err
        assert code == EXIT_USAGE and "n=3" in err and "determinant" in err

    def test_missing_file(self, specs, capsys):
        assert run(["body", "eval", "--body", str(specs / "nope.json")]) == EXIT_USAGE
        assert "nope.json" in capsys.readouterr().err

    def test_bad_angle(self, specs, capsys):
        assert run(["profile", "--body", str(specs / "disc.json"), "--alpha", "pi"]) == EXIT_USAGE
        assert run(["profile", "--body", str(specs / "disc.json"), "--alpha", "wide"]) == EXIT_USAGE

    def test_unknown_subcommand(self, capsys):
        assert run(["bogus"]) == EXIT_USAGE

    def test_unknown_theorem(self, capsys):
        assert run(["verify", "--theorem", "11"]) == EXIT_USAGE

    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == EXIT_OK


class TestDeterminism:
    def test_byte_identical_outputs(self, specs):
        def once(tag):
            out = specs / f"{tag}.csv"
            svg = specs / f"{tag}.svg"
            rep = specs / f"{tag}.json"
            run(["profile", "--body", str(specs / "triangle.json"), "--alpha", "1/3pi", "--chord", "lambda",
                 "--out", str(out)])
            run(["render", "--body", str(specs / "triangle.json"), "--isoptic", "1/3pi", "--sides", "3",
                 "--out", str(svg)])
            run(["verify", "--theorem", "7", "--count", "50", "--out", str(rep)])
            return out.read_bytes(), svg.read_bytes(), rep.read_bytes()

        assert once("a") == once("b")

    def test_export_round_trip(self, specs):
        run(["body", "export", "--body", str(specs / "triangle.json"), "--out", str(specs / "rt.json")])
        run(["body", "export", "--body", str(specs / "rt.json"), "--out", str(specs / "rt2.json")])
        assert (specs / "rt.json").read_bytes() == (specs / "rt2.json").read_bytes()

    def test_module_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "isoptic_lab", "rotor", "angles", "--n", "5"],
                             capture_output=True, text=True, check=True)
        assert json.loads(res.stdout)["angles"] == ["1/3pi", "1/2pi", "2/3pi"]
