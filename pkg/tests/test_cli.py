"""End-to-end checks of the command-line interface."""

import json
import math
import re

import pytest

from tunnelnoise.cli import main

pytestmark = pytest.mark.filterwarnings("error")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.splitlines()
    header = lines[0].split(",")
    units = lines[1]
    rows = []
    footer = []
    for line in lines[2:]:
        if line.startswith("#"):
            footer.append(line)
        else:
            rows.append([float(cell) for cell in line.split(",")])
    return header, units, rows, footer


# ------------------------------------------------------------ sweep: CSV


def test_default_sweep_shape_and_summary(capsys):
    code, out, err = run(capsys, "sweep", "--steps", "6")
    assert code == 0 and err == ""
    header, units, rows, footer = parse_csv(out)
    assert header == ["phi", "T", "R", "delta_l", "delta_p", "product"]
    assert units == "# units: eV,dimensionless,dimensionless,nm,kg*m/s,hbar"
    assert len(rows) == 6
    assert rows[0][0] == 0.0 and rows[-1][0] == 5.0
    assert "# skipped_rows: 0" in footer
    assert "# delta_p_nondecreasing: true" in footer
    assert "# product_nondecreasing: true" in footer
    zero_bias = [f for f in footer if f.startswith("# zero_bias_product_hbar:")]
    assert len(zero_bias) == 1
    assert abs(float(zero_bias[0].split(":")[1]) - 0.5) < 1e-9


def test_csv_cells_carry_twelve_significant_digits(capsys):
    code, out, _ = run(capsys, "sweep", "--steps", "3")
    data_lines = [
        line
        for line in out.splitlines()[2:]
        if line and not line.startswith("#")
    ]
    cell = re.compile(r"-?\d\.\d{11}e[+-]\d{2,3}$")
    for line in data_lines:
        for value in line.split(","):
            assert cell.match(value), value


def test_csv_reruns_are_byte_identical(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert main(["sweep", "--steps", "40", "--out", str(first)]) == 0
    assert main(["sweep", "--steps", "40", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_symmetric_gap_sweep_has_constant_product(capsys):
    code, out, _ = run(
        capsys,
        "sweep",
        "--barrier",
        "sym",
        "--sweep",
        "gap",
        "--min",
        "0.2",
        "--max",
        "1.0",
        "--steps",
        "5",
        "--columns",
        "T,product",
    )
    assert code == 0
    header, _, rows, footer = parse_csv(out)
    assert header == ["gap", "T", "product"]
    for row in rows:
        assert abs(row[2] - 0.5) < 1e-10
    # gap sweeps carry no bias-monotonicity verdict
    assert not any("nondecreasing" in line for line in footer)


def test_bias_sweep_monotone_verdicts_reflect_the_data(capsys):
    code, out, _ = run(
        capsys,
        "sweep",
        "--barrier",
        "field",
        "--min",
        "0",
        "--max",
        "4",
        "--steps",
        "9",
        "--columns",
        "delta_p,product",
    )
    assert code == 0
    _, _, rows, footer = parse_csv(out)
    kicks = [row[1] for row in rows]
    products = [row[2] for row in rows]
    assert kicks == sorted(kicks)
    assert products == sorted(products)
    assert "# delta_p_nondecreasing: true" in footer
    assert "# product_nondecreasing: true" in footer


def test_s_fq_column_on_symmetric_energy_sweep(capsys):
    code, out, _ = run(
        capsys,
        "sweep",
        "--barrier",
        "sym",
        "--gap",
        "2.0",
        "--sweep",
        "E",
        "--min",
        "0.5",
        "--max",
        "2.5",
        "--steps",
        "3",
        "--columns",
        "T,s_fq",
    )
    assert code == 0
    header, units, rows, _ = parse_csv(out)
    assert header == ["E", "T", "s_fq"]
    assert units.endswith("eV,dimensionless,N^2/Hz")
    for row in rows:
        assert row[2] > 0 and math.isfinite(row[2])


# ----------------------------------------------------------- sweep: JSON


def test_json_sweep_round_trips_bit_exactly(capsys):
    code, out, _ = run(capsys, "sweep", "--steps", "12", "--format", "json")
    assert code == 0
    data = json.loads(out)
    again = json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"
    assert again == out
    assert data["config"]["sweep"] == "phi"
    assert data["config"]["units"]["delta_l"] == "nm"
    assert len(data["rows"]) == 12
    assert data["summary"]["skipped_rows"] == 0
    assert data["summary"]["product_nondecreasing"] is True
    assert abs(data["summary"]["zero_bias_product_hbar"] - 0.5) < 1e-9


def test_json_and_csv_agree_on_row_values(capsys):
    args = ["sweep", "--steps", "4", "--columns", "T,product"]
    code, csv_text, _ = run(capsys, *args)
    assert code == 0
    code, json_text, _ = run(capsys, *args, "--format", "json")
    assert code == 0
    _, _, rows, _ = parse_csv(csv_text)
    data = json.loads(json_text)
    for csv_row, json_row in zip(rows, data["rows"], strict=True):
        assert csv_row[0] == pytest.approx(json_row["phi"], rel=1e-11)
        assert csv_row[1] == pytest.approx(json_row["T"], rel=1e-11)
        assert csv_row[2] == pytest.approx(json_row["product"], rel=1e-11)


# ------------------------------------------------------------ exit codes


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["sweep", "--steps", "1"], "steps"),
        (["sweep", "--min", "2", "--max", "1"], "min"),
        (["sweep", "--barrier", "sym"], "phi sweep"),
        (["sweep", "--columns", "T,bogus"], "bogus"),
        (["sweep", "--columns", "s_fq"], "s_fq"),
        (["sweep", "--sweep", "E", "--min", "1", "--max", "7"], "E sweep max"),
        (["sweep", "--sweep", "gap", "--min", "-0.5", "--max", "1"], "gap"),
        (["sweep", "--N", "0.5"], "N"),
    ],
)
def test_usage_errors_exit_two_and_name_the_field(capsys, argv, fragment):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert fragment in err


def test_domain_errors_exit_three(capsys):
    code, _, err = run(capsys, "solve", "--E", "7")
    assert code == 3 and "E < V0" in err


def test_consistency_failure_exits_four(capsys):
    # Strong bias on a shallow tilted barrier: the momentum-variance
    # bookkeeping genuinely turns negative, which the library reports as
    # an internal-consistency failure rather than a skippable row.
    code, _, err = run(
        capsys,
        "sweep",
        "--barrier",
        "field",
        "--V0",
        "2",
        "--gap",
        "0.3",
        "--min",
        "2.2",
        "--max",
        "2.6",
        "--steps",
        "3",
    )
    assert code == 4
    assert "internal consistency" in err


def test_missing_subcommand_is_an_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


# ------------------------------------------------------------ config file


def test_config_file_seeds_defaults_and_flags_override(capsys, tmp_path):
    conf = tmp_path / "sweep.conf"
    conf.write_text(
        "# comment line\n"
        "barrier = field\n"
        "steps = 4\n"
        "max = 2.0\n"
        "columns = T,product\n"
    )
    code, out, _ = run(capsys, "sweep", "--config", str(conf))
    assert code == 0
    header, _, rows, _ = parse_csv(out)
    assert header == ["phi", "T", "product"]
    assert len(rows) == 4 and rows[-1][0] == 2.0

    code, out, _ = run(capsys, "sweep", "--config", str(conf), "--steps", "3")
    assert code == 0
    _, _, rows, _ = parse_csv(out)
    assert len(rows) == 3


@pytest.mark.parametrize(
    "content, fragment",
    [
        ("stepz = 4\n", "stepz"),
        ("steps = four\n", "not a valid int"),
        ("steps 4\n", "key=value"),
    ],
)
def test_malformed_config_is_a_usage_error(capsys, tmp_path, content, fragment):
    conf = tmp_path / "bad.conf"
    conf.write_text(content)
    code, _, err = run(capsys, "sweep", "--config", str(conf))
    assert code == 2 and fragment in err


def test_missing_config_file_is_a_usage_error(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--config", str(tmp_path / "absent.conf"))
    assert code == 2 and "cannot read config file" in err


# ----------------------------------------------------------- feasibility


def test_feasibility_nominal_is_at_threshold(capsys):
    code, out, _ = run(capsys, "feasibility", "--gap", "2.0")
    assert code == 0
    assert "AT THRESHOLD" in out
    lhs_line = [l for l in out.splitlines() if l.startswith("feasibility_lhs")][0]
    assert abs(float(lhs_line.split()[-1]) - 1.0) < 1e-12
    shot_line = [l for l in out.splitlines() if "shot-noise" in l][0]
    assert shot_line.split()[-2].startswith("5.6607")


def test_feasibility_high_quality_passes(capsys):
    code, out, _ = run(capsys, "feasibility", "--gap", "2.0", "--Q", "1e8")
    assert code == 0 and "PASS" in out
    lhs_line = [l for l in out.splitlines() if l.startswith("feasibility_lhs")][0]
    assert abs(float(lhs_line.split()[-1]) - 0.1) < 1e-12


def test_feasibility_low_current_fails(capsys):
    code, out, _ = run(capsys, "feasibility", "--gap", "2.0", "--I0", "1e-7")
    assert code == 0 and "FAIL" in out
    lhs_line = [l for l in out.splitlines() if l.startswith("feasibility_lhs")][0]
    assert abs(float(lhs_line.split()[-1]) - 10.0) < 1e-11


def test_feasibility_json_payload(capsys):
    code, out, _ = run(capsys, "feasibility", "--gap", "2.0", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "AT"
    assert abs(data["feasibility_lhs"] - 1.0) < 1e-12
    assert data["s_fq_n2_per_hz"] > data["s_fl_n2_per_hz"]
    again = json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"
    assert again == out


# ------------------------------------------------------------- solve


def test_solve_dump_is_valid_json_with_expected_keys(capsys):
    code, out, _ = run(capsys, "solve", "--barrier", "field", "--phi", "2")
    assert code == 0
    data = json.loads(out)
    assert data["barrier"]["family"] == "linear-field"
    probs = data["probabilities"]
    assert abs(probs["T"] + probs["R"] - 1.0) < 1e-10
    assert data["jump_residuals"]["worst"] < 1e-9
    assert data["uncertainty"]["product_over_hbar"] > 0.5
    assert "s_fq_n2_per_hz" not in data


def test_solve_symmetric_reports_half_product_and_noise(capsys):
    code, out, _ = run(capsys, "solve")
    assert code == 0
    data = json.loads(out)
    assert abs(data["uncertainty"]["product_over_hbar"] - 0.5) < 1e-10
    assert data["s_fq_n2_per_hz"] > 0
    assert data["dT_dl_per_m"] < 0


def test_solve_writes_to_file(capsys, tmp_path):
    out_path = tmp_path / "point.json"
    code, out, _ = run(capsys, "solve", "--out", str(out_path))
    assert code == 0 and out == ""
    data = json.loads(out_path.read_text())
    assert data["energy_ev"] == 1.0


# ------------------------------------------------------------ selftest


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    lines = [line for line in out.splitlines() if line]
    assert len(lines) >= 8
    assert all(line.startswith("PASS") for line in lines)
