import json

import pytest

from cubli import cli
from cubli.errors import ValidationError


def run_cli(*argv):
    return cli.main(list(argv))


def write_config(tmp_path, text):
    path = tmp_path / "config.txt"
    path.write_text(text)
    return str(path)


def test_params_defaults(capsys):
    assert run_cli("params") == 0
    out = capsys.readouterr().out
    assert "1.331250e-02" in out          # I_cO_bar
    assert "0.0848" in out                # omega_1
    assert "8.150838" in out              # omega_0 consistent
    assert "6.854011" in out              # omega_0 paper-literal
    assert "106.5" in out                 # gamma


def test_params_json(capsys):
    assert run_cli("params", "--json") == 0
    data = json.loads(capsys.readouterr().out)
    assert data["gamma"] == "106.5"
    assert data["d"].startswith("0.106066")


def test_params_validation_error_names_key(capsys):
    assert run_cli("params", "--set", "physics.l=-1") == cli.EXIT_VALIDATION
    assert "physics.l" in capsys.readouterr().err


def test_unknown_key_rejected(capsys):
    assert run_cli("params", "--set", "physics.mass=1") == cli.EXIT_VALIDATION
    assert "unknown config key" in capsys.readouterr().err


def test_config_file_roundtrip(tmp_path, capsys):
    path = write_config(tmp_path, "# test rig\nphysics.l = 0.30\n")
    assert run_cli("params", path) == 0
    out = capsys.readouterr().out
    assert "0.212132" in out  # d doubles with l


def test_config_file_syntax_error(tmp_path, capsys):
    path = write_config(tmp_path, "physics.l 0.30\n")
    assert run_cli("params", path) == cli.EXIT_VALIDATION
    assert "expected key = value" in capsys.readouterr().err


def test_gains_default(capsys):
    assert run_cli("gains") == 0
    out = capsys.readouterr().out
    assert "k_pw" in out and "designed poles" in out
    mismatch = float(out.split("eigenvalue mismatch")[1].split()[0])
    assert mismatch < 1e-6


def test_gains_alpha_zero(capsys):
    assert run_cli("gains", "--set", "control.alpha=0") == 0
    out = capsys.readouterr().out
    assert float(out.split("k_pw")[1].split()[0]) == 0.0
    assert float(out.split("k_dw")[1].split()[0]) == 0.0


def test_simulate_writes_csv_and_summary(tmp_path, capsys):
    out_csv = tmp_path / "run.csv"
    code = run_cli(
        "simulate",
        "--set", "scenario.t_end=2.0",
        "--set", "scenario.disturbances=none",
        "--out", str(out_csv),
    )
    assert code == 0
    summary = capsys.readouterr().out
    assert "attitude settling" in summary
    lines = out_csv.read_text().splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 2002  # header + 2001 records
    first = lines[1].split(",")
    assert len(first) == 12
    assert float(first[0]) == 0.0


def test_simulate_csv_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        assert run_cli(
            "simulate", "--set", "scenario.t_end=1.0", "--out", str(path)
        ) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_simulate_divergence_exit_code(tmp_path, capsys):
    code = run_cli(
        "simulate",
        "--set", "scenario.dt=0.9",
        "--set", "scenario.t_end=900",
        "--out", str(tmp_path / "x.csv"),
    )
    assert code == cli.EXIT_SIMULATION
    assert "t =" in capsys.readouterr().err


def test_simulate_zero_t_end_rejected(capsys):
    assert run_cli("simulate", "--set", "scenario.t_end=0") == cli.EXIT_VALIDATION
    assert "scenario.t_end" in capsys.readouterr().err


def test_simulate_attitude_only_bias_flags_wheel(tmp_path, capsys):
    code = run_cli(
        "simulate",
        "--mode", "attitude-only",
        "--sensor-bias-deg", "5",
        "--set", "scenario.t_end=6.0",
        "--set", "scenario.initial_angle_deg=45",
        "--set", "scenario.disturbances=none",
        "--out", str(tmp_path / "bias.csv"),
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "NOT converged" in out
    assert "final attitude (sensor)" in out


def test_verify_passes_and_negative_control_fails(capsys):
    assert run_cli("verify") == 0
    out = capsys.readouterr().out
    assert "controllability_rank: rank = 4/5 PASS" in out
    assert "energy_drift" in out and "FAIL" not in out

    assert run_cli("verify", "--negative-control") == cli.EXIT_VERIFICATION
    out = capsys.readouterr().out
    assert "oracle_equivalence" in out and "FAIL" in out


def test_fit_friction_synthetic(capsys):
    assert run_cli("fit-friction", "--synthetic") == 0
    out = capsys.readouterr().out
    tau_c = float(out.split("tau_c")[1].split()[0])
    b_w = float(out.split("b_w")[1].split()[0])
    c_d = float(out.split("c_d")[1].split()[0])
    assert tau_c == pytest.approx(2.46e-3, rel=1e-3)
    assert b_w == pytest.approx(1.06e-5, rel=1e-2)
    assert c_d == pytest.approx(1.70e-8, rel=1e-2)
    at_300 = float(out.split("model at 300 rad/s")[1].split()[0])
    assert at_300 == pytest.approx(7.17e-3, rel=1e-3)


def test_fit_friction_from_csv(tmp_path, capsys):
    rows = ["tau,omega_ss"]
    for w in (50.0, 150.0, 300.0, 450.0, 600.0):
        tau = 2.46e-3 + 1.06e-5 * w + 1.70e-8 * w * w
        rows.append(f"{tau!r},{w!r}")
    path = tmp_path / "sweep.csv"
    path.write_text("\n".join(rows) + "\n")
    assert run_cli("fit-friction", "--input", str(path)) == 0
    out = capsys.readouterr().out
    assert float(out.split("tau_c")[1].split()[0]) == pytest.approx(2.46e-3, rel=1e-6)


def test_fit_friction_malformed_csv_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("tau,omega_ss\n1e-3,100\nnot-a-number\n")
    assert run_cli("fit-friction", "--input", str(path)) == cli.EXIT_VALIDATION
    assert ":3:" in capsys.readouterr().err


def test_fit_friction_rank_deficiency_exit(tmp_path, capsys):
    path = tmp_path / "two.csv"
    path.write_text("3e-3,100\n5e-3,300\n")
    assert run_cli("fit-friction", "--input", str(path)) == cli.EXIT_VALIDATION
    assert "distinct" in capsys.readouterr().err


def test_fit_friction_requires_source(capsys):
    assert run_cli("fit-friction") == cli.EXIT_VALIDATION


def test_build_config_defaults_match_reference_experiment():
    cfg = cli.build_config({})
    assert cfg.zeta == pytest.approx(0.7071067811865476)
    assert cfg.omega_n_factor == 1.5
    assert cfg.alpha == 0.1
    assert cfg.reference_angle_deg == 45.0
    assert cfg.initial_angle_deg == 40.0
    assert len(cfg.disturbances) == 2
    assert cfg.disturbances[0].start == 9.0
    assert cfg.disturbances[1].start == 16.0


def test_disturbance_parse_errors():
    with pytest.raises(ValidationError):
        cli.build_config({"scenario.disturbances": "1.0:0.1"})
    with pytest.raises(ValidationError):
        cli.build_config({"scenario.disturbances": "1.0:-0.1:0.05"})
