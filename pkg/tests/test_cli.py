"""End-to-end tests of the command-line interface via ``main(argv)``."""

import math

import pytest

from nmzi.cli import main

QUARTER = math.pi / 4.0


def _run_mc(out_path, seed="11", streams="3"):
    return main(
        [
            "montecarlo",
            "--sweep",
            "rho=0:6.4:1.6",
            "--fix",
            f"zeta={QUARTER!r}",
            "--mu",
            "0.2",
            "--bins",
            "40000",
            "--seed",
            seed,
            "--streams",
            streams,
            "--out",
            str(out_path),
        ]
    )


def test_analytic_preset_writes_full_grid(tmp_path, capsys):
    out = tmp_path / "fig2.csv"
    assert main(["analytic", "--preset", "fig2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 201
    assert lines[0].startswith("phi,psi,xi,theta,i_A")
    assert f"wrote 201 grid points to {out}" in capsys.readouterr().out


def test_montecarlo_runs_are_byte_identical_for_a_seed(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert _run_mc(first) == 0
    assert _run_mc(second) == 0
    assert first.read_bytes() == second.read_bytes()
    third = tmp_path / "c.csv"
    assert _run_mc(third, seed="12") == 0
    assert third.read_bytes() != first.read_bytes()


def test_degrees_flag_reproduces_radian_run(tmp_path):
    deg = tmp_path / "deg.csv"
    rad = tmp_path / "rad.csv"
    argv_deg = [
        "analytic",
        "--sweep",
        "phi=0:180:45",
        "--fix",
        "psi=0",
        "--fix",
        "xi=45",
        "--fix",
        "theta=45",
        "--degrees",
        "--out",
        str(deg),
    ]
    argv_rad = [
        "analytic",
        "--sweep",
        f"phi=0:{math.radians(180)!r}:{math.radians(45)!r}",
        "--fix",
        "psi=0",
        "--fix",
        f"xi={math.radians(45)!r}",
        "--fix",
        f"theta={math.radians(45)!r}",
        "--out",
        str(rad),
    ]
    assert main(argv_deg) == 0
    assert main(argv_rad) == 0
    assert deg.read_bytes() == rad.read_bytes()


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["analytic", "--preset", "fig9"], "config key 'preset'"),
        (
            ["analytic", "--preset", "fig2", "--sweep", "phi=0:1:0.5"],
            "conflicts with explicit sweep axes",
        ),
        (["analytic", "--sweep", "phi=0:1:0"], "step must be positive"),
        (["analytic", "--sweep", "phi=1:0:0.1"], "start must be below stop"),
        (["analytic", "--sweep", "phi"], "expects PARAM=VALUE"),
        (["analytic", "--sweep", "bogus=0:1:0.5"], "unknown"),
        (["analytic"], "no sweep specified"),
        (["analytic", "--config", "/nonexistent/f.cfg"], "cannot read config file"),
        (
            ["montecarlo", "--preset", "fig2", "--mu", "-1"],
            "mean_photon_number must be positive",
        ),
        (["frobnicate"], "usage error"),
    ],
)
def test_usage_errors_exit_one(argv, fragment, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 1
    assert fragment in capsys.readouterr().err


def test_verify_passes_and_prints_one_line_per_check(capsys):
    assert main(["verify", "--skip-montecarlo"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert len(lines) == 9
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1] == "all 8 checks passed"


def test_verify_detects_corrupted_conventions(capsys):
    code = main(["verify", "--skip-montecarlo", "--corrupt-conventions"])
    assert code == 2
    out = capsys.readouterr().out
    assert "FAIL  composed station matches closed form" in out
    assert "1 of 8 checks FAILED" in out


def test_out_dir_env_names_the_default_path(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("NMZI_OUT_DIR", str(tmp_path))
    assert main(["analytic", "--preset", "fig3"]) == 0
    assert (tmp_path / "analytic_fig3.csv").exists()
    capsys.readouterr()


def test_config_file_drives_a_run_and_flags_win(tmp_path, capsys):
    config_out = tmp_path / "from_config.csv"
    flag_out = tmp_path / "from_flag.csv"
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# synchronized scan\n"
        "preset = fig2\n"
        f"out = {config_out}\n"
    )
    assert main(["analytic", "--config", str(cfg)]) == 0
    assert config_out.exists()
    assert (
        main(["analytic", "--config", str(cfg), "--out", str(flag_out)]) == 0
    )
    assert flag_out.exists()
    assert flag_out.read_bytes() == config_out.read_bytes()
    capsys.readouterr()


def test_gnuplot_script_lands_next_to_csv(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    assert main(["analytic", "--preset", "fig2", "--gnuplot", "--out", str(out)]) == 0
    script = tmp_path / "scan.gp"
    assert script.exists()
    assert str(out) in script.read_text()
    assert str(script) in capsys.readouterr().out
