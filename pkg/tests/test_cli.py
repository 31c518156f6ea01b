import json
import subprocess
import sys

from fmcwisac.cli import main


def test_chirp_demo_prints_metrics(capsys):
    assert main(["chirp-demo", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    for key in ("peak_bin=", "peak_power=", "noise_floor=", "isnr_db=", "est_delay_samples="):
        assert key in out
    assert "est_delay_samples=25" in out


def test_chirp_demo_deterministic(capsys):
    main(["chirp-demo", "--seed", "7"])
    first = capsys.readouterr().out
    main(["chirp-demo", "--seed", "7"])
    assert capsys.readouterr().out == first


def test_missing_config_flag_is_config_error(capsys):
    code = main(["isnr-surface"])
    assert code == 1
    assert "--config" in capsys.readouterr().err


def test_unknown_flag_rejected():
    assert main(["chirp-demo", "--frobnicate"]) == 1


def test_unknown_subcommand_rejected():
    assert main(["not-a-command"]) == 1


def test_help_exits_zero():
    assert main(["--help"]) == 0


def test_config_error_names_key(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"experiment": "spectrum", "grids": {"wrong": 1}}))
    assert main(["spectrum", "--config", str(path)]) == 1
    assert "wrong" in capsys.readouterr().err


def test_nonexistent_config_is_config_error(capsys):
    assert main(["ber", "--config", "/nonexistent/x.json"]) == 1
    assert "/nonexistent/x.json" in capsys.readouterr().err


def test_runtime_error_exit_code(tmp_path, capsys):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({"experiment": "spectrum", "grids": {"delay": 4096}}))
    assert main(["spectrum", "--config", str(path), "--out", str(tmp_path)]) == 2
    assert "runtime error" in capsys.readouterr().err


def test_spectrum_run_writes_csv(tmp_path, capsys):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({"experiment": "spectrum", "seed": 7}))
    code = main(["spectrum", "--config", str(path), "--out", str(tmp_path), "--quiet"])
    assert code == 0
    assert (tmp_path / "spectrum.csv").exists()
    assert capsys.readouterr().out == ""


def test_flag_overrides_config_seed(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({"experiment": "spectrum", "seed": 7}))
    main(["spectrum", "--config", str(path), "--out", str(tmp_path), "--seed", "9", "--quiet"])
    header = (tmp_path / "spectrum.csv").read_text().splitlines()[0]
    assert header.startswith("# seed=9 ")


def test_console_invocation_via_module(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({"experiment": "spectrum"}))
    proc = subprocess.run(
        [sys.executable, "-m", "fmcwisac.cli", "spectrum", "--config", str(path),
         "--out", str(tmp_path)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "wrote" in proc.stdout
