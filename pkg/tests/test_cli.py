import csv
import json
import subprocess
import sys

import pytest

from eiszeros import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_weights():
    assert cli.parse_weights("12") == [12]
    assert cli.parse_weights("4,6, 8") == [4, 6, 8]
    assert cli.parse_weights("4..12") == [4, 6, 8, 10, 12]
    assert cli.parse_weights("4..40/12") == [4, 16, 28, 40]
    assert cli.parse_weights("1000") == [1000]


@pytest.mark.parametrize("text", ["5", "2", "4..x", "12..4", "4..8/0", ""])
def test_parse_weights_rejects(text):
    with pytest.raises(cli.ConfigError):
        cli.parse_weights(text)


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample\ngroup = Gamma0_3\nweights = 4..8\nprecision = 96\n")
    args = cli.make_parser().parse_args(["verify", "--config", str(cfg), "--weights", "10"])
    c = cli.build_config(args)
    assert c.groups == ["Gamma0_3"] and c.weights == [10] and c.precision == 96


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("group = SL2Z\ncolour = red\n")
    code, _, err = run(capsys, "verify", "--config", str(cfg))
    assert code == cli.EXIT_CONFIG and "colour" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--group", "Gamma0_13"],
    ["verify", "--group", "SL2Z", "--weights", "5"],
    ["verify", "--group", "SL2Z", "--precision", "32"],
    ["zeros", "--group", "SL2Z", "--format", "png"],
    ["identity-check", "--pair", "Gamma0_2,Gamma0_9", "--weights", "4"],
    ["conjugate-check", "--pair", "Gamma0_3,Gamma0_9", "--weights", "4"],
    ["frobnicate"],
])
def test_configuration_errors(capsys, argv):
    assert run(capsys, *argv)[0] == cli.EXIT_CONFIG


def test_zeros_writes_all_formats(tmp_path, capsys):
    code, out, _ = run(capsys, "zeros", "--group", "SL2Z,Gamma0*_4", "--weights", "4,12",
                       "--format", "csv,svg,json", "--out", str(tmp_path))
    assert code == cli.EXIT_OK
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["Gamma0star_4_w12.csv", "Gamma0star_4_w4.csv", "Gamma0star_4_zeros.json",
                     "Gamma0star_4_zeros.svg", "SL2Z_w12.csv", "SL2Z_w4.csv", "SL2Z_zeros.json",
                     "SL2Z_zeros.svg"]
    rows = list(csv.reader((tmp_path / "SL2Z_w12.csv").open()))
    assert len(rows) == 2 and rows[1][7] == "true"
    doc = json.loads((tmp_path / "SL2Z_zeros.json").read_text())
    assert doc["schema"] == cli.JSON_SCHEMA and [r["weight"] for r in doc["results"]] == [4, 12]
    svg = (tmp_path / "SL2Z_zeros.svg").read_text()
    assert svg.startswith("<?xml") and "xlink:href=\"http" not in svg


def test_svg_is_reproducible(tmp_path, capsys):
    for d in ("a", "b"):
        run(capsys, "zeros", "--group", "Gamma0_3", "--weights", "8", "--format", "svg",
            "--out", str(tmp_path / d))
    assert (tmp_path / "a" / "Gamma0_3_zeros.svg").read_bytes() == \
        (tmp_path / "b" / "Gamma0_3_zeros.svg").read_bytes()


def test_verify_acceptable_group(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--group", "Gamma0_3", "--weights", "4..12", "--out", str(tmp_path))
    assert code == cli.EXIT_OK
    lines = out.strip().splitlines()
    assert lines[1].split("\t")[0] == "weight" and len(lines) == 2 + 5
    assert "FAIL" not in out
    assert (tmp_path / "verdicts.json").exists()


def test_verify_advisory_group(capsys):
    code, _, err = run(capsys, "verify", "--group", "Gamma0_6+2", "--weights", "4,6")
    assert code == cli.EXIT_OK and "advisory" in err


def test_conjugate_and_identity_checks(capsys):
    code, out, _ = run(capsys, "conjugate-check", "--group", "Gamma0_2", "--weights", "4,6")
    assert code == cli.EXIT_OK and "FAIL" not in out
    code, out, _ = run(capsys, "identity-check", "--pair", "Gamma0_9,Gamma0_3", "--weights", "6")
    assert code == cli.EXIT_OK and "off_arc=0" in out


def test_qexp_and_divpoly(capsys):
    code, out, _ = run(capsys, "qexp", "--kind", "hauptmodul", "--group", "SL2Z", "--trunc", "16")
    assert code == cli.EXIT_OK and "1\t196884" in out
    code, out, _ = run(capsys, "divpoly", "--group", "SL2Z", "--weights", "12")
    assert code == cli.EXIT_OK and "degree=1" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "eiszeros", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()


def test_parallel_jobs_match_serial(capsys):
    cfg = cli.RunConfig(["SL2Z"], [4, 6, 12], jobs=2)
    par = cli.run_jobs(cfg)
    cfg.jobs = 1
    assert [r["rows"] for r in par] == [r["rows"] for r in cli.run_jobs(cfg)]
