import json
import math

import pytest

from wtbouss.cli import (
    DIAG_COLUMNS, EXIT_CONFIG, EXIT_GUARD, CommandSpec, ConfigError, dispatch, main, parse_config,
)

MINIMAL = "system = case1\neps = 0.1\nnx = 32\nny = 32\n"


@pytest.fixture
def cfg_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(MINIMAL + "# comment line\nt_end = 0.5   # trailing comment\n", encoding="utf-8")
    return p


def test_minimal_defaults(cfg_file):
    cfg = parse_config(cfg_file)
    assert cfg.run.params.case_tag == "Case1" and cfg.run.grid.nx == 32
    assert cfg.run.dt is None and cfg.run.sobolev_s == 4.0 and cfg.run.T0 == 1.0
    assert cfg["eps_list"] == (0.1, 0.05, 0.025)


def test_override_wins(cfg_file):
    assert parse_config(cfg_file, ["eps=0.05"]).run.params.eps == 0.05


def test_bad_value_names_line(cfg_file):
    cfg_file.write_text(MINIMAL.replace("0.1", "banana"), encoding="utf-8")
    with pytest.raises(ConfigError) as err:
        parse_config(cfg_file)
    assert err.value.key == "eps" and err.value.line.endswith(":2")


def test_unknown_and_missing_keys(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text(MINIMAL + "colour = red\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="colour"):
        parse_config(p)
    p.write_text("system = case1\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="missing"):
        parse_config(p)


def _read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# wtbouss ")
    return lines[1].split(","), [[float(x) for x in l.split(",")] for l in lines[2:]]


def test_simulate_zero_data(cfg_file, tmp_path):
    out = tmp_path / "o"
    code = dispatch(CommandSpec("simulate", cfg_file, ("family=zero",), out))
    assert code == 0
    header, rows = _read_csv(out / "diagnostics.csv")
    assert tuple(header) == DIAG_COLUMNS
    assert all(r[1] == r[2] == r[3] == r[4] == 0.0 for r in rows)
    assert all(math.isnan(r[6]) and math.isnan(r[7]) for r in rows)
    assert "diagnostics.csv" in (out / "plots.gp").read_text()


def test_rerun_byte_identical(cfg_file, tmp_path):
    for name in ("a", "b"):
        assert main(["simulate", "--config", str(cfg_file), "--out", str(tmp_path / name),
                     "--seed", "4", "--set", "family=random"]) == 0
    assert (tmp_path / "a" / "diagnostics.csv").read_bytes() == \
        (tmp_path / "b" / "diagnostics.csv").read_bytes()


def test_config_error_exit_and_log(cfg_file, tmp_path):
    out = tmp_path / "o"
    assert main(["simulate", "--config", str(cfg_file), "--out", str(out),
                 "--set", "eps=banana"]) == EXIT_CONFIG
    rec = json.loads((out / "errors.log").read_text().splitlines()[-1])
    assert rec["kind"] == "config" and "eps" in rec["message"]


def test_guard_exit_code(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("system = case2\neps = 0.5\nnx = 32\nny = 32\namplitude = 40\nt_end = 0.1\n",
                 encoding="utf-8")
    assert dispatch(CommandSpec("simulate", p, (), tmp_path / "o")) == EXIT_GUARD


def test_dispersion_command(cfg_file, tmp_path):
    out = tmp_path / "o"
    code = dispatch(CommandSpec("dispersion", cfg_file,
                                ("eps=0.12", "modes=2:1", "disp_T=1"), out))
    assert code == 0
    _, rows = _read_csv(out / "dispersion.csv")
    assert rows[0][3] == pytest.approx(2.04730, abs=5e-6)


def test_sweep_and_report(cfg_file, tmp_path):
    out = tmp_path / "o"
    code = dispatch(CommandSpec("sweep", cfg_file, ("eps_list=0.5,0.25", "T0=0.1"), out))
    assert code == 0
    header, rows = _read_csv_summary(out / "summary.csv")
    assert header[:2] == ["eps", "t_end"] and len(rows) == 2
    assert (out / "eps_0.5" / "diagnostics.csv").exists()
    assert dispatch(CommandSpec("report", cfg_file, (), out)) == 0


def _read_csv_summary(path):
    lines = path.read_text().splitlines()
    return lines[1].split(","), lines[2:]


def test_consistency_requires_wtb1(cfg_file, tmp_path):
    assert dispatch(CommandSpec("consistency", cfg_file, (), tmp_path / "o")) == EXIT_CONFIG
