import math
from dataclasses import replace

import pytest

from lhmedium import ConfigError, PoleError, SweepConfig, emit_csv, emit_plotdata, parse_config, run_sweep
from lhmedium.cli import main
from lhmedium.config import load_config
from lhmedium.sweep import CSV_HEADER, SweepGrid, SweepRecord, verify, verify_exit_code


def small_cfg(**kw):
    base = dict(delta_p_from=-3.0, delta_p_to=3.0, delta_p_steps=31)
    base.update(kw)
    return SweepConfig(**base)


# -- config -----------------------------------------------------------------

def test_empty_config_gives_defaults():
    cfg = parse_config("")
    assert cfg == SweepConfig()
    assert cfg.gamma_scale == 1e7 and cfg.density == 5e24
    assert cfg.omega_pe == 0.05 and cfg.omega_c == 8.0
    assert cfg.delta_c == cfg.delta_m == 0.005
    assert cfg.theta == pytest.approx(math.pi / 6, rel=1e-15)
    assert cfg.omega_s_list == (14.0, 18.0, 20.0)
    rates = cfg.rates()
    assert rates.gamma21 == pytest.approx(0.8e7 / 137**2)


def test_config_values_and_comments():
    cfg = parse_config("""
# a comment
omega_s_list = 10, 12   # two overlays
theta = pi/3
delta_p_steps = 11
formula = corrected
gamma6_includes_dephasing = yes
""")
    assert cfg.omega_s_list == (10.0, 12.0)
    assert cfg.theta == pytest.approx(math.pi / 3)
    assert cfg.delta_p_steps == 11
    assert cfg.formula == "corrected"
    assert cfg.gamma6_includes_dephasing is True


def test_steps_one_rejected():
    with pytest.raises(ConfigError, match="delta_p_steps"):
        parse_config("delta_p_steps = 1")


def test_unknown_key_names_nearest():
    with pytest.raises(ConfigError, match=r"<config>:2: unknown key 'omega_sig'.*omega_s_list"):
        parse_config("omega_c = 8\nomega_sig = 14\n")


def test_bad_value_has_line_context():
    with pytest.raises(ConfigError, match=r"<config>:3: bad value for 'omega_c'"):
        parse_config("\n# x\nomega_c = eight\n")


def test_parse_error_and_sections_rejected():
    with pytest.raises(ConfigError, match="parse error"):
        parse_config("omega_c = 1\nomega_c = 2\n")
    with pytest.raises(ConfigError, match="sections"):
        parse_config("[extra]\nomega_c = 1\n")


def test_invalid_values_listed():
    with pytest.raises(ConfigError) as info:
        parse_config("delta_p_from = 5\ndelta_p_to = 1\nomega_pe = 0")
    assert "delta_p_from" in str(info.value) and "omega_pe" in str(info.value)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.cfg")


# -- sweep ------------------------------------------------------------------

def test_record_count_and_order():
    grid = run_sweep(SweepConfig())
    assert len(grid) == 18003
    keys = [(r.omega_s_over_gamma, r.delta_p_over_gamma) for r in grid.records]
    assert keys == sorted(keys, key=lambda k: ((14.0, 18.0, 20.0).index(k[0]), k[1]))
    assert not grid.errors


def test_parallel_matches_serial(tmp_path):
    cfg = small_cfg()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(run_sweep(cfg, workers=1), a)
    emit_csv(run_sweep(cfg, workers=3), b)
    assert a.read_bytes() == b.read_bytes()


def test_pole_isolated_to_its_row(monkeypatch):
    import lhmedium.sweep as sweep_mod
    real = sweep_mod.coherences

    def flaky(dampings, drive, rates, formula):
        if abs(drive.delta_p) < 1.0:  # the delta_p = 0 grid point only
            raise PoleError("forced", {"delta_p": 0.0})
        return real(dampings, drive, rates, formula)

    monkeypatch.setattr(sweep_mod, "coherences", flaky)
    grid = run_sweep(small_cfg(delta_p_steps=7))
    bad = grid.errors
    assert len(bad) == 3  # one per overlay
    assert all(r.delta_p_over_gamma == 0.0 and r.label == "POLE" for r in bad)
    assert sum(r.ok for r in grid.records) == len(grid) - 3


def test_oracle_engine_runs():
    grid = run_sweep(small_cfg(engine="oracle", delta_p_steps=5))
    assert len(grid) == 15 and not grid.errors


# -- emitters ---------------------------------------------------------------

def _one_point_grid(fom=12.5):
    rec = SweepRecord(14.0, 0.1, -2.0, 0.01, -1.9, 0.02, -1.95, 0.015, fom,
                      "LEFT_HANDED_LOSSY")
    return SweepGrid(SweepConfig(), [rec])


def test_csv_one_point(tmp_path):
    path = tmp_path / "one.csv"
    emit_csv(_one_point_grid(), path)
    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert len(lines) == 2
    assert lines[0] == "omega_s_over_gamma,delta_p_over_gamma,re_eps,im_eps,re_mu,im_mu,re_n,im_n,fom,label"
    assert lines[0].split(",") == list(CSV_HEADER)
    assert lines[1] == "14.0,0.1,-2.0,0.01,-1.9,0.02,-1.95,0.015,12.5,LEFT_HANDED_LOSSY"


def test_csv_inf_literal(tmp_path):
    path = tmp_path / "inf.csv"
    emit_csv(_one_point_grid(fom=math.inf), path)
    assert path.read_text().splitlines()[1].split(",")[8] == "inf"


def test_csv_shortest_roundtrip(tmp_path):
    path = tmp_path / "rt.csv"
    grid = run_sweep(small_cfg(delta_p_steps=4))
    emit_csv(grid, path)
    rows = path.read_text().splitlines()[1:]
    for rec, row in zip(grid.records, rows):
        fields = row.split(",")
        assert float(fields[2]) == rec.re_eps and fields[2] == repr(rec.re_eps)


def test_csv_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(run_sweep(small_cfg()), a)
    emit_csv(run_sweep(small_cfg()), b)
    assert a.read_bytes() == b.read_bytes()


def test_empty_grid_rejected(tmp_path):
    with pytest.raises(ValueError):
        emit_csv(SweepGrid(SweepConfig(), []), tmp_path / "x.csv")


def test_plotdata_one_point(tmp_path):
    path = tmp_path / "one.dat"
    script = emit_plotdata(_one_point_grid(), path)
    text = path.read_text()
    blocks = text.strip("\n").split("\n\n\n")
    assert len(blocks) == 7  # one observable each, single overlay
    first = blocks[0].splitlines()
    assert first[0] == "# observable=re_eps omega_s_over_gamma=14.0"
    assert first[2].split() == ["0.1", "-2.0"]
    assert "index 6" in script.read_text()


def test_plotdata_deterministic(tmp_path):
    grid = run_sweep(small_cfg())
    emit_plotdata(grid, tmp_path / "a.dat")
    emit_plotdata(grid, tmp_path / "b.dat")
    assert (tmp_path / "a.dat").read_bytes() == (tmp_path / "b.dat").read_bytes()
    blocks = (tmp_path / "a.dat").read_text().strip("\n").split("\n\n\n")
    assert len(blocks) == 7 * 3


# -- verify -----------------------------------------------------------------

def test_verify_two_level_subconfig_passes():
    cfg = SweepConfig(omega_c=0.0, omega_s_list=(0.0,), delta_p_from=-5, delta_p_to=5)
    report = verify(cfg, points=21)
    assert report.passed
    assert verify_exit_code(report) == 0


def test_verify_default_documents_mismatch():
    report = verify(SweepConfig())
    assert len(report.rows) == 61 * 3
    assert report.structural
    assert verify_exit_code(report) == 2
    assert verify_exit_code(report, report_only=True) == 0
    text = report.format()
    assert "worst rel error rho43" in text and "regions above band" in text
    assert report.mismatch_regions()
    # with delta_m tied to delta_p the corrected closed forms agree with the oracle
    assert max(r.worst for r in report.tied_rows["corrected"]) < 1e-8


def test_verify_corrected_tied_config_passes():
    cfg = SweepConfig(formula="corrected", delta_m=0.0, delta_p_from=-0.5, delta_p_to=0.5)
    # delta_m = 0 equals delta_p only at the centre; sweep just that point
    report = verify(replace(cfg, delta_p_from=-1e-9, delta_p_to=1e-9), points=2)
    assert report.worst < 1e-6


# -- CLI --------------------------------------------------------------------

def test_cli_sweep_writes_csv_and_plot(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("delta_p_steps = 11\nomega_s_list = 14\n")
    out = tmp_path / "out.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out), "--plot"]) == 0
    assert len(out.read_text().splitlines()) == 12
    assert (tmp_path / "out.dat").exists() and (tmp_path / "out.dat.gp").exists()


def test_cli_config_error_exit_1(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("omega_sig = 14\n")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 1
    assert "omega_s_list" in capsys.readouterr().err


def test_cli_usage_error_exit_1():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_cli_io_error_exit_3(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("delta_p_steps = 3\n")
    out = tmp_path / "missing" / "x.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 3


def test_cli_verify_exit_codes(capsys):
    assert main(["verify"]) == 2
    assert main(["verify", "--report-only"]) == 0
    assert "verdict" in capsys.readouterr().out


def test_cli_golden_regen(tmp_path):
    out = tmp_path / "g.json"
    assert main(["golden", "regen", "--out", str(out)]) == 0
    assert '"version": 1' in out.read_text()
