import math
from pathlib import Path

import pytest

from catbell.errors import ConfigInvalid
from catbell.scenarios import (
    SCENARIOS,
    ScenarioConfig,
    load_config,
    parse_number,
    parse_overrides,
    run_scenario,
    sweep,
    sweep_curves,
    validate,
    write_result,
)

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def write_cfg(tmp_path, body):
    p = tmp_path / "s.cfg"
    p.write_text("[scenario]\n" + body)
    return p


@pytest.mark.parametrize("text,value", [("1.5", 1.5), ("pi/4", math.pi / 4), ("3*pi/4", 3 * math.pi / 4), ("-2", -2.0)])
def test_parse_number(text, value):
    assert parse_number(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["__import__('os')", "abc", "1/0", ""])
def test_parse_number_rejects(text):
    with pytest.raises(ConfigInvalid):
        parse_number(text)


def test_shipped_configs_validate():
    files = sorted(CONFIGS.glob("*.cfg"))
    assert files
    for f in files:
        if f.name == "bad.cfg":
            with pytest.raises(ConfigInvalid, match="alpha must be ≥ 0"):
                load_config(f)
        else:
            load_config(f)


@pytest.mark.parametrize(
    "body,message",
    [
        ("scenario_id = bell_chsh\nalpha = -1\n", "alpha must be ≥ 0"),
        ("scenario_id = bell_chsh\nbeta = -1\n", "beta must be ≥ 0"),
        ("scenario_id = nope\n", "unknown scenario_id"),
        ("alpha = 1\n", "scenario_id is required"),
        ("scenario_id = bell_chsh\nschema_version = 9\n", "schema_version"),
        ("scenario_id = bell_chsh\ncolour = red\n", "unknown key"),
        ("scenario_id = bell_chsh\nk = 3\n", "k must be"),
        ("scenario_id = bell_chsh\nomega = 0\n", "omega must be"),
        ("scenario_id = lg_bipartite\ntimes = 0, pi/2, pi/4\n", "increasing"),
        ("scenario_id = bell_chsh\ntimes = 0, 1\n", "four times"),
        ("scenario_id = bell_chsh\ngrid_half_width = 8\n", "grid_half_width"),
        ("scenario_id = epr_paradox\nc1 = 0.5\nc2 = 0.5\n", "c1"),
    ],
)
def test_validation_messages(tmp_path, body, message):
    with pytest.raises(ConfigInvalid, match=message):
        load_config(write_cfg(tmp_path, body))


def test_overrides_apply_and_are_checked(tmp_path):
    path = write_cfg(tmp_path, "scenario_id = bell_chsh\nalpha = 3\n")
    assert load_config(path, ["alpha=2", "beta = 1.5"]).alpha == 2.0
    with pytest.raises(ConfigInvalid, match="not in the schema"):
        parse_overrides(["gamma=1"])
    with pytest.raises(ConfigInvalid):
        parse_overrides(["alpha"])


def test_missing_file_and_section(tmp_path):
    with pytest.raises(ConfigInvalid):
        load_config(tmp_path / "none.cfg")
    p = tmp_path / "x.cfg"
    p.write_text("[other]\na = 1\n")
    with pytest.raises(ConfigInvalid, match="no \\[scenario\\]"):
        load_config(p)


def quick(sid, **kw):
    base = dict(alpha=1.0, beta=1.0, check_convergence=False, grid_step=0.08, husimi_step=0.25)
    base.update(kw)
    return ScenarioConfig(sid, **base)


@pytest.mark.parametrize("sid", SCENARIOS)
def test_every_scenario_runs_and_labels_datasets(sid):
    res = run_scenario(quick(sid))
    assert res.scenario_id == sid
    for ds in res.datasets:
        assert ds.figure and ds.csv.count("\n") > 1


def test_identical_configs_give_identical_files(tmp_path):
    cfg = quick("bell_chsh")
    a = write_result(run_scenario(cfg), tmp_path / "a")
    b = write_result(run_scenario(cfg), tmp_path / "b")
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_manifest_lists_every_file(tmp_path):
    files = write_result(run_scenario(quick("lg_bipartite")), tmp_path)
    listed = {line.split("\t")[0] for line in (tmp_path / "MANIFEST").read_text().splitlines()}
    assert listed == {f.name for f in files if f.name != "MANIFEST"}


def test_reports_carry_convergence_deltas():
    res = run_scenario(quick("bell_chsh", check_convergence=True))
    for rep in res.reports:
        assert {"step_halving_delta", "truncation_doubling_delta"} <= set(rep.diagnostics)
        assert rep.converged is not None


def test_single_value_sweep_equals_run():
    cfg = quick("lg_bipartite")
    (one,) = sweep(cfg, "amplitude", [1.5])
    direct = run_scenario(cfg.with_values(alpha=1.5, beta=1.5))
    assert [r.aggregate for r in one.reports] == [r.aggregate for r in direct.reports]


def test_sweep_curves_are_two_column():
    cfg = quick("lg_bipartite")
    vals = [0.5, 1.0]
    curves = sweep_curves(sweep(cfg, "amplitude", vals), "amplitude", vals)
    names = {c.name for c in curves}
    assert "curve_conditional_inference" in names
    for c in curves:
        lines = c.csv.strip().split("\n")
        assert lines[0] == "parameter,value" and len(lines) == 3


def test_sweep_rejects_unknown_parameter():
    with pytest.raises(ConfigInvalid):
        sweep(quick("bell_chsh"), "times", [1])


def test_validate_is_identity_on_good_config():
    cfg = quick("epr_paradox")
    assert validate(cfg) is cfg


def test_kerr_case_is_exposed():
    res = run_scenario(quick("single_mode_evolution", k=2, times=(math.pi / 2,)))
    assert len(res.datasets) == 1
