import csv
import io
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from glslab.cli import main
from glslab.config import DEFAULT_TOLERANCES, ConfigError, ExperimentConfig, load_config
from glslab.criteria import CriterionResult, Table
from glslab.suites import SUITES, format_table, list_catalog, run_suite

FAST = dict(
    grid_size=256,
    p_count=16,
    catalog=("constant", "cosk(1)", "holder(1)"),
    n_values=(4, 8),
    r_values=(0, 1),
    deltas=(math.pi / 2, math.pi / 8),
)


# -- configuration ----------------------------------------------------------------


def test_default_config_is_valid():
    cfg = ExperimentConfig().validate()
    assert cfg.required == tuple(range(1, 13))
    assert cfg.tolerance("roundtrip") == DEFAULT_TOLERANCES["roundtrip"]


@given(
    st.sampled_from([256, 512, 2048]),
    st.integers(8, 200),
    st.floats(2.0, 1e4, allow_nan=False),
    st.lists(st.integers(1, 64), min_size=1, max_size=5),
    st.lists(st.floats(1e-3, math.pi), min_size=1, max_size=4),
    st.dictionaries(st.sampled_from(sorted(DEFAULT_TOLERANCES)), st.floats(1e-12, 1e3), max_size=3),
    st.lists(st.integers(1, 12), min_size=0, max_size=12, unique=True),
)
def test_ini_roundtrip(size, count, pmax, ns, deltas, tolerances, required):
    cfg = ExperimentConfig(
        grid_size=size, p_count=count, p_max=pmax, n_values=ns, deltas=deltas, tolerances=tolerances, required=required
    )
    back = ExperimentConfig.from_ini(cfg.to_ini())
    assert back == cfg
    assert back.config_hash() == cfg.config_hash()


def test_hash_changes_with_content():
    assert ExperimentConfig().config_hash() != ExperimentConfig(p_max=128.0).config_hash()


@pytest.mark.parametrize(
    "change",
    [
        {"grid_size": 100},
        {"grid_size": 128},
        {"p_count": 2},
        {"p_max": 1.5},
        {"catalog": ("nope",)},
        {"n_values": (0,)},
        {"deltas": (4.0,)},
        {"norm_ps": (0.5,)},
        {"tolerances": {"bogus": 1.0}},
        {"tolerances": {"roundtrip": -1.0}},
        {"required": (13,)},
        {"out_dir": ""},
    ],
)
def test_invalid_config(change):
    with pytest.raises(ConfigError):
        ExperimentConfig(**change).validate()


@pytest.mark.parametrize("text", ["[grid]\nsize = abc\n", "[mystery]\nx = 1\n", "not an ini"])
def test_unreadable_ini(text):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_ini(text)


def test_load_config(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[grid]\nsize = 512\n[tolerances]\nroundtrip = 0.5\n")
    cfg = load_config(str(path))
    assert cfg.grid_size == 512 and cfg.tolerance("roundtrip") == 0.5
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.ini"))


# -- tables -------------------------------------------------------------------------


def test_format_table_sorts_and_appends_hash():
    table = Table("t", ("f", "n", "v"), [("b", 2, 0.1), ("a", 10, 1 / 3), ("a", 2, math.inf), ("a", 3, True)], (0, 1))
    rows = list(csv.reader(io.StringIO(format_table(table, "h"))))
    assert rows[0] == ["f", "n", "v", "config_hash"]
    assert [r[:2] for r in rows[1:]] == [["a", "2"], ["a", "3"], ["a", "10"], ["b", "2"]]
    assert rows[1][2] == "inf" and rows[2][2] == "true" and rows[3][2] == "0.333333333333"
    assert all(r[-1] == "h" for r in rows[1:])


def test_criterion_line_format():
    res = CriterionResult(3, "demo", False, {"x": 1.5}, "x < 1", runtime=0.5, budget=10.0)
    assert res.line().startswith("[FAIL] criterion 03 demo")
    assert res.to_dict()["passed"] is False


def test_suites_cover_every_criterion():
    assert SUITES["all"] == tuple(range(1, 13))


# -- command line ---------------------------------------------------------------------


def test_catalog_command(capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "logsing(s): |f|_p ≍ c·p^s" in out
    assert "singular(gamma):" in out and "support endpoint b = 1/gamma" in out
    assert "constant" in out
    assert list_catalog() in out


def test_config_check_prints_canonical_form(capsys):
    assert main(["config-check", "--pmax", "64"]) == 0
    out = capsys.readouterr().out
    assert "pmax = 64.0" in out
    assert ExperimentConfig(p_max=64.0).config_hash() in out


@pytest.mark.parametrize("argv", [["config-check", "--grid-n", "100"], ["run", "--grid-n", "96", "--suite", "norms"]])
def test_invalid_configuration_exits_two(argv, capsys):
    assert main(argv) == 2
    assert "invalid configuration" in capsys.readouterr().err


def test_missing_config_file_exits_two(tmp_path, capsys):
    assert main(["config-check", "--config", str(tmp_path / "none.ini")]) == 2


def _write_fast_config(tmp_path, **extra):
    path = tmp_path / "fast.ini"
    path.write_text(ExperimentConfig(**{**FAST, **extra}).to_ini())
    return str(path)


def test_norms_suite_is_deterministic(tmp_path, capsys):
    cfg_path = _write_fast_config(tmp_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", cfg_path, "--suite", "norms", "--out", str(out1)]) == 0
    assert main(["run", "--config", cfg_path, "--suite", "norms", "--out", str(out2)]) == 0
    summary = json.loads((out1 / "summary.json").read_text())
    assert summary["tables"] == sorted(p.name for p in out1.glob("*.csv"))
    for name in summary["tables"]:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    cfg = load_config(cfg_path)
    norms = list(csv.DictReader(io.StringIO((out1 / "norms.csv").read_text())))
    cos = [r for r in norms if r["f"] == "cosk(1)" and r["p"] == "2"]
    assert cos[0]["lp_norm"] == "0.707106781187"
    assert all(r["config_hash"] == cfg.config_hash() for r in norms)
    assert summary["provenance"]["config_hash"] == cfg.config_hash()
    assert [c["number"] for c in summary["criteria"]] == [1, 5]
    assert "[PASS] criterion 01" in capsys.readouterr().out


def test_direct_estimate_rows_for_constant(tmp_path):
    cfg = ExperimentConfig(**FAST).with_overrides(catalog=("constant",)).validate()
    from glslab.suites import _theorem21_tables

    (table,) = _theorem21_tables(cfg)
    assert table.rows
    for row in table.rows:
        assert row[2:4] == (0.0, 0.0)
        assert row[-1] == "ok"


def test_exit_code_follows_required_criteria(tmp_path, monkeypatch):
    import glslab.suites as suites

    def fake(number, cfg):
        return CriterionResult(number, "fake", number != 5, {}, "", runtime=0.0, budget=1.0)

    monkeypatch.setattr(suites, "run_criterion", fake)
    strict = ExperimentConfig(**FAST).validate()
    lenient = ExperimentConfig(**FAST, required=(1,)).validate()
    assert run_suite(strict, "norms", str(tmp_path / "s")).exit_code == 1
    bundle = run_suite(lenient, "norms", str(tmp_path / "l"))
    assert bundle.exit_code == 0
    assert bundle.required_failures == []
    summary = json.loads((tmp_path / "l" / "summary.json").read_text())
    assert summary["passed"] is False


def test_unknown_suite_rejected(tmp_path):
    with pytest.raises(ValueError):
        run_suite(ExperimentConfig(**FAST), "nope", str(tmp_path))
