import json
import math

import pytest

from spindiode.cli import main
from spindiode.models import ModelSpec, Variant
from spindiode.sweep import BathConfig, SweepConfig, SweepTable, export, run_sweep

TUNED = {"variant": "Diode", "Delta": 5.0, "delta": 0.03, "J34": -6.3}


def small_config(**overrides) -> str:
    doc = {
        "model": TUNED,
        "axes": [["Delta", [5.0]], ["delta", [0.01, 0.1]]],
        "coupled": {"J34": "critical_j34(Delta)"},
    }
    doc.update(overrides)
    return json.dumps(doc)


def test_axis_expansion():
    cfg = SweepConfig.from_json(
        small_config(axes=[["delta", {"linspace": [0.0, 1.0, 5]}], ["Delta", {"logspace": [0, 2, 3]}]])
    )
    assert cfg.axes[0][1] == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert cfg.axes[1][1] == (1.0, 10.0, 100.0)
    with pytest.raises(ValueError):
        SweepConfig.from_json(small_config(axes=[["delta", {"linspace": [0, 1, 3], "extra": 1}]]))
    with pytest.raises(ValueError):
        SweepConfig.from_json(small_config(axes=[["delta", {"geomspace": [1, 2, 3]}]]))


def test_config_validation_messages():
    with pytest.raises(ValueError, match="not a model or bath parameter"):
        SweepConfig.from_json(small_config(axes=[["bogus", [1.0]]]))
    with pytest.raises(ValueError, match="duplicate axis"):
        SweepConfig.from_json(small_config(axes=[["delta", [0.1]], ["delta", [0.2]]]))
    with pytest.raises(ValueError, match="already an axis"):
        SweepConfig.from_json(small_config(coupled={"delta": "delta + 1"}))
    with pytest.raises(ValueError, match="unknown name"):
        SweepConfig.from_json(small_config(coupled={"J34": "__import__('os')"}))
    with pytest.raises(ValueError, match="unknown metric"):
        SweepConfig.from_json(small_config(outputs=["K_f"]))
    with pytest.raises(ValueError, match="unknown config fields"):
        SweepConfig.from_json(small_config(extra_block={}))
    with pytest.raises(ValueError, match="bath"):
        SweepConfig.from_json(small_config(bath={"mode": "spin", "flux": 1.0}))


def test_digest_is_stable_and_sensitive():
    a = SweepConfig.from_json(small_config())
    b = SweepConfig.from_json(small_config())
    c = SweepConfig.from_json(small_config(axes=[["Delta", [5.0]], ["delta", [0.01, 0.2]]]))
    assert a.digest() == b.digest()
    assert a.digest() != c.digest()


def test_hot_temperature_from_dT():
    bath = BathConfig(mode="heat", T_C=0.5, dT=3.0)
    assert bath.hot_temperature == pytest.approx(3.5)
    assert BathConfig(mode="heat", T_C=0.5, T_H=7.0).hot_temperature == pytest.approx(7.0)


def test_run_sweep_rows_and_coupling():
    cfg = SweepConfig.from_json(small_config())
    table = run_sweep(cfg)
    assert table.header == ["Delta", "delta", "J34", "J_f", "J_r", "R", "C", "error"]
    assert len(table.rows) == 2
    # coupled J34 follows the critical line of the template Delta = 5
    assert table.column("J34") == [-6.3, -6.3]
    assert all(err == "" for err in table.column("error"))
    r = table.column("R")
    assert r[0] > 1e4 and r[1] > 1e2
    assert table.provenance["config_sha256"] == cfg.digest()


def test_failed_points_are_recorded_not_dropped():
    # delta = 0 leaves a degenerate steady state, which the solver refuses
    cfg = SweepConfig.from_json(small_config(axes=[["Delta", [5.0]], ["delta", [0.0, 0.1]]]))
    table = run_sweep(cfg)
    assert len(table.rows) == 2
    errs = table.column("error")
    assert "RuntimeError" in errs[0]
    assert errs[1] == ""
    assert math.isnan(table.column("R")[0])
    assert table.column("R")[1] > 1e2


def test_worker_pool_matches_serial():
    cfg = SweepConfig.from_json(small_config())
    serial = run_sweep(cfg)
    par = run_sweep(SweepConfig.from_json(small_config(workers=2)))
    assert serial.header == par.header
    for a, b in zip(serial.rows, par.rows):
        assert a == b


def test_export_roundtrip_json(tmp_path):
    cfg = SweepConfig.from_json(small_config(axes=[["Delta", [5.0]], ["delta", [0.0, 0.01]]]))
    table = run_sweep(cfg)
    path = export(table, "json", tmp_path / "t.json")
    back = SweepTable.from_json(path.read_text())
    assert back.header == table.header
    for a, b in zip(back.rows, table.rows):
        for x, y in zip(a, b):
            if isinstance(y, float) and math.isnan(y):
                assert x is None  # nan serializes as null without a flag
            else:
                assert x == y
    assert back.provenance == table.provenance


def test_export_csv_and_inf(tmp_path):
    cfg = SweepConfig.from_json(small_config())
    table = run_sweep(cfg)
    table.rows[0][table.header.index("R")] = math.inf
    p = export(table, "csv", tmp_path / "t.csv")
    lines = p.read_text().splitlines()
    assert lines[0] == "Delta,delta,J34,J_f,J_r,R,C,error"
    assert "inf" in lines[1].split(",")
    with pytest.raises(ValueError):
        export(SweepTable(header=["a"], rows=[], provenance={}), "csv", tmp_path / "e.csv")
    with pytest.raises(ValueError):
        export(table, "parquet", tmp_path / "t.parquet")
    # json keeps inf as a flagged null and the roundtrip restores it
    jp = export(table, "json", tmp_path / "t2.json")
    doc = json.loads(jp.read_text())
    assert doc["rows"][0]["R"] is None and doc["rows"][0]["R_infinite"] is True
    back = SweepTable.from_json(jp.read_text())
    assert back.column("R")[0] == math.inf


def test_entanglement_outputs():
    doc = {
        "model": {"variant": "Diode", "Delta": 5.0, "delta": 0.1, "J34": -6.3},
        "axes": [["delta", [0.1]]],
        "outputs": ["R", "F_psi_minus_34_r", "concurrence_34_r"],
    }
    table = run_sweep(SweepConfig.from_json(json.dumps(doc)))
    row = dict(zip(table.header, table.rows[0]))
    assert row["F_psi_minus_34_r"] > 0.9
    assert row["concurrence_34_r"] > 0.8


def test_cli_sweep_roundtrip(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(small_config())
    out_path = tmp_path / "out.csv"
    rc = main(["sweep", "--config", str(cfg_path), "--out", str(out_path), "--format", "csv"])
    assert rc == 0
    assert "2 rows (0 failed)" in capsys.readouterr().out
    assert out_path.read_text().startswith("Delta,delta,J34,")


def test_cli_exit_codes(tmp_path, capsys):
    rc = main(["sweep", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o.csv")])
    assert rc == 2
    assert "not found" in capsys.readouterr().err

    bad = tmp_path / "bad.json"
    bad.write_text("{\"axes\": []}")
    rc = main(["sweep", "--config", str(bad), "--out", str(tmp_path / "o.csv")])
    assert rc == 2
    assert "invalid sweep config" in capsys.readouterr().err

    # every point fails (degenerate manifold) -> runtime exit code
    all_fail = tmp_path / "fail.json"
    all_fail.write_text(small_config(axes=[["Delta", [5.0]], ["delta", [0.0]]]))
    rc = main(["sweep", "--config", str(all_fail), "--out", str(tmp_path / "o.csv")])
    assert rc == 1

    rc = main(["figure", "nosuchfigure", "--out", str(tmp_path)])
    assert rc == 2
    assert "unknown preset" in capsys.readouterr().err


def test_cli_steady_json(tmp_path, capsys):
    spec = ModelSpec(variant=Variant.DIODE, Delta=5.0, delta=0.01, J34=-6.3)
    rc = main(["steady", "--model", spec.to_json(), "--bias", "forward"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["variant"] == "Diode"
    assert doc["hot_site"] == 1 and doc["cold_site"] == 6
    assert doc["J"] == pytest.approx(2.923092e-02, rel=1e-4)
    assert doc["continuity"] < 1e-8
    assert len(doc["magnetization"]) == 6

    rc = main(["steady", "--model", "{\"variant\": \"NoSuch\"}", "--bias", "forward"])
    assert rc == 2
    assert "invalid model" in capsys.readouterr().err


def test_cli_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["sweep"])  # missing required --config/--out
    assert exc.value.code == 2


def test_default_workers_env(monkeypatch):
    from spindiode.sweep import default_workers

    monkeypatch.delenv("SPINDIODE_WORKERS", raising=False)
    assert default_workers() == 1
    monkeypatch.setenv("SPINDIODE_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("SPINDIODE_WORKERS", "zero")
    with pytest.raises(ValueError):
        default_workers()
