import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from wiretap_rates.audit import AuditReport
from wiretap_rates.cli import (
    ConfigError,
    SweepSettings,
    load_config,
    main,
    render_svg,
    sweep_values,
    write_csv,
)

ORTHO_BLOCK = {
    "h_l": 1.0, "h_1m": 0.8, "h_2m": 0.6, "h_1c": 0.5, "h_2c": 0.7,
    "P_l": 4.0, "P_1e": 2.0, "P_2e": 3.0,
    "N_l": 1.0, "N_1e_m": 1.0, "N_2e_m": 1.5, "N_1e_c": 0.8, "N_2e_c": 1.2,
}

GENERAL_BLOCK = {
    "h_l": 1.0, "h_1e_l": 0.5, "h_2e_l": -0.4, "h_l_1e": 0.9, "h_l_2e": 0.7,
    "h_2e_1e": 0.3, "h_1e_2e": 0.6,
    "P_l": 4.0, "P_1e": 2.0, "P_2e": 3.0,
    "N_l": 1.0, "N_1e": 0.8, "N_2e": 1.2,
}


def write_config(tmp_path: Path, payload: dict, name="cfg.json") -> str:
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def ortho_config(tmp_path: Path, **extra) -> str:
    payload = {"kind": "orthogonal-gaussian", "orthogonal": ORTHO_BLOCK}
    payload.update(extra)
    return write_config(tmp_path, payload)


def test_load_bundled_configs_by_name():
    for name in ("fig3a", "fig3b.json", "dm_bsc"):
        cfg = load_config(name)
        assert cfg.kind in ("general-gaussian", "dm")
    assert load_config("fig3a").general is not None
    assert load_config("dm_bsc").dm_channel is not None


def test_load_config_rejects_unknown_kind(tmp_path):
    path = write_config(tmp_path, {"kind": "quantum"})
    with pytest.raises(ConfigError, match="kind"):
        load_config(path)


def test_load_config_rejects_unknown_block(tmp_path):
    path = write_config(
        tmp_path,
        {"kind": "orthogonal-gaussian", "orthogonal": ORTHO_BLOCK, "general": GENERAL_BLOCK},
    )
    with pytest.raises(ConfigError, match="not allowed"):
        load_config(path)


def test_load_config_rejects_unknown_key_in_block(tmp_path):
    block = dict(ORTHO_BLOCK, h_3m=1.0)
    path = write_config(tmp_path, {"kind": "orthogonal-gaussian", "orthogonal": block})
    with pytest.raises(ConfigError, match="h_3m"):
        load_config(path)


def test_load_config_requires_model_block(tmp_path):
    path = write_config(tmp_path, {"kind": "general-gaussian", "general": GENERAL_BLOCK})
    with pytest.raises(ConfigError, match="orthogonal"):
        load_config(path)


def test_load_config_rejects_missing_key(tmp_path):
    block = dict(ORTHO_BLOCK)
    del block["N_l"]
    path = write_config(tmp_path, {"kind": "orthogonal-gaussian", "orthogonal": block})
    with pytest.raises(ConfigError, match="N_l"):
        load_config(path)


def test_load_config_rejects_non_numeric_field(tmp_path):
    block = dict(ORTHO_BLOCK, P_l="four")
    path = write_config(tmp_path, {"kind": "orthogonal-gaussian", "orthogonal": block})
    with pytest.raises(ConfigError, match="P_l"):
        load_config(path)
    block = dict(ORTHO_BLOCK, P_l=True)
    path = write_config(tmp_path, {"kind": "orthogonal-gaussian", "orthogonal": block})
    with pytest.raises(ConfigError, match="P_l"):
        load_config(path)


def test_load_config_rejects_invalid_sweep(tmp_path):
    path = ortho_config(
        tmp_path,
        sweep={"parameter": "bogus", "start": 0.0, "stop": 1.0, "step": 0.5},
    )
    with pytest.raises(ConfigError, match="bogus"):
        load_config(path)
    path = ortho_config(
        tmp_path,
        sweep={"parameter": "P_l", "start": 1.0, "stop": 0.0, "step": 0.5},
    )
    with pytest.raises(ConfigError, match="stop"):
        load_config(path)


def test_load_config_rejects_bad_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="JSON"):
        load_config(str(p))


def test_load_config_missing_file():
    with pytest.raises(ConfigError):
        load_config("no_such_config_anywhere")


def test_sweep_values_counts():
    assert len(sweep_values(SweepSettings("P_l", 0.0, 20.0, 0.2))) == 101
    assert sweep_values(SweepSettings("P_l", 3.0, 3.0, 1.0)) == [3.0]
    vals = sweep_values(SweepSettings("P_l", 0.0, 1.0, 0.3))
    assert vals == pytest.approx([0.0, 0.3, 0.6, 0.9])


def test_write_csv_format(tmp_path):
    out = tmp_path / "t.csv"
    write_csv(str(out), "P_l", [0.0, 1.0], {"R_nc": [0.5, 0.25], "R_og": [0.125, 0.0]})
    lines = out.read_text().splitlines()
    assert lines[0] == "P_l,R_nc,R_og"
    assert lines[1] == "0.000000,0.500000,0.125000"
    assert len(lines) == 3


def test_render_svg_structure():
    xs = [0.0, 1.0, 2.0]
    table = {"R_nc": [0.1, 0.2, 0.3], "R_og": [0.0, 0.1, 0.2]}
    svg = render_svg("P_l", xs, table, "title")
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
    assert len(polylines) == len(table)


def test_point_command_orthogonal(tmp_path, capsys):
    rc = main(["point", "--config", ortho_config(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "R_og" in out and "R_nc" in out


def test_point_command_general(tmp_path, capsys):
    path = write_config(tmp_path, {
        "kind": "general-gaussian",
        "orthogonal": ORTHO_BLOCK,
        "general": GENERAL_BLOCK,
        "optimizer": {"coarse_resolution": 0.5, "refine_iterations": 1},
    })
    rc = main(["point", "--config", path])
    assert rc == 0
    out = capsys.readouterr().out
    for col in ("R_nc", "R_pc", "R_og", "R_njg", "R_g"):
        assert col in out
    assert "worst-case rho" in out


def test_sweep_command_writes_deterministic_csv_and_svg(tmp_path, capsys):
    path = ortho_config(
        tmp_path,
        sweep={"parameter": "P_l", "start": 0.5, "stop": 2.5, "step": 1.0},
    )
    csv1 = tmp_path / "a.csv"
    svg1 = tmp_path / "a.svg"
    rc = main(["sweep", "--config", path, "--out", str(csv1), "--svg", str(svg1)])
    assert rc == 0
    lines = csv1.read_text().splitlines()
    assert lines[0] == "P_l,R_nc,R_pc,R_og"
    assert len(lines) == 4
    ET.parse(svg1)  # well-formed XML
    csv2 = tmp_path / "b.csv"
    main(["sweep", "--config", path, "--out", str(csv2)])
    assert csv1.read_bytes() == csv2.read_bytes()
    capsys.readouterr()


def test_sweep_command_defaults_to_config_output(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = ortho_config(
        tmp_path,
        sweep={"parameter": "P_l", "start": 0.0, "stop": 1.0, "step": 0.5},
        output={"csv": "from_config.csv"},
    )
    assert main(["sweep", "--config", path]) == 0
    assert (tmp_path / "from_config.csv").exists()
    capsys.readouterr()


def test_sweep_command_without_sweep_block_uses_default_grid(tmp_path, capsys):
    # default sweep is P_l over [0, 20] in steps of 0.2
    out = tmp_path / "d.csv"
    rc = main(["sweep", "--config", ortho_config(tmp_path), "--out", str(out)])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 102
    capsys.readouterr()


def test_dm_sweep_emits_single_rate_column(tmp_path, capsys):
    from wiretap_rates.discrete import DMChannel
    from importlib.resources import files
    (tmp_path / "ch.dmc").write_text(
        (files("wiretap_rates") / "configs" / "bsc_degraded.dmc").read_text()
    )
    path = write_config(tmp_path, {
        "kind": "dm",
        "dm": {"channel_file": "ch.dmc", "grid_resolution": 0.1},
        "sweep": {"parameter": "grid_resolution", "start": 0.2,
                  "stop": 0.5, "step": 0.1},
    })
    out = tmp_path / "dm.csv"
    rc = main(["sweep", "--config", path, "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "grid_resolution,R_dm"
    assert len(lines) == 5
    capsys.readouterr()


def test_dm_command_on_bundled_config(capsys):
    rc = main(["dm", "--config", "dm_bsc"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "sup-inf rate" in out
    assert "0.41" in out


def test_dm_command_rejects_gaussian_config(tmp_path, capsys):
    rc = main(["dm", "--config", ortho_config(tmp_path)])
    assert rc == 1
    assert "config error" in capsys.readouterr().err


def test_audit_command_writes_rows(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    rc = main(["audit", "--draws", "2", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "draw,term,closed,oracle,abs_error"
    # 5 orthogonal + 8 general rows per draw
    assert len(lines) == 1 + 2 * 13
    assert "PASS" in capsys.readouterr().out


def test_audit_command_config_selects_family(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    rc = main(["audit", "--draws", "2", "--config", ortho_config(tmp_path),
               "--out", str(out)])
    assert rc == 0
    body = out.read_text()
    assert "orthogonal/" in body and "general/" not in body
    capsys.readouterr()


def test_audit_command_rejects_dm_config(capsys):
    rc = main(["audit", "--config", "dm_bsc"])
    assert rc == 1
    assert "config error" in capsys.readouterr().err


def test_audit_command_failure_exit_code(monkeypatch, capsys):
    import wiretap_rates.cli as cli
    from wiretap_rates.audit import AuditRow

    def fake(seed, draws, rho2_both, models):
        row = AuditRow(0, "orthogonal/main", 1.0, 2.0, 1.0, True)
        return AuditReport(seed, draws, (row,))

    monkeypatch.setattr(cli, "run_audit", fake)
    rc = main(["audit", "--draws", "1"])
    assert rc == 2
    assert "FAIL" in capsys.readouterr().out


def test_unreadable_output_path_is_io_error(tmp_path, capsys):
    path = ortho_config(
        tmp_path,
        sweep={"parameter": "P_l", "start": 0.0, "stop": 1.0, "step": 0.5},
    )
    rc = main(["sweep", "--config", path, "--out",
               str(tmp_path / "missing_dir" / "x.csv")])
    assert rc == 1
    assert "i/o error" in capsys.readouterr().err
