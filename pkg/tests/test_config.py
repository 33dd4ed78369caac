import json

import pytest

from dglab.config import ConfigError, apply_overrides, load_config, validate_config


def test_minimal_sod_fills_preset():
    cfg = validate_config({"scenario": "sod"})
    assert cfg.mesh.elements == 40 and cfg.degree == 5
    assert cfg.mesh.domain == (0.0, 1.0) and cfg.mesh.boundary == "dirichlet_outflow"
    assert cfg.flux == "local_lax_friedrichs"
    assert cfg.viscosity.kind == "super_gaussian" and cfg.viscosity.lam == 100
    assert cfg.sensor.c == 4.0 and cfg.time.final_time == 0.2 and cfg.time.cfl == 0.38


def test_advection_defaults():
    cfg = validate_config({"scenario": "advection_fig5"})
    assert (cfg.mesh.elements, cfg.degree, cfg.flux, cfg.sensor.c) == (12, 10, "upwind", 1.0)
    assert cfg.viscosity.lam is None


@pytest.mark.parametrize("doc,needle", [
    ({"scenario": "sod", "time": {"cfl": -0.1}}, "time.cfl"),
    ({"scenario": "sod", "flux": "upwind"}, "upwind"),
    ({"scenario": "sod", "mesh": {"spacing": 3}}, "mesh.spacing"),
    ({"scenario": "sod", "time": {"mode": "split_filter"}}, "split_filter"),
    ({"scenario": "sod", "output": {"snapshot_times": [0.5]}}, "snapshot_times"),
    ({"scenario": "sod", "mesh": {"domain": [1, 0]}}, "left < right"),
    ({"scenario": "nope"}, "scenario"),
    ({"scenario": "sod", "degree": 0}, "degree"),
])
def test_invalid_documents(doc, needle):
    with pytest.raises(ConfigError) as info:
        validate_config(doc)
    assert needle in str(info.value)


def test_parse_error_has_line_and_column(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "scenario": "sod",\n  "degree": ,\n}\n')
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert f"{path}:3:" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.json")


def test_overrides(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"scenario": "sod"}))
    cfg = load_config(path, ["time.cfl=0.2", "viscosity.kind=c0_linear", "output.snapshot_times=[0.1]"])
    assert cfg.time.cfl == 0.2 and cfg.viscosity.kind == "c0_linear"
    assert cfg.output.snapshot_times == [0.1]
    doc = {"a": 1}
    assert apply_overrides(doc, ["b.c=x"]) == {"a": 1, "b": {"c": "x"}} and doc == {"a": 1}
    with pytest.raises(ConfigError):
        apply_overrides({}, ["novalue"])
    with pytest.raises(ConfigError):
        apply_overrides({"a": 1}, ["a.b=2"])
