import json

import pytest

from src.config import ConfigError, load_config, parse_config
from src.types import RunConfig

MINIMAL = {"profile": {"type": "circle", "R": 1}, "u_range": [0, 6.283185307179586]}


def _with(**changes):
    document = json.loads(json.dumps(MINIMAL))
    document.update(changes)
    return json.dumps(document)


def test_minimal_config_gets_defaults(monkeypatch):
    monkeypatch.delenv("CATOPTRICA_WORKERS", raising=False)
    cfg = parse_config(json.dumps(MINIMAL))
    assert isinstance(cfg, RunConfig)
    assert cfg.profile.type == "circle" and cfg.profile.R == 1.0 and cfg.profile.center == 0j
    assert cfg.v_range == (-1.0, 1.0)
    assert (cfg.u_samples, cfg.v_samples) == (32, 9)
    assert cfg.signs == "PlusPlus"
    assert cfg.outputs.path is None and cfg.outputs.format == "csv"
    assert cfg.workers == 1
    assert cfg.verify.margin == 1e-3


def test_workers_default_from_environment(monkeypatch):
    monkeypatch.setenv("CATOPTRICA_WORKERS", "3")
    assert parse_config(json.dumps(MINIMAL)).workers == 3


@pytest.mark.parametrize("center", [[0.5, -1], {"re": 0.5, "im": -1}, "0.5-1j", "0.5 - 1j"])
def test_complex_values_in_several_spellings(center):
    cfg = parse_config(_with(profile={"type": "circle", "R": 1, "center": center}))
    assert cfg.profile.center == 0.5 - 1j


def test_polynomial_coefficients():
    cfg = parse_config(_with(profile={"type": "polynomial", "coeffs": [1.5, [0.2, 1], "0.3j"]}))
    assert cfg.profile.coeffs == [1.5, 0.2 + 1j, 0.3j]


def test_complex_values_serialize_to_pairs():
    cfg = parse_config(_with(profile={"type": "circle", "R": 1, "center": [1, 2]}))
    assert json.loads(cfg.model_dump_json())["profile"]["center"] == [1.0, 2.0]
    assert cfg.model_dump()["profile"]["center"] == 1 + 2j


def _errors(text):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    return info.value.errors


def test_negative_radius_is_located():
    errors = _errors(_with(profile={"type": "circle", "R": -1}))
    assert any(loc.startswith("profile") and "R" in loc for loc, _ in errors)


def test_empty_coefficients_are_rejected():
    errors = _errors(_with(profile={"type": "polynomial", "coeffs": []}))
    assert any("coeffs" in loc for loc, _ in errors)


def test_unknown_fields_are_rejected():
    errors = _errors(_with(colour="blue"))
    assert any(loc == "colour" for loc, _ in errors)


def test_unknown_profile_type_is_rejected():
    assert _errors(_with(profile={"type": "hyperbola"}))


@pytest.mark.parametrize("changes", [
    {"u_range": [1.0, 1.0]},
    {"v_range": [1.0, -1.0]},
    {"r_window": [3.0, -3.0]},
    {"u_samples": 1},
    {"signs": "MinusMinus"},
    {"outputs": {"format": "xml"}},
    {"profile": {"type": "circle", "R": 1, "center": "not a number"}},
    {"profile": {"type": "circle", "R": 1, "center": True}},
])
def test_invalid_settings_are_rejected(changes):
    assert _errors(_with(**changes))


def test_json_syntax_errors_carry_a_line():
    errors = _errors('{\n  "profile": {"type": "circle", "R": 1},\n  "u_range": [0, 1\n}')
    assert errors[0][0].startswith("line 4")


def test_load_config_from_file(tmp_path):
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(MINIMAL))
    assert load_config(path).profile.R == 1.0


def test_missing_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
