"""
Tests for scenario loading and validation.
"""

import copy
import hashlib
import json
from pathlib import Path

import numpy as np
import pytest
import yaml

from scenarios.factory import build_problem, resolve_matrix, resolve_vector
from scenarios.loader import load_scenario, scenario_from_dict
from scenarios.presets import case_study_config, lqr_scalar_config
from scenarios.schema import canonical_json

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def _raw(name: str) -> dict:
    with open(SCENARIO_DIR / name) as f:
        return yaml.safe_load(f)


def test_invalid_scenario():
    """Test that invalid scenarios raise errors."""
    with pytest.raises(FileNotFoundError):
        load_scenario("scenarios/nonexistent.yaml")


@pytest.mark.parametrize("name", ["case7_bas.yaml", "case7_nosafety.yaml",
                                  "case7_bas_figure_obstacle.yaml", "lqr_scalar.yaml"])
def test_bundled_presets_load(name):
    config = load_scenario(str(SCENARIO_DIR / name))
    assert config.name == Path(name).stem
    assert isinstance(config.adp.upsilon_floor, float)


def test_case_study_preset_matches_builder():
    """The bundled YAML and the in-code builder resolve to the same problem."""
    from_file = build_problem(load_scenario(str(SCENARIO_DIR / "case7_bas.yaml")))
    from_code = build_problem(case_study_config())
    np.testing.assert_array_equal(from_file.x0, from_code.x0)
    np.testing.assert_array_equal(from_file.theta0, from_code.theta0)
    np.testing.assert_array_equal(from_file.Gamma0, from_code.Gamma0)
    np.testing.assert_array_equal(from_file.grid.points, from_code.grid.points)
    assert from_file.icl == from_code.icl
    assert from_file.adp == from_code.adp
    assert from_file.spec.beta0 == from_code.spec.beta0


def test_lqr_preset_matches_builder():
    assert load_scenario(str(SCENARIO_DIR / "lqr_scalar.yaml")).config_hash() == lqr_scalar_config().config_hash()


def test_case_study_modes():
    bas = case_study_config()
    nosafety = case_study_config(mode="no-safety")
    assert bas.with_barrier and bas.basis == "quadratic-6"
    assert not nosafety.with_barrier and nosafety.basis == "quadratic-3"
    assert build_problem(bas).dynamics.state_dim == 3
    assert build_problem(nosafety).dynamics.state_dim == 2


def test_unknown_top_level_key_rejected():
    data = _raw("case7_bas.yaml")
    data["agents"] = 3
    with pytest.raises(ValueError, match="agents"):
        scenario_from_dict(data)


def test_unknown_nested_key_rejected():
    data = _raw("case7_bas.yaml")
    data["estimator"]["gamma"] = 1.0
    with pytest.raises(ValueError, match="estimator"):
        scenario_from_dict(data)


def test_unknown_component_key_rejected():
    data = _raw("case7_bas.yaml")
    data["constraint"]["radius"] = 0.5
    with pytest.raises(ValueError, match="constraint"):
        scenario_from_dict(data)


def test_missing_required_field():
    data = _raw("case7_bas.yaml")
    del data["x0"]
    with pytest.raises(ValueError, match="Missing required field"):
        scenario_from_dict(data)


def test_unknown_component_name():
    data = _raw("case7_bas.yaml")
    data["plant"] = "pendulum"
    with pytest.raises(ValueError, match="Unknown plant"):
        scenario_from_dict(data)


def test_misspelled_component_param():
    data = _raw("case7_bas.yaml")
    data["constraint"]["params"]["radious"] = 0.5
    with pytest.raises(ValueError, match=r"constraint\.params: unknown parameter\(s\) radious"):
        scenario_from_dict(data)


def test_barrier_param_rejected_by_constructor():
    data = _raw("case7_bas.yaml")
    data["barrier"]["params"]["K"] = -1.0
    with pytest.raises(ValueError, match="barrier.K must be positive"):
        scenario_from_dict(data)


@pytest.mark.parametrize("key, value", [
    ("mode", "safe"),
    ("dt", 0.0),
    ("log_every", 0),
    ("schema_version", 2),
    ("duration", 0.1),
])
def test_invalid_top_level_values(key, value):
    data = _raw("case7_bas.yaml")
    data[key] = value
    with pytest.raises(ValueError):
        scenario_from_dict(data)


@pytest.mark.parametrize("section, key, value", [
    ("estimator", "gamma_obs", 0.0),
    ("estimator", "stack_capacity", 0),
    ("estimator", "theta0", [3.0, 0.0, 0.0, 0.0]),
    ("adp", "upsilon_ceiling", 1e-7),
    ("adp", "Q", [1.0, -1.0, 1.0]),
    ("adp", "W_c0", [0.5, 0.5]),
    ("grid", "count", 0),
    ("grid", "z_range", [0.1, 0.0]),
])
def test_invalid_section_values(section, key, value):
    data = _raw("case7_bas.yaml")
    data[section][key] = value
    with pytest.raises(ValueError):
        scenario_from_dict(data)


def test_basis_must_match_learning_state():
    data = _raw("case7_bas.yaml")
    data["basis"] = "quadratic-3"
    with pytest.raises(ValueError, match="dimension"):
        scenario_from_dict(data)


def test_unsafe_start_rejected_only_with_barrier():
    data = _raw("case7_bas.yaml")
    data["x0"] = [1.0, 2.0]
    with pytest.raises(ValueError, match="strictly safe"):
        scenario_from_dict(data)

    data = _raw("case7_nosafety.yaml")
    data["x0"] = [1.0, 2.0]
    assert scenario_from_dict(data).x0 == [1.0, 2.0]


def test_json_round_trip(tmp_path):
    config = case_study_config()
    path = tmp_path / "case.json"
    path.write_text(json.dumps(config.to_dict()))
    loaded = load_scenario(str(path))
    assert loaded.config_hash() == config.config_hash()


def test_config_hash_is_git_blob_hash():
    config = lqr_scalar_config()
    body = canonical_json(config.to_dict()).encode("utf-8")
    expected = hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()
    assert config.config_hash() == expected
    assert lqr_scalar_config(dt=5e-4).config_hash() != expected


def test_with_overrides():
    config = case_study_config(duration=2.0)
    original = copy.deepcopy(config.to_dict())
    updated = config.with_overrides(dt=5e-4, duration=1.0, seed=3)
    assert (updated.dt, updated.duration, updated.grid.seed) == (5e-4, 1.0, 3)
    assert config.to_dict() == original
    assert config.with_overrides().config_hash() == config.config_hash()
    with pytest.raises(ValueError):
        config.with_overrides(duration=0.1)


def test_resolve_vector():
    np.testing.assert_array_equal(resolve_vector(0.5, 3, "v"), [0.5, 0.5, 0.5])
    np.testing.assert_array_equal(resolve_vector([1, 2], 2, "v"), [1.0, 2.0])
    with pytest.raises(ValueError):
        resolve_vector([1, 2], 3, "v")


def test_resolve_matrix():
    np.testing.assert_array_equal(resolve_matrix(2.0, 2, "M"), 2.0 * np.eye(2))
    np.testing.assert_array_equal(resolve_matrix([1.0, 3.0], 2, "M"), np.diag([1.0, 3.0]))
    np.testing.assert_array_equal(resolve_matrix([[2.0, 1.0], [1.0, 2.0]], 2, "M"), [[2.0, 1.0], [1.0, 2.0]])
    with pytest.raises(ValueError, match="symmetric"):
        resolve_matrix([[2.0, 1.0], [0.0, 2.0]], 2, "M")
    with pytest.raises(ValueError, match="positive definite"):
        resolve_matrix([[1.0, 2.0], [2.0, 1.0]], 2, "M")
    with pytest.raises(ValueError):
        resolve_matrix([1.0, 2.0, 3.0], 2, "M")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
