import json
from dataclasses import asdict
from pathlib import Path

import pytest

from qshuffle.check_config import CHECK_NAMES, CheckSpec, acceptance_suite, load_suite, max_degree

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


def test_defaults():
    spec = CheckSpec()
    assert spec.name == "fm"
    assert spec.degree == 4
    assert spec.backend == "exact"
    assert spec.q_values == [1.3, 1.7]
    assert spec.spins["j1"].twice == 1


def test_spins_are_normalized():
    spec = CheckSpec("ybe", "0.5", "2/2", "3/2")
    assert (spec.j1, spec.j2, spec.j3) == ("1/2", "1", "3/2")


@pytest.mark.parametrize("overrides", [
    {"name": "nope"},
    {"j1": "0"},
    {"j2": "1/3"},
    {"degree": -1},
    {"degree": 9},
    {"max_m": -1},
    {"max_n": -1},
    {"count": 0},
    {"backend": "float"},
    {"backend": "numeric", "q_values": []},
    {"backend": "numeric", "q_values": [1.0]},
    {"tol": 0},
])
def test_validation(overrides):
    with pytest.raises(ValueError):
        CheckSpec.load(overrides)


def test_max_degree_env_override(monkeypatch):
    monkeypatch.setenv("QSHUFFLE_MAX_DEGREE", "10")
    assert max_degree() == 10
    assert CheckSpec(degree=10).degree == 10
    monkeypatch.setenv("QSHUFFLE_MAX_DEGREE", "ten")
    with pytest.raises(ValueError):
        max_degree()


def test_load_from_dict_instance_and_kwargs():
    spec = CheckSpec.load({"name": "ef", "j1": "3/2"})
    assert spec.name == "ef"
    again = CheckSpec.load(spec, degree=2)
    assert again.j1 == "3/2" and again.degree == 2
    assert spec.degree == 4
    with pytest.raises(TypeError):
        CheckSpec.load(42)


def test_save_and_load(tmp_path):
    spec = CheckSpec("delta", max_m=3, degree=6)
    path = tmp_path / "spec.json"
    spec.save(str(path))
    assert json.loads(path.read_text())["max_m"] == 3
    assert CheckSpec.load(str(path)) == spec
    assert json.loads(str(spec))["name"] == "delta"
    assert repr(spec).startswith("CheckSpec(")


def test_load_suite(tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps([{"name": "ef"}, {"name": "words", "max_n": 3}]))
    names = [spec.name for spec in load_suite(str(path))]
    assert names == ["ef", "words"]
    path.write_text(json.dumps({"name": "ef"}))
    with pytest.raises(TypeError):
        load_suite(str(path))


def test_acceptance_file_matches_suite():
    from_file = [asdict(spec) for spec in load_suite(str(CONFIG_DIR / "acceptance.json"))]
    assert from_file == [asdict(spec) for spec in acceptance_suite(include_numeric=False)]


def test_acceptance_suite_covers_every_check():
    exact = acceptance_suite(include_numeric=False)
    assert {spec.name for spec in exact} == set(CHECK_NAMES)
    full = acceptance_suite(q_values=[2.0])
    numeric = [spec for spec in full if spec.backend == "numeric"]
    assert len(numeric) == len([s for s in exact if s.name not in ("words", "mutation")])
    assert all(spec.q_values == [2.0] for spec in numeric)


def test_smoke_suite_loads():
    specs = load_suite(str(CONFIG_DIR / "smoke.json"))
    assert [s.name for s in specs] == ["fm", "k_consistency", "ybe", "ef", "fm"]
    assert specs[-1].backend == "numeric"
