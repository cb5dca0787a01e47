import json

import pytest

from cpflab.config import ENV_VAR, Defaults, load_defaults


def test_builtin_defaults():
    d = load_defaults()
    assert d == Defaults()
    assert d.epsilon == 1e-3 and d.dim == 16 and d.n_quad == 201


def test_file_then_overrides(tmp_path, monkeypatch):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"epsilon": 0.01, "kappa": 2.0}))
    monkeypatch.setenv(ENV_VAR, str(path))
    d = load_defaults(kappa=0.5, step=None)
    assert d.epsilon == 0.01
    assert d.kappa == 0.5
    assert d.step == Defaults().step


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"epsilom": 0.01}))
    with pytest.raises(ValueError, match="epsilom"):
        load_defaults(str(path))
