"""Tests for projcert.utils: projcert_dir, atomic_write_json, JSON number codec."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from projcert.utils import (
    atomic_write_json,
    decode_number,
    dump_json,
    encode_number,
    projcert_dir,
    vector_to_json,
)


class TestProjcertDir:
    def test_returns_env_var_path(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setenv("PROJCERT_DIR", "/custom/config")
        assert projcert_dir() == Path("/custom/config")

    def test_returns_default_without_env(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.delenv("PROJCERT_DIR", raising=False)
        assert projcert_dir() == Path.home() / ".projcert"


class TestAtomicWriteJson:
    def test_writes_valid_json(self, tmp_path: Path):
        target = tmp_path / "cert.json"
        atomic_write_json(target, {"verdict": "IsProjector"})
        assert json.loads(target.read_text(encoding="utf-8")) == {"verdict": "IsProjector"}

    def test_creates_parent_directories(self, tmp_path: Path):
        target = tmp_path / "a" / "b" / "cert.json"
        atomic_write_json(target, [1, 2, 3])
        assert json.loads(target.read_text(encoding="utf-8")) == [1, 2, 3]

    def test_no_temp_files_left_on_success(self, tmp_path: Path):
        atomic_write_json(tmp_path / "clean.json", {"ok": True})
        assert list(tmp_path.glob(".*tmp*")) == []

    def test_rejects_nan(self, tmp_path: Path):
        with pytest.raises(ValueError):
            atomic_write_json(tmp_path / "nan.json", {"x": math.nan})
        assert not (tmp_path / "nan.json").exists()


class TestDumpJson:
    def test_compact_is_deterministic(self):
        data = {"b": 1, "a": [1.5, "inf"]}
        assert dump_json(data) == dump_json(dict(data))
        assert dump_json(data) == '{"b":1,"a":[1.5,"inf"]}'

    def test_pretty_indents(self):
        assert dump_json({"a": 1}, pretty=True) == '{\n  "a": 1\n}'


class TestNumberCodec:
    @pytest.mark.parametrize(
        "value, encoded",
        [(1.5, 1.5), (math.inf, "inf"), (-math.inf, "-inf"), (0, 0.0)],
        ids=["finite", "plus-inf", "minus-inf", "int"],
    )
    def test_encode(self, value, encoded):
        assert encode_number(value) == encoded

    @pytest.mark.parametrize(
        "raw, decoded",
        [(2, 2.0), (-0.25, -0.25), ("inf", math.inf), ("-inf", -math.inf)],
        ids=["int", "float", "plus-inf", "minus-inf"],
    )
    def test_decode(self, raw, decoded):
        assert decode_number(raw) == decoded

    @pytest.mark.parametrize("raw", [True, "nan", "1.0", None, [1]], ids=["bool", "nan", "numeric-string", "null", "list"])
    def test_decode_rejects(self, raw):
        with pytest.raises(ValueError):
            decode_number(raw)

    def test_vector_to_json(self):
        assert vector_to_json(np.array([1.0, -np.inf])) == [1.0, "-inf"]
