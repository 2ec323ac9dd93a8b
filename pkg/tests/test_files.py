"""Atomic report output"""

import os

import pytest

from utils import files
from utils.files import atomic_write_many, atomic_write_text


def test_writes_every_file(tmp_path):
    first, second = tmp_path / "out" / "a.json", tmp_path / "out" / "a.md"
    atomic_write_many({first: "{}\n", second: "# a\n"})

    assert first.read_text(encoding='utf-8') == "{}\n"
    assert second.read_text(encoding='utf-8') == "# a\n"
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["a.json", "a.md"]


def test_overwrites_existing_file(tmp_path):
    target = tmp_path / "a.json"
    target.write_text("old", encoding='utf-8')
    atomic_write_text(target, "new")

    assert target.read_text(encoding='utf-8') == "new"
    assert [p.name for p in tmp_path.iterdir()] == ["a.json"]


def test_failed_rename_restores_earlier_files(tmp_path, monkeypatch):
    first, second = tmp_path / "a.json", tmp_path / "a.md"
    first.write_text("old", encoding='utf-8')
    real_replace = os.replace

    def replace(src, dst):
        if str(dst) == str(second):
            raise OSError("disk full")
        real_replace(src, dst)

    monkeypatch.setattr(files.os, "replace", replace)
    with pytest.raises(OSError):
        atomic_write_many({first: "new", second: "# a\n"})
    monkeypatch.undo()

    assert first.read_text(encoding='utf-8') == "old"
    assert not second.exists()
    assert [p.name for p in tmp_path.iterdir()] == ["a.json"]
