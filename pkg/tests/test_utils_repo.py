from boxtron.utils.repo import find_project_config_file


def test_find_project_config_file(tmp_path, monkeypatch):
    root = tmp_path.resolve()
    nested = root / "a" / "b"
    nested.mkdir(parents=True)
    assert find_project_config_file(nested) is None

    root.joinpath("a", ".boxtron").write_text("[default]\n")
    assert find_project_config_file(nested) == root / "a" / ".boxtron"

    monkeypatch.chdir(nested)
    assert find_project_config_file() == root / "a" / ".boxtron"
