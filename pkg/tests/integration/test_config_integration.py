"""Integration tests for Config against real .env files."""

import pytest

from projcert.config import Config

pytestmark = pytest.mark.integration


@pytest.fixture
def _isolated(monkeypatch):
    # load_dotenv writes into os.environ; register the names so monkeypatch
    # removes whatever the .env files set
    for name in ("PROJCERT_SEED", "PROJCERT_SAMPLES", "PROJCERT_LOG_LEVEL"):
        monkeypatch.setenv(name, "")
        monkeypatch.delenv(name)


@pytest.mark.usefixtures("_isolated")
class TestConfigIntegration:
    def test_reads_env_file_from_config_dir(self, tmp_path, monkeypatch):
        (tmp_path / ".env").write_text("PROJCERT_SEED=123\nPROJCERT_SAMPLES=40\n")
        # chdir away from repo root so load_dotenv won't find the real .env
        workdir = tmp_path / "workdir"
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        monkeypatch.setenv("PROJCERT_DIR", str(tmp_path))
        cfg = Config()
        assert (cfg.seed, cfg.samples) == (123, 40)

    def test_local_env_wins_over_config_dir(self, tmp_path, monkeypatch):
        config_dir = tmp_path / "config"
        config_dir.mkdir()
        (config_dir / ".env").write_text("PROJCERT_SEED=1\nPROJCERT_LOG_LEVEL=ERROR\n")
        workdir = tmp_path / "workdir"
        workdir.mkdir()
        (workdir / ".env").write_text("PROJCERT_SEED=2\n")
        monkeypatch.chdir(workdir)
        monkeypatch.setenv("PROJCERT_DIR", str(config_dir))
        cfg = Config()
        assert cfg.seed == 2
        assert cfg.log_level == "ERROR"

    def test_process_env_wins_over_env_files(self, tmp_path, monkeypatch):
        (tmp_path / ".env").write_text("PROJCERT_SEED=5\n")
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("PROJCERT_DIR", str(tmp_path))
        monkeypatch.setenv("PROJCERT_SEED", "9")
        assert Config().seed == 9

    def test_missing_config_dir_is_not_created(self, tmp_path, monkeypatch):
        new_dir = tmp_path / "nonexistent"
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("PROJCERT_DIR", str(new_dir))
        assert Config().seed == 0
        assert not new_dir.exists()

    def test_invalid_env_file_value_is_reported(self, tmp_path, monkeypatch):
        (tmp_path / ".env").write_text("PROJCERT_SAMPLES=-3\n")
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("PROJCERT_DIR", str(tmp_path))
        with pytest.raises(ValueError, match="PROJCERT_SAMPLES must be >= 1"):
            Config()
