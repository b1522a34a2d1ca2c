"""Tests for run configuration loading."""

import pytest

from engine.config_loader import ConfigLoader, RunConfig, parse_key_values
from engine.errors import ConfigError


@pytest.fixture
def loader():
    return ConfigLoader()


class TestShippedConfigs:
    def test_defaults_without_file(self, loader):
        assert loader.load() == RunConfig()

    def test_discovery(self, loader):
        assert {"default", "quick"} <= set(loader.discover_configs())

    def test_default_yaml_matches_dataclass(self, loader):
        assert loader.load("default") == RunConfig()

    def test_quick_key_values(self, loader):
        cfg = loader.load("quick")
        assert cfg.samples == 128
        assert cfg.word_length == 4
        assert cfg.seed == 42

    def test_missing(self, loader):
        with pytest.raises(FileNotFoundError):
            loader.load("no-such-config")


class TestParsing:
    def test_yaml_file(self, loader, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("samples: 64\nprojection: [0, 0, 1]\n")
        cfg = loader.load(str(path))
        assert cfg.samples == 64
        assert cfg.projection == (0.0, 0.0, 1.0)

    def test_key_value_file(self, loader, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("# fine differences\ntol-fd = 1e-6\nworkers=3\n")
        cfg = loader.load(str(path))
        assert cfg.tol_fd == pytest.approx(1e-6)
        assert cfg.workers == 3

    def test_empty_file(self, loader, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert loader.load(str(path)) == RunConfig()

    def test_missing_equals(self):
        with pytest.raises(ConfigError):
            parse_key_values("samples 12")

    def test_comments_and_blanks(self):
        assert parse_key_values("\n# note\nseed = 7  # inline\n") == {"seed": "7"}

    @pytest.mark.parametrize("text", [
        "colour: red\n",
        "samples: many\n",
        "samples: 0\n",
        "seed: -1\n",
        "projection: [1, 0]\n",
    ])
    def test_rejected(self, loader, tmp_path, text):
        path = tmp_path / "bad.yaml"
        path.write_text(text)
        with pytest.raises(ConfigError):
            loader.load(str(path))


class TestMerging:
    def test_none_is_ignored(self):
        cfg = RunConfig().merged({"seed": None, "samples": 32})
        assert cfg.seed == 42
        assert cfg.samples == 32

    def test_projection_string(self):
        assert RunConfig().merged({"projection": "(1, 0, 0)"}).projection == (1.0, 0.0, 0.0)

    def test_to_dict_lists_projection(self):
        data = RunConfig().to_dict()
        assert data["projection"] == [1.0, 0.4, 0.25]
        assert data["out_dir"] == "out"
