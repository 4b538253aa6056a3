import logging

from config import DEFAULT_ATOL, Settings, parallel_map


class TestSettings:
    def test_reads_environment(self, monkeypatch):
        monkeypatch.setenv("DELOC_ATOL", "1e-6")
        monkeypatch.setenv("DELOC_THREADS", "3")
        settings = Settings.from_env()
        assert settings.atol == 1e-6
        assert settings.threads == 3

    def test_bad_value_falls_back_with_warning(self, monkeypatch, caplog):
        monkeypatch.setenv("DELOC_ATOL", "tiny")
        with caplog.at_level(logging.WARNING, logger="config"):
            settings = Settings.from_env()
        assert settings.atol == DEFAULT_ATOL
        assert "Ignoring DELOC_ATOL='tiny' (not a number)" in caplog.messages

    def test_with_tolerance(self):
        settings = Settings().with_tolerance(1e-4)
        assert (settings.atol, settings.rtol) == (1e-4, 1e-4)
        assert Settings().with_tolerance(None) == Settings()


def test_parallel_map_keeps_order():
    assert parallel_map(lambda x: x * x, range(10), threads=4) == [x * x for x in range(10)]
