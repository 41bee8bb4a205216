"""
Tests for settings, logging setup and the thread pool size
"""

import logging
from pathlib import Path

import pytest
from pydantic import ValidationError
from rich.logging import RichHandler

from walksearch.config import (
    DEFAULT_DENSE_LIMIT,
    Settings,
    configure_logging,
    current_settings,
    load_settings,
    resolve_dense_limit,
)
from walksearch.kernels import available_threads, set_threads


class TestSettings:

    def test_defaults(self):
        """Test settings with nothing configured"""
        settings = load_settings()
        assert settings.threads is None
        assert settings.output_dir == Path("results")
        assert settings.dense_limit == DEFAULT_DENSE_LIMIT
        assert settings.log_level == "INFO"

    def test_environment_overrides(self, monkeypatch):
        """Test WALKSEARCH_* variables"""
        monkeypatch.setenv("WALKSEARCH_THREADS", "2")
        monkeypatch.setenv("WALKSEARCH_OUTPUT_DIR", "runs")
        monkeypatch.setenv("WALKSEARCH_LOG_LEVEL", "debug")
        settings = load_settings()
        assert settings.threads == 2
        assert settings.output_dir == Path("runs")
        assert settings.log_level == "DEBUG"

    def test_env_file(self, isolated_env, monkeypatch):
        """Test loading from a .env file in the working directory"""
        (isolated_env / ".env").write_text("WALKSEARCH_DENSE_LIMIT=256\n")
        # load_dotenv writes into os.environ; let monkeypatch undo it
        monkeypatch.setenv("WALKSEARCH_DENSE_LIMIT", "")
        monkeypatch.delenv("WALKSEARCH_DENSE_LIMIT")
        assert load_settings().dense_limit == 256

    def test_dense_limit_cannot_be_raised(self):
        """Test that the dense cap only goes down"""
        with pytest.raises(ValidationError):
            Settings(dense_limit=DEFAULT_DENSE_LIMIT * 2)

    def test_rejects_unknown_log_level(self):
        """Test log level validation"""
        with pytest.raises(ValidationError):
            Settings(log_level="chatty")

    def test_rejects_zero_threads(self, monkeypatch):
        """Test that the thread count is positive"""
        monkeypatch.setenv("WALKSEARCH_THREADS", "0")
        with pytest.raises(ValidationError):
            load_settings()

    def test_resolve_dense_limit(self, monkeypatch):
        """Test that an explicit limit never exceeds the configured one"""
        monkeypatch.setenv("WALKSEARCH_DENSE_LIMIT", "50")
        assert resolve_dense_limit() == 50
        assert resolve_dense_limit(100) == 50
        assert resolve_dense_limit(20) == 20

    def test_settings_are_read_once_per_process(self, isolated_env, monkeypatch):
        """Test that repeated dense-limit lookups reuse the first settings"""
        calls = []
        monkeypatch.setattr("walksearch.config.load_dotenv", lambda *a, **kw: calls.append(a))
        (isolated_env / ".env").write_text("WALKSEARCH_LOG_LEVEL=DEBUG\n")
        for _ in range(5):
            assert resolve_dense_limit() == DEFAULT_DENSE_LIMIT
        assert len(calls) == 1

        monkeypatch.setenv("WALKSEARCH_DENSE_LIMIT", "50")
        assert resolve_dense_limit() == DEFAULT_DENSE_LIMIT
        current_settings.cache_clear()
        assert resolve_dense_limit() == 50
        assert current_settings() is current_settings()


class TestLogging:

    def test_rich_handler_installed(self):
        """Test that configure_logging routes through rich"""
        configure_logging("warning")
        root = logging.getLogger()
        assert root.level == logging.WARNING
        assert any(isinstance(h, RichHandler) for h in root.handlers)


class TestThreads:

    def test_set_threads_clamps(self):
        """Test that requests are clamped to the available threads"""
        limit = available_threads()
        try:
            assert set_threads(1) == 1
            assert set_threads(limit + 5) == limit
            assert set_threads(None) == limit
        finally:
            set_threads(None)

    def test_set_threads_warns_above_limit(self, caplog):
        """Test the warning for oversubscription"""
        try:
            with caplog.at_level(logging.WARNING, logger="walksearch.kernels"):
                set_threads(available_threads() + 1)
        finally:
            set_threads(None)
        assert "only" in caplog.text
