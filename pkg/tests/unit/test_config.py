"""
Unit tests for runtime settings.
"""

import pytest
from pydantic import ValidationError

from catsim.config import get_settings


class TestSettings:
    """Test cases for environment-driven settings."""

    def test_defaults(self):
        """Test the documented defaults."""
        settings = get_settings()
        assert settings.tail_tolerance == 1e-10
        assert settings.zero_probability == 1e-30
        assert settings.teleport_max_rounds == 10
        assert settings.log_level == "WARNING"

    def test_environment_override(self, monkeypatch):
        """Test CATSIM_* variables replace the defaults."""
        monkeypatch.setenv("CATSIM_TAIL_TOLERANCE", "1e-6")
        monkeypatch.setenv("CATSIM_LOG_LEVEL", "debug")
        get_settings.cache_clear()
        settings = get_settings()
        assert settings.tail_tolerance == 1e-6
        assert settings.log_level == "DEBUG"

    def test_cached(self):
        assert get_settings() is get_settings()

    def test_invalid_value(self, monkeypatch):
        """Test a non-positive tolerance is rejected."""
        monkeypatch.setenv("CATSIM_TAIL_TOLERANCE", "0")
        get_settings.cache_clear()
        with pytest.raises(ValidationError):
            get_settings()
