"""Tests for environment-driven settings."""

import pytest
from pydantic import ValidationError

from ym2d.config import Settings, get_settings
from ym2d.core import InvalidParameterError, graph_expectation_mc


class TestSettings:
    """YM2D_* environment overrides."""

    def test_defaults(self):
        settings = get_settings()
        assert settings.SCHEMA == "ym2d/1"
        assert settings.MC_MIN_SAMPLES == 10_000
        assert settings.DEFAULT_SEED == 20240917

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("YM2D_QUAD_BUDGET", "262144")
        get_settings.cache_clear()
        assert get_settings().QUAD_BUDGET == 262144

    def test_validation(self, monkeypatch):
        monkeypatch.setenv("YM2D_MC_WORKERS", "0")
        with pytest.raises(ValidationError):
            Settings()

    def test_override_reaches_engines(self, monkeypatch, su2, sphere_map):
        """Raising the sample floor makes a previously valid run invalid."""
        monkeypatch.setenv("YM2D_MC_MIN_SAMPLES", "50000")
        get_settings.cache_clear()
        with pytest.raises(InvalidParameterError):
            graph_expectation_mc(su2, sphere_map, 1.0, samples=20_000)
