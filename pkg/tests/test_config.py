import pytest

from lauricella.config import DEFAULT_DATABASE_URL, Settings, get_settings
from lauricella.errors import ConfigurationError


def test_defaults(monkeypatch):
    for name in ("LAURICELLA_MAX_CONDUCTOR", "LAURICELLA_CLOSURE_BOUND", "LAURICELLA_THREADS", "LAURICELLA_LOG_URL"):
        monkeypatch.delenv(name, raising=False)
    settings = get_settings()
    assert settings.max_conductor == 1024
    assert settings.max_denominator == 512
    assert settings.closure_bound == 100_000
    assert settings.threads == 1
    assert settings.log_url is None


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("LAURICELLA_MAX_CONDUCTOR", "96")
    monkeypatch.setenv("LAURICELLA_THREADS", " 4 ")
    monkeypatch.setenv("LAURICELLA_LOG_LEVEL", "debug")
    settings = get_settings()
    assert settings.max_conductor == 96
    assert settings.max_denominator == 48
    assert settings.threads == 4
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("value", ["abc", "0", "-3"])
def test_invalid_integers(monkeypatch, value):
    monkeypatch.setenv("LAURICELLA_CLOSURE_BOUND", value)
    with pytest.raises(ConfigurationError) as info:
        get_settings()
    assert "LAURICELLA_CLOSURE_BOUND" in str(info.value)


def test_blank_value_falls_back_to_default(monkeypatch):
    monkeypatch.setenv("LAURICELLA_THREADS", "")
    assert get_settings().threads == 1


def test_settings_default_database():
    assert Settings().database_url == DEFAULT_DATABASE_URL
