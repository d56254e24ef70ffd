import pytest

from latticekit import _settings


@pytest.fixture(autouse=True)
def default_guards(monkeypatch) -> None:
    for field in _settings._ENV_FIELDS:
        monkeypatch.delenv(_settings.env_name(field), raising=False)
    monkeypatch.setattr(_settings, "_current", None)
