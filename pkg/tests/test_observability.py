"""Tests for settings, logging, tracing and metrics."""

import logging

import pytest

from src.config import Settings, get_settings, reload_settings
from src.exceptions import ModelFormatError
from src.model import validate
from src.observability import MetricsCollector, Tracer, get_tracer, setup_logger
from src.reductions import coordination


@pytest.fixture
def fresh_settings(monkeypatch):
    yield monkeypatch
    for name in ("ICGS_LOG_LEVEL", "ICGS_MAX_HISTORIES"):
        monkeypatch.delenv(name, raising=False)
    reload_settings()


def test_settings_defaults(fresh_settings):
    settings = reload_settings()
    assert settings.max_strategies == 1_000_000
    assert settings.log_level == "WARNING"


def test_settings_from_environment(fresh_settings):
    fresh_settings.setenv("ICGS_LOG_LEVEL", "debug")
    fresh_settings.setenv("ICGS_MAX_HISTORIES", "50")
    settings = reload_settings()
    assert settings.log_level == "DEBUG"
    assert get_settings().max_histories == 50


def test_bad_settings_are_input_errors(fresh_settings):
    fresh_settings.setenv("ICGS_MAX_HISTORIES", "-1")
    with pytest.raises(ModelFormatError):
        reload_settings()
    with pytest.raises(ValueError):
        Settings(log_level="loud")


def test_logger_writes_to_stderr():
    logger = setup_logger("icgs.test", log_level="INFO")
    assert logger.level == logging.INFO
    assert isinstance(logger.handlers[0], logging.StreamHandler)
    assert logger.propagate is False


def test_nested_spans():
    tracer = Tracer()
    with tracer.span("outer", {"depth": 2}):
        with tracer.span("inner"):
            pass
    summary = tracer.get_trace_summary()
    assert summary["total_spans"] == 1
    assert summary["spans"][0]["children"][0]["name"] == "inner"
    assert summary["spans"][0]["duration"] >= 0


def test_validation_is_traced():
    tracer = get_tracer()
    tracer.clear()
    validate(coordination())
    assert [s.name for s in tracer.spans] == ["model.validate"]


def test_metrics_summary():
    metrics = MetricsCollector()
    metrics.increment("histories.unfolded", 3)
    metrics.gauge("reduction.states", 23)
    with metrics.timed("solve"):
        pass
    summary = metrics.get_summary()
    assert summary["counters"] == {"histories.unfolded": 3}
    assert summary["gauges"] == {"reduction.states": 23}
    assert summary["timers"]["solve"]["count"] == 1
    assert MetricsCollector(enabled=False).get_summary() == {}


def test_failed_span_keeps_the_error():
    tracer = Tracer()
    with pytest.raises(ModelFormatError):
        with tracer.span("load"):
            raise ModelFormatError("bad file")
    summary = tracer.get_trace_summary()
    assert summary["spans"][0]["error"] == "ModelFormatError"
    assert summary["by_name"]["load"]["count"] == 1
