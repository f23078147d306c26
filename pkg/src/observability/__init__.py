"""Logging to stderr, nested engine spans and workload metrics."""

from .logger import get_logger, setup_logger
from .metrics import MetricsCollector, get_metrics_collector
from .tracer import Tracer, TraceSpan, get_tracer, trace_execution

__all__ = [
    "MetricsCollector",
    "TraceSpan",
    "Tracer",
    "get_logger",
    "get_metrics_collector",
    "get_tracer",
    "setup_logger",
    "trace_execution",
]
