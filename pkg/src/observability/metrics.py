"""Counters, gauges and timers for engine workloads."""

import time
from collections import Counter, defaultdict
from contextlib import contextmanager
from typing import Dict, List


class MetricsCollector:
    """
    Workload figures for one process: histories unfolded, strategies
    enumerated, refinement rounds, game positions, command timings.

    A disabled collector records nothing and summarises to ``{}``.
    """

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.counters: Counter = Counter()
        self.gauges: Dict[str, float] = {}
        self.timers: Dict[str, List[float]] = defaultdict(list)

    def increment(self, name: str, value: int = 1):
        if self.enabled:
            self.counters[name] += value

    def gauge(self, name: str, value: float):
        """Keep the latest value of ``name``."""
        if self.enabled:
            self.gauges[name] = value

    def record_timing(self, name: str, seconds: float):
        if self.enabled:
            self.timers[name].append(seconds)

    @contextmanager
    def timed(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.record_timing(name, time.perf_counter() - start)

    def get_summary(self) -> Dict:
        if not self.enabled:
            return {}
        timers = {
            name: {
                "count": len(xs),
                "min": min(xs),
                "max": max(xs),
                "avg": sum(xs) / len(xs),
                "total": sum(xs),
            }
            for name, xs in self.timers.items()
            if xs
        }
        return {"counters": dict(self.counters), "gauges": dict(self.gauges), "timers": timers}

    def clear(self):
        self.counters.clear()
        self.gauges.clear()
        self.timers.clear()


_global_metrics = MetricsCollector()


def get_metrics_collector() -> MetricsCollector:
    """The process-wide collector the engines report to."""
    return _global_metrics
