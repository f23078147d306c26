"""Execution tracing for the verification engines."""

import functools
import time
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional


@dataclass
class TraceSpan:
    """One engine phase: an unfolding, a refinement round, a solve."""
    name: str
    started: float
    metadata: Dict[str, Any] = field(default_factory=dict)
    finished: Optional[float] = None
    error: Optional[str] = None
    children: List["TraceSpan"] = field(default_factory=list)

    @property
    def duration(self) -> Optional[float]:
        return None if self.finished is None else self.finished - self.started

    def walk(self) -> Iterator["TraceSpan"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def to_dict(self) -> Dict[str, Any]:
        out = {"name": self.name, "duration": self.duration, "metadata": self.metadata}
        if self.error:
            out["error"] = self.error
        out["children"] = [c.to_dict() for c in self.children]
        return out


class Tracer:
    """
    Records nested spans. A span left by an exception keeps the
    exception's class name, so a report shows which phase hit a cap.
    """

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.spans: List[TraceSpan] = []
        self._open: List[TraceSpan] = []

    @contextmanager
    def span(self, name: str, metadata: Optional[Dict[str, Any]] = None):
        if not self.enabled:
            yield None
            return
        current = TraceSpan(name, time.perf_counter(), dict(metadata or {}))
        (self._open[-1].children if self._open else self.spans).append(current)
        self._open.append(current)
        try:
            yield current
        except BaseException as e:
            current.error = type(e).__name__
            raise
        finally:
            current.finished = time.perf_counter()
            self._open.pop()

    def get_trace_summary(self) -> Dict[str, Any]:
        """Root spans as trees, plus count and total time per span name."""
        if not self.enabled:
            return {}
        by_name: Dict[str, Dict[str, float]] = defaultdict(lambda: {"count": 0, "total": 0.0})
        for root in self.spans:
            for s in root.walk():
                by_name[s.name]["count"] += 1
                by_name[s.name]["total"] += s.duration or 0.0
        return {
            "spans": [s.to_dict() for s in self.spans],
            "total_spans": len(self.spans),
            "by_name": dict(by_name),
        }

    def clear(self):
        self.spans.clear()
        self._open.clear()


_global_tracer = Tracer()


def trace_execution(name: str, metadata: Optional[Dict[str, Any]] = None):
    """Run the decorated function inside a span of the global tracer."""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            with _global_tracer.span(name, metadata):
                return func(*args, **kwargs)
        return wrapper
    return decorator


def get_tracer() -> Tracer:
    return _global_tracer
