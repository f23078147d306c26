"""Histories, bounded paths and unfoldings."""

from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Sequence, Tuple

from ..config import get_settings
from ..exceptions import LimitExceededError
from ..observability import get_metrics_collector, get_tracer
from .icgs import ICGS, JointAction


@dataclass(frozen=True, order=True)
class History:
    """A finite run: states interleaved with the joint actions between them."""

    states: Tuple[str, ...]
    actions: Tuple[JointAction, ...] = ()

    def __post_init__(self):
        if not self.states:
            raise ValueError("a history needs at least one state")
        if len(self.actions) != len(self.states) - 1:
            raise ValueError("a history has one joint action fewer than states")

    def __len__(self) -> int:
        return len(self.states)

    @property
    def last(self) -> str:
        return self.states[-1]

    def extend(self, joint: JointAction, state: str) -> "History":
        return History(self.states + (state,), self.actions + (tuple(joint),))

    def prefix(self, length: int) -> "History":
        """The prefix with ``length`` states."""
        if not 1 <= length <= len(self.states):
            raise IndexError(f"prefix length {length} outside 1..{len(self.states)}")
        return History(self.states[:length], self.actions[:length - 1])

    def act(self, position: int, m: int) -> str:
        """Action of the agent at ``position`` between states m and m+1."""
        return self.actions[m][position]

    def to_text(self, agents: Sequence[str]) -> str:
        """Render in the CLI syntax ``s0 a1:x,a2:y s1 ...``."""
        parts = [self.states[0]]
        for joint, state in zip(self.actions, self.states[1:]):
            parts.append(",".join(f"{a}:{x}" for a, x in zip(agents, joint)))
            parts.append(state)
        return " ".join(parts)

    def __str__(self) -> str:
        parts = [self.states[0]]
        for joint, state in zip(self.actions, self.states[1:]):
            parts.append("(" + ",".join(joint) + ")")
            parts.append(state)
        return "·".join(parts)


@dataclass(frozen=True)
class BoundedPath:
    """A history standing for a path cut at the unfolding bound."""

    history: History
    truncated: bool = True

    def __len__(self) -> int:
        return len(self.history)


def is_history(model: ICGS, h: History) -> bool:
    """Replay ``h`` against the transition relation."""
    if h.states[0] not in model.initial:
        return False
    for source, joint, target in zip(h.states, h.actions, h.states[1:]):
        if not model.is_enabled(source, joint):
            return False
        if target not in model.successors(source, joint):
            return False
    return True


def children(model: ICGS, h: History) -> List[History]:
    """All one-step extensions of ``h`` in canonical order."""
    return [h.extend(joint, target) for joint, target in model.moves(h.last)]


@lru_cache(maxsize=16)
def strata(model: ICGS, depth: int) -> Tuple[Tuple[History, ...], ...]:
    """
    Histories of the unfolding grouped by length.

    Entry n holds the sorted histories with n+1 states, for n = 0..depth.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    cap = get_settings().max_histories
    with get_tracer().span("unfold", {"model": model.name, "depth": depth}):
        layer = [History((s,)) for s in sorted(model.initial)]
        layers = [tuple(layer)]
        total = len(layer)
        for _ in range(depth):
            layer = sorted(child for h in layer for child in children(model, h))
            total += len(layer)
            if total > cap:
                raise LimitExceededError(
                    f"unfolding {model.name} to depth {depth} exceeds ICGS_MAX_HISTORIES={cap}"
                )
            layers.append(tuple(layer))
        get_metrics_collector().increment("histories.unfolded", total)
    return tuple(layers)


def stratum(model: ICGS, length: int) -> Tuple[History, ...]:
    """All histories with ``length`` states."""
    return strata(model, length - 1)[length - 1]


def unfold(model: ICGS, depth: int) -> FrozenSet[History]:
    """All histories of length at most depth+1, closed under prefixes."""
    return frozenset(h for layer in strata(model, depth) for h in layer)

