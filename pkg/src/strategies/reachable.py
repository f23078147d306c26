"""Strategies restricted to the histories they can actually reach."""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, Tuple

from ..config import get_settings
from ..exceptions import LimitExceededError
from ..model import ICGS, History
from ..observability import get_metrics_collector
from .csp import UniformCSP
from .partial import PartialStrategy, StrategySpace


@dataclass(frozen=True)
class ReachableStrategy:
    """
    One strategy behaviour from a start set: a choice per level over the
    histories reached so far, and the histories reached after the last level.
    """

    levels: Tuple[Tuple[StrategySpace, Tuple[str, ...]], ...]
    reached: Tuple[History, ...]

    @property
    def strategy(self) -> PartialStrategy:
        choices = []
        coalition = ()
        for space, values in self.levels:
            coalition = space.coalition
            choices.extend(space.strategy(values).choices)
        return PartialStrategy(coalition, tuple(sorted(choices)))

    def to_dict(self) -> Dict:
        return {
            "levels": [
                [
                    {"agent": var.agent, "class": str(var.representative), "action": value}
                    for var, value in zip(space.variables, values)
                ]
                for space, values in self.levels
            ],
            "reached": [str(h) for h in self.reached],
        }


def _step(space: StrategySpace, values: Tuple[str, ...]) -> Tuple[History, ...]:
    return tuple(sorted({child for h in space.histories for child in space.successors(values, h)}))


def enumerate_reachable(
    model: ICGS,
    coalition: Iterable[str],
    starts: Iterable[History],
    horizon: int,
) -> Iterator[ReachableStrategy]:
    """
    Enumerate uniform strategies level by level from ``starts``.

    At each level the coalition picks one action per (agent, observation
    class) of the histories reached so far; histories the strategy never
    reaches are left to the default completion. Emits one entry per
    distinct behaviour over ``horizon`` steps.
    """
    coalition = model.coalition(coalition)
    cap = get_settings().max_strategies
    emitted = 0

    def expand(level: int, frontier: Tuple[History, ...], chosen: Tuple) -> Iterator[ReachableStrategy]:
        nonlocal emitted
        if level == horizon or not frontier:
            emitted += 1
            if emitted > cap:
                raise LimitExceededError(f"coalition quantification exceeds ICGS_MAX_STRATEGIES={cap}")
            yield ReachableStrategy(chosen, frontier)
            return
        space = StrategySpace(model, coalition, frontier)
        for values in space.assignments():
            yield from expand(level + 1, _step(space, values), chosen + ((space, values),))

    try:
        yield from expand(0, tuple(sorted(set(starts))), ())
    finally:
        get_metrics_collector().increment("strategies.enumerated", emitted)


def _avoiding_profiles(model: ICGS, space: StrategySpace, bad: FrozenSet[str]) -> Dict[History, FrozenSet[Tuple[str, ...]]]:
    allowed = {}
    for h in space.histories:
        spoiled = set()
        every = set()
        for joint, target in model.moves(h.last):
            profile = model.project(space.coalition, joint)
            every.add(profile)
            if target in bad:
                spoiled.add(profile)
        allowed[h] = frozenset(every - spoiled)
    return allowed


def safe_strategies(
    model: ICGS,
    coalition: Iterable[str],
    starts: Iterable[History],
    depth: int,
    avoid: str = "err",
) -> Iterator[ReachableStrategy]:
    """
    Uniform strategies keeping every outcome of ``depth`` steps away from
    states labelled ``avoid``.

    Each level is a constraint search: a history allows exactly the
    profiles none of whose successors is bad. Solutions are emitted per
    level combination, so their number is the number of avoiding
    strategies on the reachable histories.
    """
    coalition = model.coalition(coalition)
    bad = frozenset(s for s in model.states if avoid in model.label(s))
    starts = tuple(sorted(set(starts)))
    if any(h.last in bad for h in starts):
        return

    def expand(level: int, frontier: Tuple[History, ...], chosen: Tuple) -> Iterator[ReachableStrategy]:
        if level == depth:
            yield ReachableStrategy(chosen, frontier)
            return
        space = StrategySpace(model, coalition, frontier)
        allowed = _avoiding_profiles(model, space, bad)
        csp = UniformCSP(
            space.domains,
            [(space.history_vars[h], allowed[h]) for h in space.histories],
            lexicographic=False,
        )
        for values in sorted(csp.solutions()):
            yield from expand(level + 1, _step(space, values), chosen + ((space, values),))

    get_metrics_collector().increment("safety.searches")
    yield from expand(0, starts, ())


def count_safe_strategies(model: ICGS, coalition: Iterable[str], starts: Iterable[History], depth: int, avoid: str = "err") -> int:
    return sum(1 for _ in safe_strategies(model, coalition, starts, depth, avoid))
