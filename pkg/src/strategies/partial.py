"""Uniform partial strategies over sets of histories."""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..config import get_settings
from ..epistemics import ckn_of, indist_classes, observation_key, subjective_starts
from ..exceptions import LimitExceededError, StrategyDomainError
from ..model import ICGS, BoundedPath, Coalition, History, strata
from ..observability import get_metrics_collector

Profile = Tuple[str, ...]
SEMANTICS = ("obj", "subj", "ck")


@dataclass(frozen=True)
class StrategyVariable:
    """One decision: the action of ``agent`` on an observation class."""

    agent: str
    members: Tuple[History, ...]
    actions: Tuple[str, ...]

    @property
    def representative(self) -> History:
        return self.members[0]


@dataclass(frozen=True)
class PartialStrategy:
    """A coalition's action profile on every history of its domain."""

    coalition: Coalition
    choices: Tuple[Tuple[History, Profile], ...]

    @cached_property
    def _table(self) -> Dict[History, Profile]:
        return dict(self.choices)

    @cached_property
    def domain(self) -> FrozenSet[History]:
        return frozenset(self._table)

    def profile(self, h: History) -> Profile:
        try:
            return self._table[h]
        except KeyError:
            raise StrategyDomainError(f"history {h} is outside the strategy domain") from None

    def action(self, agent: str, h: History) -> str:
        return self.profile(h)[self.coalition.index(agent)]

    @property
    def assignment(self) -> Dict[str, Dict[History, str]]:
        return {
            agent: {h: profile[n] for h, profile in self.choices}
            for n, agent in enumerate(self.coalition)
        }

    def merged(self, other: "PartialStrategy") -> "PartialStrategy":
        table = dict(self.choices)
        table.update(other.choices)
        return PartialStrategy(self.coalition, tuple(sorted(table.items())))

    def to_dict(self) -> Dict:
        return {
            "coalition": list(self.coalition),
            "choices": [
                {"history": str(h), "profile": list(profile)} for h, profile in self.choices
            ],
        }


@dataclass(frozen=True)
class BoundedStrategy(PartialStrategy):
    """A strategy defined on the whole unfolding up to ``depth``."""

    depth: int = 0


class StrategySpace:
    """
    The uniform strategies of a coalition on a set of equal-length
    histories, one variable per (agent, observation class).

    Variables are ordered agent by agent, and within an agent by the
    least history of the class; actions are tried in sorted order.
    """

    def __init__(self, model: ICGS, coalition: Iterable[str], histories: Iterable[History]):
        self.model = model
        self.coalition = model.coalition(coalition)
        self.histories: Tuple[History, ...] = tuple(sorted(set(histories)))
        if len({len(h) for h in self.histories}) > 1:
            raise ValueError("strategy domains must be length-homogeneous")
        self.variables: List[StrategyVariable] = []
        var_of: Dict[Tuple[str, History], int] = {}
        for agent in self.coalition:
            for members in indist_classes(model, agent, self.histories):
                allowed = None
                for h in members:
                    enabled = set(model.enabled(agent, h.last))
                    allowed = enabled if allowed is None else allowed & enabled
                for h in members:
                    var_of[(agent, h)] = len(self.variables)
                self.variables.append(StrategyVariable(agent, tuple(members), tuple(sorted(allowed or ()))))
        self.history_vars: Dict[History, Tuple[int, ...]] = {
            h: tuple(var_of[(agent, h)] for agent in self.coalition) for h in self.histories
        }

    @property
    def domains(self) -> List[Tuple[str, ...]]:
        return [v.actions for v in self.variables]

    @property
    def count(self) -> int:
        total = 1
        for v in self.variables:
            total *= len(v.actions)
        return total

    def assignments(self) -> Iterator[Tuple[str, ...]]:
        """Every assignment of actions to variables, in enumeration order."""
        return product(*self.domains)

    def default(self) -> Tuple[str, ...]:
        return tuple(v.actions[0] for v in self.variables)

    def profile(self, values: Sequence[str], h: History) -> Profile:
        return tuple(values[n] for n in self.history_vars[h])

    def successors(self, values: Sequence[str], h: History) -> List[History]:
        wanted = self.profile(values, h)
        return [
            h.extend(joint, target)
            for joint, target in self.model.moves(h.last)
            if self.model.project(self.coalition, joint) == wanted
        ]

    def strategy(self, values: Sequence[str]) -> PartialStrategy:
        return PartialStrategy(
            self.coalition,
            tuple((h, self.profile(values, h)) for h in self.histories),
        )

    def values_of(self, strategy: PartialStrategy) -> Tuple[str, ...]:
        """Read a uniform strategy back as variable values."""
        values = []
        for var in self.variables:
            values.append(strategy.action(var.agent, var.representative))
        return tuple(values)


def enumerate_partial(model: ICGS, coalition: Iterable[str], histories: Iterable[History]) -> Iterator[PartialStrategy]:
    """Every uniform partial strategy on ``histories``, each once, in a fixed order."""
    space = StrategySpace(model, coalition, histories)
    cap = get_settings().max_strategies
    if space.count > cap:
        raise LimitExceededError(f"{space.count} strategies exceed ICGS_MAX_STRATEGIES={cap}")
    get_metrics_collector().increment("strategies.enumerated", space.count)
    for values in space.assignments():
        yield space.strategy(values)


def succ_by(model: ICGS, h: History, strategy: PartialStrategy) -> FrozenSet[History]:
    """One-step extensions of ``h`` whose coalition actions follow ``strategy``."""
    wanted = strategy.profile(h)
    return frozenset(
        h.extend(joint, target)
        for joint, target in model.moves(h.last)
        if model.project(strategy.coalition, joint) == wanted
    )


def audit_uniformity(model: ICGS, strategy: PartialStrategy) -> List[str]:
    """Problems with a strategy: disabled actions or non-uniform choices."""
    problems = []
    histories = sorted(strategy.domain)
    for n, agent in enumerate(strategy.coalition):
        seen: Dict[Tuple, Tuple[str, History]] = {}
        for h in histories:
            action = strategy.profile(h)[n]
            if action not in model.enabled(agent, h.last):
                problems.append(f"agent {agent} plays disabled {action} at {h}")
            key = (len(h), observation_key(model, agent, h))
            if key in seen and seen[key][0] != action:
                problems.append(f"agent {agent} separates {seen[key][1]} and {h}")
            seen.setdefault(key, (action, h))
    return problems


def bounded_strategy(
    model: ICGS,
    coalition: Iterable[str],
    depth: int,
    rule: Optional[Callable[[str, History], Optional[str]]] = None,
) -> BoundedStrategy:
    """
    A uniform strategy on the unfolding to ``depth``.

    ``rule(agent, h)`` is asked once per observation class with the least
    history of the class; returning None (or no rule) picks the
    lexicographically least enabled action.
    """
    coalition = model.coalition(coalition)
    choices: List[Tuple[History, Profile]] = []
    for layer in strata(model, depth):
        space = StrategySpace(model, coalition, layer)
        values = []
        for var in space.variables:
            picked = rule(var.agent, var.representative) if rule else None
            values.append(picked if picked in var.actions else var.actions[0])
        choices.extend(space.strategy(values).choices)
    return BoundedStrategy(coalition, tuple(sorted(choices)), depth=depth)


def start_set(model: ICGS, coalition: Iterable[str], h: History, semantics: str) -> List[History]:
    """Histories outcomes start from under obj, subj or ck semantics."""
    if semantics == "obj":
        return [h]
    if semantics == "subj":
        return subjective_starts(model, coalition, h)
    if semantics == "ck":
        return sorted(ckn_of(model, coalition, h).members)
    raise ValueError(f"unknown semantics {semantics!r}; expected one of {SEMANTICS}")


def outcomes(
    model: ICGS,
    h: History,
    strategy: PartialStrategy,
    semantics: str,
    depth: int,
) -> FrozenSet[BoundedPath]:
    """Paths of ``depth`` further steps consistent with ``strategy``."""
    frontier = start_set(model, strategy.coalition, h, semantics)
    for _ in range(depth):
        nxt = []
        for k in frontier:
            if k not in strategy.domain:
                raise StrategyDomainError(f"insufficient strategy domain at {k}")
            nxt.extend(succ_by(model, k, strategy))
        frontier = nxt
    return frozenset(BoundedPath(k, truncated=True) for k in frontier)
