"""Strategy simulators: answering a challenge strategy on one CKN with a
strategy on the partner CKN."""

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ..config import get_settings
from ..exceptions import LimitExceededError
from ..model import History
from ..observability import get_metrics_collector
from ..strategies import PartialStrategy, StrategySpace, UniformCSP
from .context import SideContext

Profile = Tuple[str, ...]
Values = Tuple[str, ...]
MatchSets = Dict[History, Dict[History, Dict[Profile, FrozenSet[Profile]]]]


def match_sets(
    left: SideContext,
    right: SideContext,
    k: History,
    k2: History,
    ok: Callable[[History, History], bool],
) -> Tuple[Dict[Profile, FrozenSet[Profile]], Dict[Profile, FrozenSet[Profile]]]:
    """
    For a pair (k, k2): which right profiles answer each left profile, and
    which left profiles answer each right profile.

    A right profile b answers a when every successor of k2 under b has an
    ``ok`` partner among the successors of k under a; the converse swaps
    the roles.
    """
    left_children = left.children(k)
    right_children = right.children(k2)
    forward = {a: set() for a in left_children}
    converse = {b: set() for b in right_children}
    for a, ls in left_children.items():
        for b, rs in right_children.items():
            if all(any(ok(l, r) for l in ls) for r in rs):
                forward[a].add(b)
            if all(any(ok(l, r) for r in rs) for l in ls):
                converse[b].add(a)
    return (
        {a: frozenset(bs) for a, bs in forward.items()},
        {b: frozenset(as_) for b, as_ in converse.items()},
    )


class ChallengeProblem:
    """
    One direction of the strategy-transfer condition on a CKN product.

    ``match[k][k2][a]`` lists the responder profiles at k2 that answer the
    challenger profile a at k. With ``combine="all"`` a responder history
    must answer every partner (pairs are checked jointly); with
    ``combine="any"`` one partner suffices and each history in ``required``
    needs at least one.
    """

    def __init__(
        self,
        challenger: StrategySpace,
        responder: StrategySpace,
        match: MatchSets,
        combine: str = "all",
        required: Iterable[History] = (),
    ):
        if combine not in ("all", "any"):
            raise ValueError(f"unknown combine mode {combine!r}")
        self.challenger = challenger
        self.responder = responder
        self.match = match
        self.combine = combine
        self.required = frozenset(required)
        self.partners: Dict[History, List[History]] = {}
        for k in challenger.histories:
            for k2 in sorted(match.get(k, {})):
                self.partners.setdefault(k2, []).append(k)
        self._responses: Dict[Tuple, Optional[Values]] = {}

    def relevant(self) -> Tuple[int, ...]:
        """Challenger variables whose value can change the responder's obligations."""
        variables = set()
        for k in self.challenger.histories:
            partners = self.match.get(k)
            if not partners:
                continue
            columns = sorted(partners)
            signatures = {
                tuple(partners[k2][a] for k2 in columns)
                for a in partners[columns[0]]
            }
            if len(signatures) > 1:
                variables.update(self.challenger.history_vars[k])
        return tuple(sorted(variables))

    def bounds(self, values: Sequence[str]) -> Tuple[Optional[FrozenSet[Profile]], ...]:
        result = []
        for k2 in self.responder.histories:
            partners = self.partners.get(k2, [])
            if not partners:
                result.append(frozenset() if k2 in self.required and self.combine == "any" else None)
                continue
            sets = [self.match[k][k2][self.challenger.profile(values, k)] for k in partners]
            if self.combine == "all":
                allowed = frozenset.intersection(*sets)
            else:
                allowed = frozenset().union(*sets)
            result.append(allowed)
        return tuple(result)

    def response(self, values: Sequence[str]) -> Optional[Values]:
        """The least responder assignment meeting the obligations of ``values``, or None."""
        key = self.bounds(values)
        if key not in self._responses:
            constraints = [
                (self.responder.history_vars[k2], allowed)
                for k2, allowed in zip(self.responder.histories, key)
                if allowed is not None
            ]
            self._responses[key] = UniformCSP(self.responder.domains, constraints, lexicographic=True).first()
        return self._responses[key]

    def challenges(self, relevant: Tuple[int, ...]) -> Iterable[Values]:
        """Challenger assignments over ``relevant``, others fixed to their least action."""
        base = list(self.challenger.default())
        domains = [self.challenger.variables[v].actions for v in relevant]
        count = 1
        for d in domains:
            count *= len(d)
        cap = get_settings().max_strategies
        if count > cap:
            raise LimitExceededError(f"{count} challenge strategies exceed ICGS_MAX_STRATEGIES={cap}")
        get_metrics_collector().increment("strategies.enumerated", count)
        for picked in product(*domains):
            for v, value in zip(relevant, picked):
                base[v] = value
            yield tuple(base)

    def sweep(self, stop_at_failure: bool = True) -> Tuple[Dict[Values, Values], Optional[Values], Tuple[int, ...]]:
        """
        Answer every relevant challenge. Returns the table keyed by the
        projection onto the relevant variables, the first unanswerable
        challenge (or None) and the relevant variables.
        """
        relevant = self.relevant()
        entries: Dict[Values, Values] = {}
        failure = None
        for values in self.challenges(relevant):
            answer = self.response(values)
            if answer is None:
                if failure is None:
                    failure = values
                if stop_at_failure:
                    break
                continue
            entries[tuple(values[v] for v in relevant)] = answer
        return entries, failure, relevant


@dataclass
class SimulatorTable:
    """
    A strategy simulator for one CKN product and one direction: maps each
    challenger strategy (read on its relevant variables) to a responder
    strategy.
    """

    direction: str
    length: int
    challenger: StrategySpace = field(repr=False)
    responder: StrategySpace = field(repr=False)
    relevant: Tuple[int, ...]
    entries: Dict[Values, Values]

    @property
    def key(self) -> Tuple[str, int, History, History]:
        return (self.direction, self.length, self.challenger.histories[0], self.responder.histories[0])

    def project(self, values: Sequence[str]) -> Values:
        return tuple(values[v] for v in self.relevant)

    def respond(self, values: Sequence[str]) -> Values:
        return self.entries[self.project(values)]

    def respond_strategy(self, strategy: PartialStrategy) -> PartialStrategy:
        values = self.challenger.values_of(strategy)
        return self.responder.strategy(self.respond(values))

    def to_dict(self) -> Dict:
        variables = [self.challenger.variables[v] for v in self.relevant]
        return {
            "direction": self.direction,
            "length": self.length,
            "challenger": str(self.challenger.histories[0]),
            "responder": str(self.responder.histories[0]),
            "variables": [{"agent": v.agent, "class": str(v.representative)} for v in variables],
            "entries": [
                {"challenge": list(key), "response": list(value)}
                for key, value in sorted(self.entries.items())
            ],
        }


def audit_simulator(tables: Iterable[SimulatorTable]) -> List[str]:
    """
    Problems with a set of simulator tables: two tables for one CKN product
    and direction, missing challenges, or responses outside the responder's
    uniform strategies.
    """
    problems = []
    seen = set()
    for table in tables:
        if table.key in seen:
            problems.append(f"duplicate {table.direction} table for {table.key[2]} / {table.key[3]}")
        seen.add(table.key)
        domains = [table.challenger.variables[v].actions for v in table.relevant]
        expected = set(product(*domains))
        keys = set(table.entries)
        if keys != expected:
            missing = len(expected - keys)
            extra = len(keys - expected)
            problems.append(
                f"{table.direction} table at {table.key[2]} is not total ({missing} missing, {extra} unexpected)"
            )
        for key, response in table.entries.items():
            variables = table.responder.variables
            if len(response) != len(variables) or any(
                value not in var.actions for value, var in zip(response, variables)
            ):
                problems.append(f"{table.direction} table at {table.key[2]} answers {key} with {response}")
    return problems


def simulator_from_map(
    challenger: StrategySpace,
    responder: StrategySpace,
    preimage: Callable[[History], Optional[History]],
    translate: Callable[[History, Profile], Profile],
    direction: str = "forward",
) -> SimulatorTable:
    """
    Build a table from an explicit history correspondence: the response at
    a responder history copies the challenger's choice at its preimage,
    translated by ``translate(preimage, profile)``. Every challenger
    variable is treated as relevant.
    """
    relevant = tuple(range(len(challenger.variables)))
    coalition = responder.coalition
    entries: Dict[Values, Values] = {}
    for values in challenger.assignments():
        response = []
        for var in responder.variables:
            source = None
            for k2 in var.members:
                source = preimage(k2)
                if source is not None:
                    break
            if source is None:
                response.append(var.actions[0])
                continue
            profile = translate(source, challenger.profile(values, source))
            response.append(profile[coalition.index(var.agent)])
        entries[tuple(values)] = tuple(response)
    return SimulatorTable(direction, len(challenger.histories[0]), challenger, responder, relevant, entries)
