"""Bounded three-valued model checking of ATL with yesterday."""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ..exceptions import UnknownAgentError
from ..model import ICGS, BoundedPath, History, is_history
from ..observability import get_logger, get_metrics_collector, get_tracer
from ..strategies import SEMANTICS, enumerate_reachable, start_set
from .formula import (
    And,
    Atom,
    Coalition,
    Const,
    Embed,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Truth,
    Until,
    Yesterday,
    agents_of,
    is_history_formula,
    lookahead,
)

logger = get_logger(__name__)


@dataclass
class Verdict:
    """Outcome of a bounded check."""
    value: Truth
    bound: int
    semantics: str
    witness: Optional[Dict] = None

    def to_dict(self) -> Dict:
        return {
            "value": str(self.value),
            "bound": self.bound,
            "semantics": self.semantics,
            "witness": self.witness,
        }


class ModelChecker:
    """
    Evaluates formulas on one model under one semantics and bound.

    A coalition formula at h quantifies over uniform strategies on the
    histories reachable from its start set (h, the histories some member
    confuses with h, or the whole CKN of h), looking ahead as far as the
    path formula needs and never further than the bound. It is True when
    one strategy makes the body True on every outcome, False when every
    strategy has an outcome falsifying it, Unknown otherwise. Results of
    history formulas are memoised.
    """

    def __init__(self, model: ICGS, semantics: str = "obj", bound: int = 2):
        if semantics not in SEMANTICS:
            raise ValueError(f"unknown semantics {semantics!r}; expected one of {SEMANTICS}")
        if bound < 0:
            raise ValueError("bound must be non-negative")
        self.model = model
        self.semantics = semantics
        self.bound = bound
        self.memo: Dict[Tuple[History, Formula], Truth] = {}
        self.witnesses: Dict[Tuple[History, Formula], Dict] = {}
        self.metrics = get_metrics_collector()

    def check(self, h: History, formula: Formula) -> Verdict:
        self._check_agents(formula)
        if not is_history_formula(formula):
            formula = Coalition((), formula)
        with get_tracer().span("check", {"model": self.model.name, "semantics": self.semantics, "bound": self.bound}):
            value = self.history_value(h, formula)
        return Verdict(value, self.bound, self.semantics, self.witnesses.get((h, formula)))

    def check_path(self, path: BoundedPath, m: int, formula: Formula) -> Verdict:
        if not 0 <= m < len(path):
            raise IndexError(f"position {m} outside path of length {len(path)}")
        self._check_agents(formula)
        value = self.path_value(path.history, m, formula, path.truncated)
        return Verdict(value, self.bound, self.semantics)

    def _check_agents(self, formula: Formula) -> None:
        strangers = agents_of(formula) - set(self.model.agents)
        if strangers:
            raise UnknownAgentError(f"formula names agents {sorted(strangers)} absent from {self.model.name}")

    # history formulas

    def history_value(self, h: History, f: Formula) -> Truth:
        key = (h, f)
        if key in self.memo:
            return self.memo[key]
        if isinstance(f, Atom):
            value = Truth.of(f.name in self.model.label(h.last))
        elif isinstance(f, Const):
            value = Truth.of(f.value)
        elif isinstance(f, Not):
            value = ~self.history_value(h, f.sub)
        elif isinstance(f, And):
            value = self.history_value(h, f.left) & self.history_value(h, f.right)
        elif isinstance(f, Or):
            value = self.history_value(h, f.left) | self.history_value(h, f.right)
        elif isinstance(f, Implies):
            value = ~self.history_value(h, f.left) | self.history_value(h, f.right)
        elif isinstance(f, Coalition):
            value = self._coalition(h, f)
        elif isinstance(f, Embed):
            value = self.history_value(h, f.sub)
        else:
            value = self._coalition(h, Coalition((), f))
        self.memo[key] = value
        return value

    def _coalition(self, h: History, f: Coalition) -> Truth:
        coalition = self.model.coalition(f.agents)
        starts = start_set(self.model, coalition, h, self.semantics)
        horizon = int(min(lookahead(f.body), self.bound))
        position = len(h) - 1
        result = Truth.FALSE
        self.metrics.increment("checker.coalition_queries")
        for behaviour in enumerate_reachable(self.model, coalition, starts, horizon):
            value = Truth.TRUE
            for path in behaviour.reached:
                value = value & self.path_value(path, position, f.body, True)
                if value is Truth.FALSE:
                    break
            if value is Truth.TRUE:
                self.witnesses[(h, f)] = behaviour.to_dict()
                return Truth.TRUE
            result = result | value
        return result

    # path formulas

    def path_value(self, path: History, m: int, f: Formula, truncated: bool = True) -> Truth:
        if isinstance(f, Embed):
            return self.history_value(path.prefix(m + 1), f.sub)
        if isinstance(f, (Atom, Const, Coalition)):
            return self.history_value(path.prefix(m + 1), f)
        if isinstance(f, Not):
            return ~self.path_value(path, m, f.sub, truncated)
        if isinstance(f, And):
            return self.path_value(path, m, f.left, truncated) & self.path_value(path, m, f.right, truncated)
        if isinstance(f, Or):
            return self.path_value(path, m, f.left, truncated) | self.path_value(path, m, f.right, truncated)
        if isinstance(f, Implies):
            return ~self.path_value(path, m, f.left, truncated) | self.path_value(path, m, f.right, truncated)
        if isinstance(f, Next):
            if m + 1 < len(path):
                return self.path_value(path, m + 1, f.sub, truncated)
            return Truth.UNKNOWN if truncated else Truth.FALSE
        if isinstance(f, Yesterday):
            if m >= 1:
                return self.path_value(path, m - 1, f.sub, truncated)
            return Truth.FALSE
        if isinstance(f, Until):
            witnessed = Truth.FALSE
            holding = Truth.TRUE
            for j in range(m, len(path)):
                witnessed = witnessed | (holding & self.path_value(path, j, f.right, truncated))
                if witnessed is Truth.TRUE:
                    return witnessed
                holding = holding & self.path_value(path, j, f.left, truncated)
                if holding is Truth.FALSE:
                    return witnessed
            return witnessed | (holding & Truth.UNKNOWN) if truncated else witnessed
        raise TypeError(f"not a formula: {f!r}")


def check(model: ICGS, h: History, formula: Formula, semantics: str = "obj", bound: int = 2) -> Verdict:
    """Evaluate ``formula`` at ``h`` under ``semantics`` within ``bound`` steps."""
    if not is_history(model, h):
        raise ValueError(f"{h} is not a history of {model.name}")
    verdict = ModelChecker(model, semantics, bound).check(h, formula)
    logger.debug(f"{model.name} at {h}: {verdict.value}")
    return verdict


def check_path(
    model: ICGS,
    path: BoundedPath,
    m: int,
    formula: Formula,
    semantics: str = "obj",
    bound: int = 2,
) -> Verdict:
    """Evaluate a path formula at position ``m`` of a bounded path."""
    return ModelChecker(model, semantics, bound).check_path(path, m, formula)
