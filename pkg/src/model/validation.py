"""Structural checks for iCGS definitions."""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Tuple

from ..observability import get_logger, trace_execution
from .icgs import ICGS

logger = get_logger(__name__)


@dataclass(frozen=True)
class Violation:
    """One broken invariant and the element that breaks it."""
    kind: str
    detail: str
    element: Tuple = ()

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "detail": self.detail, "element": [str(e) for e in self.element]}


@dataclass
class ValidationReport:
    """Every violation found in a model; empty means valid."""
    model: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def add(self, kind: str, detail: str, *element) -> None:
        self.violations.append(Violation(kind, detail, tuple(element)))

    def to_dict(self) -> Dict:
        return {
            "model": self.model,
            "valid": self.is_valid,
            "violations": [v.to_dict() for v in self.violations],
        }


@trace_execution("model.validate")
def validate(model: ICGS) -> ValidationReport:
    """
    Check the iCGS invariants.

    Reports unknown references, empty or missing protocol entries,
    overlapping observation classes, protocol non-uniformity inside an
    observation class, enabled joint actions without successor and
    transitions on disabled joint actions. Never raises on bad data.
    """
    report = ValidationReport(model.name)
    states = set(model.states)
    actions = set(model.actions)
    agents = set(model.agents)

    if len(agents) != len(model.agents):
        report.add("duplicate", "agent listed twice")
    if len(states) != len(model.states):
        report.add("duplicate", "state listed twice")

    if model.init not in states:
        report.add("unknown-state", "init is not a state", model.init)
    for s in sorted(model.initial - states):
        report.add("unknown-state", "initial state is not a state", s)

    for (agent, state), acts in sorted(model.protocol.items()):
        if agent not in agents:
            report.add("unknown-agent", "protocol entry for unknown agent", agent, state)
        if state not in states:
            report.add("unknown-state", "protocol entry for unknown state", agent, state)
        for a in sorted(acts - actions):
            report.add("unknown-action", "protocol uses undeclared action", agent, state, a)

    for agent in model.agents:
        for state in model.states:
            if not model.protocol.get((agent, state)):
                report.add("empty-protocol", "no enabled action", agent, state)

    for state, atoms in sorted(model.labels.items()):
        if state not in states:
            report.add("unknown-state", "label on unknown state", state)
        for p in sorted(atoms - model.atoms):
            report.add("unknown-atom", "label uses undeclared atom", state, p)

    for agent, blocks in sorted(model.obs.items()):
        if agent not in agents:
            report.add("unknown-agent", "observation partition for unknown agent", agent)
            continue
        seen: Dict[str, int] = {}
        for n, block in enumerate(blocks):
            for s in sorted(block):
                if s not in states:
                    report.add("unknown-state", "observation class mentions unknown state", agent, s)
                elif s in seen:
                    report.add("obs-partition", "state in two observation classes", agent, s)
                else:
                    seen[s] = n
        for block in blocks:
            members = sorted(s for s in block if s in states)
            for s in members[1:]:
                if model.protocol.get((agent, s), frozenset()) != model.protocol.get((agent, members[0]), frozenset()):
                    report.add(
                        "protocol-uniformity",
                        "indistinguishable states enable different actions",
                        agent, members[0], s,
                    )

    transitions_from: Dict[Tuple[str, Tuple[str, ...]], int] = {}
    for source, joint, target in sorted(model.transitions):
        if source not in states:
            report.add("unknown-state", "transition from unknown state", source)
        if target not in states:
            report.add("unknown-state", "transition to unknown state", target)
        if len(joint) != len(model.agents):
            report.add("joint-arity", "joint action has wrong arity", source, joint)
            continue
        for a in joint:
            if a not in actions:
                report.add("unknown-action", "transition uses undeclared action", source, joint, a)
        if not model.is_enabled(source, joint):
            report.add("disabled-transition", "transition on a disabled joint action", source, joint, target)
        transitions_from[(source, tuple(joint))] = transitions_from.get((source, tuple(joint)), 0) + 1

    for state in model.states:
        enabled = [model.protocol.get((agent, state), ()) for agent in model.agents]
        for joint in product(*(sorted(acts) for acts in enabled)):
            if (state, tuple(joint)) not in transitions_from:
                report.add("missing-transition", "enabled joint action has no successor", state, tuple(joint))

    if report.violations:
        logger.info(f"model {model.name}: {len(report.violations)} violations")
    return report
