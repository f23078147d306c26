"""Deterministic Turing machines: description files and a reference simulator."""

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..exceptions import ModelFormatError
from ..observability import get_logger, trace_execution

logger = get_logger(__name__)

_NAME = re.compile(r"^[A-Za-z0-9]+$")
# Names the encoder uses for its own states and actions.
_RESERVED = {"i", "tr"}


class TMTransition(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    state: str
    read: str
    next: str
    write: str
    move: Literal["L", "R"]

    @property
    def label(self) -> str:
        """The announcement agents make for this move."""
        return f"{self.state}-{self.next}-{self.move}"


class TMSpec(BaseModel):
    """A one-tape deterministic machine on a tape bounded to the left."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    states: List[str]
    alphabet: List[str]
    blank: str = "B"
    init: str
    halting: List[str] = Field(default_factory=list)
    delta: List[TMTransition] = Field(default_factory=list)

    @model_validator(mode="after")
    def _well_formed(self) -> "TMSpec":
        for name in self.states + self.alphabet:
            if not _NAME.match(name) or name in _RESERVED:
                raise ValueError(f"name {name!r} must be alphanumeric and not one of {sorted(_RESERVED)}")
        if set(self.states) & set(self.alphabet):
            raise ValueError("states and tape symbols must not share names")
        if self.blank not in self.alphabet:
            raise ValueError(f"blank {self.blank!r} is not in the alphabet")
        if self.init not in self.states:
            raise ValueError(f"initial state {self.init!r} is not declared")
        unknown = set(self.halting) - set(self.states)
        if unknown:
            raise ValueError(f"undeclared halting states {sorted(unknown)}")
        seen = set()
        for t in self.delta:
            if t.state not in self.states or t.next not in self.states:
                raise ValueError(f"transition {t.label} references an undeclared state")
            if t.read not in self.alphabet or t.write not in self.alphabet:
                raise ValueError(f"transition {t.label} references an undeclared symbol")
            if (t.state, t.read) in seen:
                raise ValueError(f"two transitions for ({t.state}, {t.read})")
            seen.add((t.state, t.read))
        return self

    @property
    def table(self) -> Dict[Tuple[str, str], TMTransition]:
        return {(t.state, t.read): t for t in self.delta if t.state not in self.halting}

    def step(self, state: str, symbol: str) -> Optional[TMTransition]:
        """The applicable transition, or None when the machine halts."""
        return self.table.get((state, symbol))

    @property
    def labels(self) -> List[str]:
        return sorted({t.label for t in self.table.values()})


@dataclass(frozen=True)
class Configuration:
    state: str
    head: int
    tape: Dict[int, str] = field(default_factory=dict)

    def read(self, blank: str) -> str:
        return self.tape.get(self.head, blank)

    def to_dict(self) -> Dict:
        return {"state": self.state, "head": self.head, "tape": {str(k): v for k, v in sorted(self.tape.items())}}


@dataclass(frozen=True)
class TMTrace:
    configurations: Tuple[Configuration, ...]
    halted: bool

    @property
    def steps(self) -> int:
        return len(self.configurations) - 1

    @property
    def last(self) -> Configuration:
        return self.configurations[-1]

    def to_dict(self) -> Dict:
        return {
            "steps": self.steps,
            "halted": self.halted,
            "configurations": [c.to_dict() for c in self.configurations],
        }


@trace_execution("tm.simulate")
def simulate_tm(tm: TMSpec, max_steps: int) -> TMTrace:
    """
    Run ``tm`` from the empty tape for at most ``max_steps`` steps.

    The tape only stores non-blank cells. A left move on cell 0 has
    nowhere to go and halts the machine like an undefined entry.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    current = Configuration(tm.init, 0, {})
    configurations = [current]
    table = tm.table
    for _ in range(max_steps):
        t = table.get((current.state, current.read(tm.blank)))
        if t is None or (t.move == "L" and current.head == 0):
            return TMTrace(tuple(configurations), True)
        tape = dict(current.tape)
        if t.write == tm.blank:
            tape.pop(current.head, None)
        else:
            tape[current.head] = t.write
        head = current.head + (1 if t.move == "R" else -1)
        current = Configuration(t.next, head, tape)
        configurations.append(current)
    last = configurations[-1]
    t = table.get((last.state, last.read(tm.blank)))
    halted = t is None or (t.move == "L" and last.head == 0)
    return TMTrace(tuple(configurations), halted)


def halting_step(tm: TMSpec, max_steps: int) -> Optional[int]:
    """The step at which ``tm`` halts from the empty tape, if within ``max_steps``."""
    trace = simulate_tm(tm, max_steps)
    return trace.steps if trace.halted else None


def _transition(state, read, next, write, move) -> TMTransition:
    return TMTransition(state=state, read=read, next=next, write=write, move=move)


def table1_machine() -> TMSpec:
    """Three states over {B, a}; total, so it never halts."""
    rows = [
        ("q0", "B", "q1", "a", "R"),
        ("q0", "a", "q1", "B", "R"),
        ("q1", "B", "q2", "a", "R"),
        ("q1", "a", "q0", "B", "L"),
        ("q2", "B", "q0", "B", "L"),
        ("q2", "a", "q2", "a", "R"),
    ]
    return TMSpec(
        states=["q0", "q1", "q2"],
        alphabet=["B", "a"],
        init="q0",
        delta=[_transition(*row) for row in rows],
    )


def halting_machine() -> TMSpec:
    """Two states over {B, a}; writes a, steps back and forth, and halts at step 3."""
    rows = [
        ("q0", "B", "q1", "a", "R"),
        ("q1", "B", "q0", "a", "L"),
        ("q0", "a", "q1", "a", "R"),
    ]
    return TMSpec(states=["q0", "q1"], alphabet=["B", "a"], init="q0", delta=[_transition(*row) for row in rows])


def tm_from_dict(data: Dict) -> TMSpec:
    try:
        return TMSpec.model_validate(data)
    except ValidationError as e:
        raise ModelFormatError(f"ill-formed machine: {e}") from e


def load_tm(path: Union[str, Path]) -> TMSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ModelFormatError(f"cannot read machine file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"machine file {path} is not valid JSON: {e}") from e
    tm = tm_from_dict(data)
    logger.info(f"Loaded machine with {len(tm.states)} states and {len(tm.delta)} transitions from {path}")
    return tm


def dump_tm(tm: TMSpec) -> str:
    return json.dumps(tm.model_dump(), indent=2, sort_keys=True) + "\n"


BUILTIN_MACHINES = {"table1": table1_machine, "halting": halting_machine}


def builtin_machine(name: str) -> TMSpec:
    if name not in BUILTIN_MACHINES:
        raise ModelFormatError(f"unknown machine {name!r}; choose from {sorted(BUILTIN_MACHINES)}")
    return BUILTIN_MACHINES[name]()


__all__ = [
    "TMTransition",
    "TMSpec",
    "Configuration",
    "TMTrace",
    "simulate_tm",
    "halting_step",
    "table1_machine",
    "halting_machine",
    "tm_from_dict",
    "load_tm",
    "dump_tm",
    "builtin_machine",
]
