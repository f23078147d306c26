"""JSON model files and the CLI history syntax."""

import json
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..exceptions import ModelFormatError
from .history import History, is_history
from .icgs import ICGS


class TransitionEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    source: str = Field(alias="from")
    act: Dict[str, str]
    to: str


class ModelFile(BaseModel):
    """On-disk layout of a model."""

    model_config = ConfigDict(extra="forbid")

    agents: List[str]
    states: List[str]
    init: str
    actions: List[str]
    protocol: Dict[str, Dict[str, List[str]]]
    transitions: List[TransitionEntry]
    obs: Dict[str, List[List[str]]] = Field(default_factory=dict)
    labels: Dict[str, List[str]] = Field(default_factory=dict)
    atoms: List[str] = Field(default_factory=list)
    initial: Optional[List[str]] = None
    name: Optional[str] = None


def model_from_dict(data: Dict, name: str = "model") -> ICGS:
    """Build an ICGS from the decoded JSON object."""
    try:
        parsed = ModelFile.model_validate(data)
    except ValidationError as e:
        raise ModelFormatError(f"ill-formed model: {e}") from e

    agents = tuple(parsed.agents)
    transitions = set()
    for entry in parsed.transitions:
        strangers = set(entry.act) - set(agents)
        if strangers:
            raise ModelFormatError(f"transition from {entry.source} names unknown agents {sorted(strangers)}")
        missing = [a for a in agents if a not in entry.act]
        if missing:
            raise ModelFormatError(f"transition from {entry.source} lacks actions for {missing}")
        transitions.add((entry.source, tuple(entry.act[a] for a in agents), entry.to))

    protocol = {
        (agent, state): frozenset(acts)
        for agent, per_state in parsed.protocol.items()
        for state, acts in per_state.items()
    }
    return ICGS(
        agents=agents,
        states=tuple(parsed.states),
        init=parsed.init,
        actions=tuple(sorted(set(parsed.actions))),
        protocol=protocol,
        transitions=frozenset(transitions),
        obs={a: tuple(frozenset(block) for block in blocks) for a, blocks in parsed.obs.items()},
        labels={s: frozenset(ps) for s, ps in parsed.labels.items()},
        atoms=frozenset(parsed.atoms),
        initial=frozenset(parsed.initial or ()),
        name=parsed.name or name,
    )


def parse_model(text: str, name: str = "model") -> ICGS:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"model is not valid JSON: {e}") from e
    return model_from_dict(data, name=name)


def load_model(path: Union[str, Path]) -> ICGS:
    """Read a model file; unreadable or ill-formed files raise ModelFormatError."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelFormatError(f"cannot read model file {path}: {e}") from e
    return parse_model(text, name=path.stem)


def model_to_dict(model: ICGS) -> Dict:
    """
    Deterministic dictionary form of a model.

    Agent order is kept (it fixes joint-action order); every other array
    is sorted. Singleton observation classes are omitted.
    """
    obs = {}
    for agent in model.agents:
        blocks = sorted(sorted(block) for block in model.obs.get(agent, ()) if len(block) > 1)
        if blocks:
            obs[agent] = blocks
    data = {
        "agents": list(model.agents),
        "states": sorted(model.states),
        "init": model.init,
        "actions": sorted(model.actions),
        "protocol": {
            agent: {
                state: sorted(model.protocol[(agent, state)])
                for state in sorted(model.states)
                if (agent, state) in model.protocol
            }
            for agent in model.agents
        },
        "transitions": [
            {"from": s, "act": dict(zip(model.agents, joint)), "to": t}
            for s, joint, t in sorted(model.transitions)
        ],
        "obs": obs,
        "labels": {s: sorted(ps) for s, ps in sorted(model.labels.items()) if ps},
        "atoms": sorted(model.atoms),
    }
    if model.initial != frozenset({model.init}):
        data["initial"] = sorted(model.initial)
    return data


def dump_model(model: ICGS) -> str:
    return json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n"


def parse_history(model: ICGS, text: str) -> History:
    """
    Parse ``s0 a1:x,a2:y s1 ...``: states alternating with joint actions
    given as comma-separated ``agent:action`` pairs covering every agent.
    """
    tokens = text.split()
    if not tokens or len(tokens) % 2 == 0:
        raise ModelFormatError(f"history {text!r} must alternate states and joint actions")
    states = tuple(tokens[0::2])
    joints = []
    for token in tokens[1::2]:
        chosen = {}
        for pair in token.split(","):
            agent, sep, action = pair.partition(":")
            if not sep or not agent or not action:
                raise ModelFormatError(f"malformed joint action {token!r}")
            chosen[agent] = action
        if set(chosen) != set(model.agents):
            raise ModelFormatError(f"joint action {token!r} must name exactly the agents {list(model.agents)}")
        joints.append(tuple(chosen[a] for a in model.agents))
    for s in states:
        if s not in model.state_index:
            raise ModelFormatError(f"unknown state {s!r} in history")
    h = History(states, tuple(joints))
    if not is_history(model, h):
        raise ModelFormatError(f"{text!r} is not a history of {model.name}")
    return h
