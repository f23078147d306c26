"""Helper utility functions."""

import hashlib
import json
from itertools import product
from pathlib import Path
from typing import Dict, Sequence, Union

import numpy as np

from ..logic import And, Atom, Coalition, Formula, Next, Not, Or, Until, Yesterday
from ..model import ICGS, build_icgs, rename_states


def random_model(
    rng: np.random.Generator,
    max_states: int = 4,
    agents: Sequence[str] = ("1", "2"),
    actions: Sequence[Sequence[str]] = (("a", "b"), ("x", "y")),
    atoms: Sequence[str] = ("p", "q"),
    name: str = "random",
) -> ICGS:
    """
    A small random model for property tests.

    Every agent has its whole action set at every state, so protocols are
    uniform whatever the observation partitions. Each joint action leads
    to one or two states.

    Args:
        rng: numpy random generator
        max_states: Upper bound on the number of states (at least 1)
        agents: Agent names
        actions: One action set per agent
        atoms: Atomic propositions to label with
        name: Model name

    Returns:
        A valid ICGS rooted at s0
    """
    n = int(rng.integers(1, max_states + 1))
    states = [f"s{k}" for k in range(n)]
    protocol = {(a, s): list(acts) for a, acts in zip(agents, actions) for s in states}
    transitions = []
    for s in states:
        for joint in product(*actions):
            targets = rng.choice(states, size=int(rng.integers(1, min(2, n) + 1)), replace=False)
            transitions.extend((s, joint, str(t)) for t in targets)
    obs = {}
    for a in agents:
        blocks: Dict[int, list] = {}
        for s in states:
            blocks.setdefault(int(rng.integers(0, n)), []).append(s)
        obs[a] = list(blocks.values())
    labels = {s: [p for p in atoms if rng.random() < 0.5] for s in states}
    return build_icgs(
        agents, states, "s0", protocol, transitions,
        obs=obs, labels=labels, atoms=atoms, name=name,
    )


def random_renaming(model: ICGS, rng: np.random.Generator) -> ICGS:
    """An isomorphic copy with shuffled state names."""
    names = [f"t{k}" for k in rng.permutation(len(model.states))]
    return rename_states(model, dict(zip(model.states, names)), name=f"{model.name}-copy")


def random_formula(
    rng: np.random.Generator,
    agents: Sequence[str],
    atoms: Sequence[str],
    depth: int = 2,
) -> Formula:
    """A random history formula whose temporal depth is at most ``depth``."""
    roll = rng.random()
    if depth == 0 or roll < 0.25:
        f: Formula = Atom(str(rng.choice(list(atoms))))
        return Not(f) if rng.random() < 0.3 else f
    if roll < 0.4:
        return Not(random_formula(rng, agents, atoms, depth))
    if roll < 0.55:
        op = And if rng.random() < 0.5 else Or
        return op(random_formula(rng, agents, atoms, depth), random_formula(rng, agents, atoms, depth))
    size = int(rng.integers(0, len(agents) + 1))
    coalition = tuple(sorted(str(a) for a in rng.choice(list(agents), size=size, replace=False)))
    inner = random_formula(rng, agents, atoms, depth - 1)
    step = rng.random()
    if step < 0.45:
        body = Next(inner)
    elif step < 0.7:
        body = Yesterday(inner)
    else:
        body = Until(random_formula(rng, agents, atoms, depth - 1), inner)
    return Coalition(coalition, body)


def file_digest(path: Union[str, Path]) -> str:
    """sha256 of a file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def format_output(result: dict, format_type: str = "json") -> str:
    """
    Format a command result for display.

    Args:
        result: Result dictionary
        format_type: Output format (json or console)

    Returns:
        Formatted string
    """
    if format_type == "json":
        return json.dumps(result, indent=2, sort_keys=True, default=str)

    output = []
    if result.get("success"):
        output.append(f"{result.get('command', 'command')}: {result.get('verdict', 'done')}")
        if "formula" in result:
            output.append(f"  distinguishing formula: {result['formula']}")
    else:
        output.append(f"error: {result.get('error', 'Unknown error')}")
    return "\n".join(output)
