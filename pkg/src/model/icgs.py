"""Concurrent game structures with imperfect information."""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from ..exceptions import ActionNotEnabledError, UnknownAgentError

JointAction = Tuple[str, ...]
Coalition = Tuple[str, ...]


@dataclass(frozen=True, eq=False)
class ICGS:
    """
    An iCGS: agents, states, a protocol, joint-action transitions,
    per-agent observation partitions and a labelling.

    Joint actions are tuples ordered like ``agents``. Transitions may be
    relational. States absent from every listed observation class of an
    agent form singleton classes for that agent. ``initial`` is the set
    of states histories may start at; it defaults to ``{init}``.
    """

    agents: Tuple[str, ...]
    states: Tuple[str, ...]
    init: str
    actions: Tuple[str, ...]
    protocol: Mapping[Tuple[str, str], FrozenSet[str]]
    transitions: FrozenSet[Tuple[str, JointAction, str]]
    obs: Mapping[str, Tuple[FrozenSet[str], ...]] = field(default_factory=dict)
    labels: Mapping[str, FrozenSet[str]] = field(default_factory=dict)
    atoms: FrozenSet[str] = frozenset()
    initial: FrozenSet[str] = frozenset()
    name: str = "model"

    def __post_init__(self):
        if not self.initial:
            object.__setattr__(self, "initial", frozenset({self.init}))

    # dense indices

    @cached_property
    def state_index(self) -> Dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def agent_index(self) -> Dict[str, int]:
        return {a: i for i, a in enumerate(self.agents)}

    @cached_property
    def action_index(self) -> Dict[str, int]:
        return {a: i for i, a in enumerate(sorted(self.actions))}

    def agent_position(self, agent: str) -> int:
        try:
            return self.agent_index[agent]
        except KeyError:
            raise UnknownAgentError(f"unknown agent {agent!r} in model {self.name}") from None

    def coalition(self, agents: Iterable[str]) -> Coalition:
        """Normalise a set of agent names to model order, rejecting strangers."""
        wanted = set(agents)
        for agent in wanted:
            self.agent_position(agent)
        return tuple(a for a in self.agents if a in wanted)

    # observation partitions

    @cached_property
    def obs_class(self) -> Dict[str, Dict[str, str]]:
        """Per agent, the canonical representative of each state's class."""
        order = self.state_index
        result: Dict[str, Dict[str, str]] = {}
        for agent in self.agents:
            rep = {s: s for s in self.states}
            seen = set()
            for block in self.obs.get(agent, ()):
                members = [s for s in block if s in order and s not in seen]
                if not members:
                    continue
                seen.update(members)
                leader = min(members, key=order.__getitem__)
                for s in members:
                    rep[s] = leader
            result[agent] = rep
        return result

    def state_indist(self, agent: str, s: str, t: str) -> bool:
        classes = self.obs_class[agent]
        return classes[s] == classes[t]

    # protocol and transitions

    def enabled(self, agent: str, state: str) -> Tuple[str, ...]:
        return tuple(sorted(self.protocol.get((agent, state), frozenset())))

    @cached_property
    def _successor_map(self) -> Dict[Tuple[str, JointAction], FrozenSet[str]]:
        table: Dict[Tuple[str, JointAction], set] = {}
        for source, joint, target in self.transitions:
            table.setdefault((source, tuple(joint)), set()).add(target)
        return {key: frozenset(targets) for key, targets in table.items()}

    def is_enabled(self, state: str, joint: Sequence[str]) -> bool:
        if len(joint) != len(self.agents):
            return False
        return all(a in self.protocol.get((ag, state), ()) for ag, a in zip(self.agents, joint))

    def successors(self, state: str, joint: Sequence[str]) -> FrozenSet[str]:
        """States reachable from ``state`` by ``joint``; the joint must be enabled."""
        joint = tuple(joint)
        if not self.is_enabled(state, joint):
            raise ActionNotEnabledError(state, joint)
        return self._successor_map.get((state, joint), frozenset())

    @cached_property
    def _enabled_joints(self) -> Dict[str, List[JointAction]]:
        return {
            s: [tuple(j) for j in product(*(self.enabled(a, s) for a in self.agents))]
            for s in self.states
        }

    def enabled_joint(self, state: str) -> List[JointAction]:
        """All enabled joint actions at ``state`` in lexicographic order."""
        return self._enabled_joints[state]

    def profiles(self, coalition: Coalition, state: str) -> List[Tuple[str, ...]]:
        """Action profiles of ``coalition`` enabled at ``state``."""
        return [tuple(p) for p in product(*(self.enabled(a, state) for a in coalition))]

    def project(self, coalition: Coalition, joint: JointAction) -> Tuple[str, ...]:
        return tuple(joint[self.agent_index[a]] for a in coalition)

    @cached_property
    def _moves(self) -> Dict[str, List[Tuple[JointAction, str]]]:
        moves: Dict[str, List[Tuple[JointAction, str]]] = {s: [] for s in self.states}
        for s in self.states:
            for joint in self.enabled_joint(s):
                for target in sorted(self._successor_map.get((s, joint), ())):
                    moves[s].append((joint, target))
        return moves

    def moves(self, state: str) -> List[Tuple[JointAction, str]]:
        """Every enabled (joint action, successor) pair at ``state``, sorted."""
        return self._moves[state]

    def label(self, state: str) -> FrozenSet[str]:
        return self.labels.get(state, frozenset())

    def __repr__(self) -> str:
        return f"ICGS(name={self.name!r}, agents={len(self.agents)}, states={len(self.states)})"


def build_icgs(
    agents: Sequence[str],
    states: Sequence[str],
    init: str,
    protocol: Mapping[Tuple[str, str], Iterable[str]],
    transitions: Iterable[Tuple[str, Sequence[str], str]],
    obs: Mapping[str, Iterable[Iterable[str]]] = None,
    labels: Mapping[str, Iterable[str]] = None,
    atoms: Iterable[str] = None,
    initial: Iterable[str] = None,
    name: str = "model",
    actions: Iterable[str] = None,
) -> ICGS:
    """Assemble an ICGS from plain Python containers."""
    protocol = {key: frozenset(acts) for key, acts in protocol.items()}
    labels = {s: frozenset(ps) for s, ps in (labels or {}).items()}
    if actions is None:
        actions = sorted(set().union(*protocol.values())) if protocol else []
    if atoms is None:
        atoms = sorted(set().union(*labels.values())) if labels else []
    return ICGS(
        agents=tuple(agents),
        states=tuple(states),
        init=init,
        actions=tuple(sorted(set(actions))),
        protocol=protocol,
        transitions=frozenset((s, tuple(j), t) for s, j, t in transitions),
        obs={a: tuple(frozenset(block) for block in blocks) for a, blocks in (obs or {}).items()},
        labels=labels,
        atoms=frozenset(atoms),
        initial=frozenset(initial or ()),
        name=name,
    )


def rename_states(model: ICGS, mapping: Mapping[str, str], name: str = None) -> ICGS:
    """Copy of ``model`` with states renamed through a bijection."""
    if len(set(mapping[s] for s in model.states)) != len(model.states):
        raise ValueError("state renaming must be injective")
    return ICGS(
        agents=model.agents,
        states=tuple(mapping[s] for s in model.states),
        init=mapping[model.init],
        actions=model.actions,
        protocol={(a, mapping[s]): acts for (a, s), acts in model.protocol.items()},
        transitions=frozenset((mapping[s], j, mapping[t]) for s, j, t in model.transitions),
        obs={a: tuple(frozenset(mapping[s] for s in block) for block in blocks) for a, blocks in model.obs.items()},
        labels={mapping[s]: ps for s, ps in model.labels.items()},
        atoms=model.atoms,
        initial=frozenset(mapping[s] for s in model.initial),
        name=name or f"{model.name}-renamed",
    )
