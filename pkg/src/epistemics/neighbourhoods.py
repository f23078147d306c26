"""History indistinguishability and common-knowledge neighbourhoods."""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Sequence, Tuple

import networkx as nx

from ..model import ICGS, Coalition, History, stratum

ObservationKey = Tuple[Tuple[str, ...], Tuple[str, ...]]


def observation_key(model: ICGS, agent: str, h: History) -> ObservationKey:
    """
    What ``agent`` records along ``h``: its observation class at every
    state and its own action at every step.
    """
    classes = model.obs_class[agent]
    position = model.agent_position(agent)
    return (
        tuple(classes[s] for s in h.states),
        tuple(joint[position] for joint in h.actions),
    )


def hist_indist(model: ICGS, agent: str, h: History, other: History) -> bool:
    """True iff ``agent`` cannot tell ``h`` from ``other``."""
    if len(h) != len(other):
        return False
    return observation_key(model, agent, h) == observation_key(model, agent, other)


def indist_classes(model: ICGS, agent: str, universe: Iterable[History]) -> List[List[History]]:
    """The ~agent classes of ``universe``, each sorted, ordered by least member."""
    groups: Dict[Hashable, List[History]] = defaultdict(list)
    for h in sorted(universe):
        groups[observation_key(model, agent, h)].append(h)
    return sorted(groups.values(), key=lambda members: members[0])


@dataclass(frozen=True)
class CKN:
    """A common-knowledge neighbourhood of a coalition."""

    coalition: Coalition
    members: FrozenSet[History]
    side: str = "left"

    @property
    def representative(self) -> History:
        return min(self.members)

    @property
    def length(self) -> int:
        return len(self.representative)

    def __contains__(self, h: History) -> bool:
        return h in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> List[History]:
        return sorted(self.members)


def _check_homogeneous(universe: Sequence[History]) -> None:
    if len({len(h) for h in universe}) > 1:
        raise ValueError("universe must contain histories of a single length")


def ckn_partition(
    model: ICGS,
    coalition: Iterable[str],
    universe: Iterable[History],
    side: str = "left",
) -> List[CKN]:
    """
    Split a length-homogeneous universe into CKNs: connected components of
    the graph linking histories some coalition member cannot tell apart.
    """
    coalition = model.coalition(coalition)
    universe = sorted(set(universe))
    _check_homogeneous(universe)

    graph = nx.Graph()
    graph.add_nodes_from(universe)
    for agent in coalition:
        for members in indist_classes(model, agent, universe):
            nx.add_path(graph, members)

    blocks = [CKN(coalition, frozenset(component), side) for component in nx.connected_components(graph)]
    return sorted(blocks, key=lambda block: block.representative)


def ckn_of(
    model: ICGS,
    coalition: Iterable[str],
    h: History,
    universe: Iterable[History] = None,
    side: str = "left",
) -> CKN:
    """The CKN of ``h``; the universe defaults to the full unfolding at |h|."""
    universe = stratum(model, len(h)) if universe is None else universe
    universe = set(universe)
    if h not in universe:
        raise ValueError(f"history {h} is not in the universe")
    coalition = model.coalition(coalition)
    graph = nx.Graph()
    graph.add_nodes_from(universe)
    for agent in coalition:
        for members in indist_classes(model, agent, universe):
            nx.add_path(graph, members)
    return CKN(coalition, frozenset(nx.node_connected_component(graph, h)), side)


def subjective_starts(model: ICGS, coalition: Iterable[str], h: History) -> List[History]:
    """h together with every history some coalition member confuses with it."""
    coalition = model.coalition(coalition)
    keys = {agent: observation_key(model, agent, h) for agent in coalition}
    starts = {h}
    for other in stratum(model, len(h)):
        if any(observation_key(model, agent, other) == key for agent, key in keys.items()):
            starts.add(other)
    return sorted(starts)
