"""Unfoldings prepared for relation refinement and game solving."""

from collections import defaultdict
from functools import lru_cache
from typing import Dict, FrozenSet, List, Tuple

from ..epistemics import ckn_partition, indist_classes
from ..model import ICGS, Coalition, History, strata
from ..strategies import StrategySpace

Profile = Tuple[str, ...]


class Stratum:
    """Histories of one length with their CKNs and per-agent classes."""

    def __init__(self, model: ICGS, coalition: Coalition, histories: Tuple[History, ...], side: str):
        self.length = len(histories[0]) if histories else 0
        self.histories = histories
        self.ckns = ckn_partition(model, coalition, histories, side) if histories else []
        self.ckn_id: Dict[History, int] = {}
        for n, block in enumerate(self.ckns):
            for h in block.members:
                self.ckn_id[h] = n
        self.members: List[Tuple[History, ...]] = [tuple(sorted(b.members)) for b in self.ckns]
        self.spaces: List[StrategySpace] = [StrategySpace(model, coalition, m) for m in self.members]
        self.class_id: Dict[str, Dict[History, int]] = {}
        self.classes: Dict[str, List[Tuple[History, ...]]] = {}
        for agent in coalition:
            groups = indist_classes(model, agent, histories)
            self.classes[agent] = [tuple(g) for g in groups]
            self.class_id[agent] = {h: n for n, g in enumerate(groups) for h in g}


class SideContext:
    """
    One model unfolded up to ``max_length`` states for a coalition: strata,
    CKNs, strategy spaces per CKN and successor tables by coalition profile.
    """

    def __init__(self, model: ICGS, coalition: Coalition, max_length: int, side: str = "left"):
        self.model = model
        self.coalition = coalition
        self.max_length = max_length
        self.side = side
        layers = strata(model, max_length - 1)
        self.strata: Dict[int, Stratum] = {
            n + 1: Stratum(model, coalition, layer, side) for n, layer in enumerate(layers)
        }
        self._children: Dict[History, Dict[Profile, Tuple[History, ...]]] = {}

    def stratum(self, length: int) -> Stratum:
        return self.strata[length]

    def ckn_id(self, h: History) -> int:
        return self.strata[len(h)].ckn_id[h]

    def ckn_members(self, length: int, cid: int) -> Tuple[History, ...]:
        return self.strata[length].members[cid]

    def space(self, length: int, cid: int) -> StrategySpace:
        return self.strata[length].spaces[cid]

    def children(self, h: History) -> Dict[Profile, Tuple[History, ...]]:
        """Successors of ``h`` grouped by the coalition profile producing them."""
        if h not in self._children:
            grouped: Dict[Profile, List[History]] = defaultdict(list)
            for profile in self.model.profiles(self.coalition, h.last):
                grouped[profile]
            for joint, target in self.model.moves(h.last):
                grouped[self.model.project(self.coalition, joint)].append(h.extend(joint, target))
            self._children[h] = {p: tuple(sorted(v)) for p, v in grouped.items()}
        return self._children[h]

    def label(self, h: History) -> FrozenSet[str]:
        return self.model.label(h.last)


@lru_cache(maxsize=32)
def side_context(model: ICGS, coalition: Coalition, max_length: int, side: str = "left") -> SideContext:
    return SideContext(model, coalition, max_length, side)
