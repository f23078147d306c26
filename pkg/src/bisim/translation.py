"""Moving between refinement results and Duplicator strategies."""

from dataclasses import replace
from typing import FrozenSet, List, Optional, Tuple

from ..model import History
from .game import (
    CHALLENGED,
    HALF_PICKED,
    PAIR,
    PICKED,
    RESPONDED,
    SUCCESSOR_PICKED,
    GamePosition,
    GameTree,
    explore_duplicator,
)
from .relation import BisimResult, RefinementCertificate, audit_relation, relation_from_pairs

Pair = Tuple[History, History]


class RelationDuplicator:
    """
    Duplicator playing from a refinement fixpoint: the I-player answers
    with the simulator tables, the P-player keeps every pick inside the
    relation.
    """

    def __init__(self, result: BisimResult):
        self.result = result
        self.relation = result.relation

    def _covers(self, successors_from, successors_to, forward: bool) -> bool:
        rel = self.relation
        if forward:
            return all(any((l, l2) in rel for l in successors_from) for l2 in successors_to)
        return all(any((l, l2) in rel for l2 in successors_to) for l in successors_from)

    def choose(self, tree: GameTree, pos: GamePosition) -> Optional[GamePosition]:
        rel = self.relation
        n = len(pos.h)
        key = (n, rel.left.ckn_id(pos.h), rel.right.ckn_id(pos.h2))
        left_space, right_space = tree.spaces(pos)
        if pos.shape == CHALLENGED:
            direction = "forward" if pos.side == "L" else "converse"
            table = self.result.tables.get((direction,) + key)
            if table is None:
                return None
            if pos.side == "L":
                return replace(pos, shape=RESPONDED, right_values=table.respond(pos.left_values))
            return replace(pos, shape=RESPONDED, left_values=table.respond(pos.right_values))
        if pos.shape == HALF_PICKED:
            if pos.side == "L":
                targets = right_space.successors(pos.right_values, pos.k2)
                candidates = [k for k in left_space.histories if (k, pos.k2) in rel]
                for k in candidates:
                    if self._covers(left_space.successors(pos.left_values, k), targets, True):
                        return replace(pos, shape=PICKED, k=k)
                return replace(pos, shape=PICKED, k=candidates[0]) if candidates else None
            sources = left_space.successors(pos.left_values, pos.k)
            candidates = [k2 for k2 in right_space.histories if (pos.k, k2) in rel]
            for k2 in candidates:
                if self._covers(sources, right_space.successors(pos.right_values, k2), False):
                    return replace(pos, shape=PICKED, k2=k2)
            return replace(pos, shape=PICKED, k2=candidates[0]) if candidates else None
        if pos.shape == SUCCESSOR_PICKED:
            if pos.side == "L":
                for l in left_space.successors(pos.left_values, pos.k):
                    if (l, pos.l2) in rel:
                        return GamePosition(PAIR, pos.round + 1, l, pos.l2)
                return None
            for l2 in right_space.successors(pos.right_values, pos.k2):
                if (pos.l, l2) in rel:
                    return GamePosition(PAIR, pos.round + 1, pos.l, l2)
            return None
        raise ValueError(f"{pos.owner} moves at {pos.shape} positions")


def duplicator_from_relation(result: BisimResult) -> RelationDuplicator:
    """The Duplicator strategy a bisimilar-to-depth result induces."""
    if not result.bisimilar:
        raise ValueError("only a bisimilar-to-depth result induces a Duplicator strategy")
    return RelationDuplicator(result)


def relation_from_duplicator(tree: GameTree, policy) -> FrozenSet[Pair]:
    """Pairs labelling the positions a winning Duplicator policy allows."""
    report = explore_duplicator(tree, policy)
    if not report.wins:
        raise ValueError(f"the Duplicator policy loses at {report.failure.label()}")
    return frozenset(report.pairs)


def audit_duplicator_relation(tree: GameTree, policy, mode: str = "restated") -> List[RefinementCertificate]:
    """Audit the relation read off a winning Duplicator policy."""
    pairs = relation_from_duplicator(tree, policy)
    relation = relation_from_pairs(
        tree.left_model, tree.right_model, tree.coalition, tree.depth, pairs, len(tree.root.h),
    )
    return audit_relation(relation, mode)
