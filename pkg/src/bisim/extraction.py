"""Distinguishing formulas from Spoiler wins."""

from typing import Dict, List, Optional, Tuple

from ..logic import (
    Atom,
    Coalition,
    Formula,
    Implies,
    Next,
    Not,
    Verdict,
    Yesterday,
    as_history,
    characteristic,
    check,
    conjunction,
    disjunction,
)
from ..model import History
from ..observability import get_logger, get_tracer
from .game import PAIR, SPOILER, GamePosition, GameResult, Key, SolvedSpoiler

logger = get_logger(__name__)


def _dedup(items: List[Formula]) -> List[Formula]:
    seen = set()
    result = []
    for f in items:
        if f not in seen:
            seen.add(f)
            result.append(f)
    return result


class FormulaExtractor:
    """
    Reads a formula off Spoiler's winning strategy: true at the left
    history and false at the right one of every pair Spoiler wins from.

    A label mismatch gives a literal. Otherwise, for the opening
    challenge on the left CKN the formula says the coalition can move so
    that, whichever history the right side would have answered from, one
    of the successors differs from the successor Spoiler would pick
    there. A challenge on the right CKN gives the negation of the same
    construction with the sides swapped.
    """

    def __init__(self, result: GameResult):
        if result.winner != SPOILER:
            raise ValueError("formulas can only be extracted from a Spoiler win")
        if result.tree.seed is not None:
            raise ValueError("formula extraction needs the unrestricted seed")
        self.result = result
        self.tree = result.tree
        self.solver = result.solver
        self.spoiler = SolvedSpoiler(result.solver)
        self.atoms = sorted(self.tree.left_model.atoms | self.tree.right_model.atoms)
        self._memo: Dict[Key, Formula] = {}
        self.uniform = True

    def literal(self, h: History, h2: History) -> Formula:
        left, right = self.tree.left.label(h), self.tree.right.label(h2)
        atom = sorted(left ^ right)[0]
        return Atom(atom) if atom in left else Not(Atom(atom))

    def distinguish(self, h: History, h2: History) -> Formula:
        if self.tree.marked(h, h2):
            return self.literal(h, h2)
        key = self.tree.key(h, h2)
        if key not in self._memo:
            self._memo[key] = self._challenge_formula(h, h2, key)
        return self._memo[key]

    def _challenge_formula(self, h: History, h2: History, key: Key) -> Formula:
        tree = self.tree
        if not self.solver.spoiler_wins_at(key):
            raise ValueError(f"Spoiler does not win from {h} / {h2}")
        pos = GamePosition(PAIR, len(h) - len(tree.root.h), h, h2)
        challenged = self.spoiler.choose(tree, pos)
        side = challenged.side
        left_space, right_space = tree.spaces(pos)
        conjuncts = []
        for responded in tree.children(challenged):
            half = self.spoiler.choose(tree, responded)
            picked_history = half.k2 if side == "L" else half.k
            label = tree.right.label(picked_history) if side == "L" else tree.left.label(picked_history)
            options = []
            targets = set()
            for picked in tree.children(half):
                if tree.is_marked(picked):
                    continue
                spoiled = self.spoiler.choose(tree, picked)
                if side == "L":
                    targets.add(spoiled.l2)
                    for l in left_space.successors(picked.left_values, picked.k):
                        options.append(self.distinguish(l, spoiled.l2))
                else:
                    targets.add(spoiled.l)
                    for l2 in right_space.successors(picked.right_values, picked.k2):
                        options.append(Not(self.distinguish(spoiled.l, l2)))
            if len(targets) > 1:
                self.uniform = False
            conjuncts.append(Implies(Yesterday(characteristic(self.atoms, label)), disjunction(_dedup(options))))
        formula = Coalition(tree.coalition, Next(conjunction(_dedup(conjuncts))))
        return formula if side == "L" else Not(formula)

    def extract(self) -> Formula:
        root = self.tree.root
        with get_tracer().span("game.extract", {"depth": self.tree.depth}):
            formula = as_history(self.distinguish(root.h, root.h2))
        if not self.uniform:
            logger.warning("Spoiler's successor picks depend on Duplicator's partner; the formula may not separate the roots")
        return formula


def extract_formula(result: GameResult) -> Formula:
    """A formula true at the left root and false at the right root of a Spoiler win."""
    return FormulaExtractor(result).extract()


def verify_distinguishing(
    result: GameResult,
    formula: Formula,
    semantics: str = "ck",
    bound: Optional[int] = None,
) -> Tuple[Verdict, Verdict]:
    """Check ``formula`` at both roots; it separates them when the verdicts are True and False."""
    tree = result.tree
    bound = tree.depth if bound is None else bound
    left = check(tree.left_model, tree.root.h, formula, semantics, bound)
    right = check(tree.right_model, tree.root.h2, formula, semantics, bound)
    return left, right
