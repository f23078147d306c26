"""The four-player bisimulation game: positions, solving and strategy replay."""

import json
from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from ..model import ICGS, History
from ..observability import get_logger, get_metrics_collector, get_tracer
from .context import SideContext, side_context
from .simulator import ChallengeProblem, match_sets

logger = get_logger(__name__)

Pair = Tuple[History, History]
Values = Tuple[str, ...]
Key = Tuple[int, int, int]

DUPLICATOR = "Duplicator"
SPOILER = "Spoiler"

PAIR = "pair"
CHALLENGED = "challenged"
RESPONDED = "responded"
HALF_PICKED = "half-picked"
PICKED = "picked"
SUCCESSOR_PICKED = "successor-picked"

OWNERS = {
    PAIR: "I-Spoil",
    CHALLENGED: "I-Dupl",
    RESPONDED: "P-Spoil",
    HALF_PICKED: "P-Dupl",
    PICKED: "P-Spoil",
    SUCCESSOR_PICKED: "P-Dupl",
}


@dataclass(frozen=True)
class GamePosition:
    """
    A node of the game tree. ``side`` records which model the challenge
    was issued on; ``left_values``/``right_values`` are the announced
    strategies on the left and right CKNs.
    """

    shape: str
    round: int
    h: History
    h2: History
    side: Optional[str] = None
    left_values: Optional[Values] = None
    right_values: Optional[Values] = None
    k: Optional[History] = None
    k2: Optional[History] = None
    l: Optional[History] = None
    l2: Optional[History] = None

    @property
    def owner(self) -> str:
        return OWNERS[self.shape]

    @property
    def player(self) -> str:
        return DUPLICATOR if self.owner.endswith("Dupl") else SPOILER

    def label(self) -> Dict:
        entry = {"shape": self.shape, "round": self.round, "pair": [str(self.h), str(self.h2)]}
        if self.side:
            entry["side"] = self.side
        for name in ("left_values", "right_values"):
            value = getattr(self, name)
            if value is not None:
                entry[name] = list(value)
        for name in ("k", "k2", "l", "l2"):
            value = getattr(self, name)
            if value is not None:
                entry[name] = str(value)
        return entry


class GameTree:
    """
    The game between two models for a coalition, generated lazily.

    Pair positions are cut once ``depth`` rounds have been played; the
    cut leaves are safe for Duplicator. Positions whose pair disagrees on
    labels, or falls outside the seed relation, are Spoiler wins and have
    no children.
    """

    def __init__(
        self,
        left_model: ICGS,
        right_model: ICGS,
        agents: Iterable[str],
        depth: int,
        seed: Optional[Iterable[Pair]] = None,
        root: Optional[Pair] = None,
    ):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        if set(left_model.agents) != set(right_model.agents):
            raise ValueError("both models must have the same agents")
        if root is None:
            root = (History((left_model.init,)), History((right_model.init,)))
        if len(root[0]) != len(root[1]):
            raise ValueError("root histories must have equal length")
        agents = tuple(agents)
        self.left_model = left_model
        self.right_model = right_model
        self.depth = depth
        self.max_length = len(root[0]) + depth
        self.left: SideContext = side_context(left_model, left_model.coalition(agents), self.max_length, "left")
        self.right: SideContext = side_context(right_model, right_model.coalition(agents), self.max_length, "right")
        for h, ctx in ((root[0], self.left), (root[1], self.right)):
            if h not in ctx.stratum(len(h)).ckn_id:
                raise ValueError(f"{h} is not a history of {ctx.model.name}")
        self.seed: Optional[FrozenSet[Pair]] = None if seed is None else frozenset(seed)
        self.root = GamePosition(PAIR, 0, root[0], root[1])
        self.metrics = get_metrics_collector()

    @property
    def coalition(self) -> Tuple[str, ...]:
        return self.left.coalition

    def marked(self, k: History, k2: History) -> bool:
        if self.left.label(k) != self.right.label(k2):
            return True
        return self.seed is not None and (k, k2) not in self.seed

    def is_marked(self, pos: GamePosition) -> bool:
        if pos.shape == PAIR:
            return self.marked(pos.h, pos.h2)
        if pos.shape == PICKED:
            return self.marked(pos.k, pos.k2)
        return False

    def is_leaf(self, pos: GamePosition) -> bool:
        return self.is_marked(pos) or (pos.shape == PAIR and pos.round == self.depth)

    def key(self, h: History, h2: History) -> Key:
        return (len(h), self.left.ckn_id(h), self.right.ckn_id(h2))

    def spaces(self, pos: GamePosition):
        n, left_id, right_id = self.key(pos.h, pos.h2)
        return self.left.space(n, left_id), self.right.space(n, right_id)

    def observation(self, pos: GamePosition) -> Tuple:
        """What the I-players see: the CKN product, plus announced strategies."""
        n, left_id, right_id = self.key(pos.h, pos.h2)
        seen: Tuple = ("ckn", n, left_id, right_id)
        if pos.shape == CHALLENGED:
            announced = pos.left_values if pos.side == "L" else pos.right_values
            seen += ("challenge", pos.side, announced)
        elif pos.shape == RESPONDED:
            seen += ("challenge", pos.side, pos.left_values, pos.right_values)
        return seen

    def children(self, pos: GamePosition) -> List[GamePosition]:
        if self.is_leaf(pos):
            return []
        left_space, right_space = self.spaces(pos)
        if pos.shape == PAIR:
            kids = [replace(pos, shape=CHALLENGED, side="L", left_values=v) for v in left_space.assignments()]
            kids += [replace(pos, shape=CHALLENGED, side="R", right_values=v) for v in right_space.assignments()]
        elif pos.shape == CHALLENGED:
            if pos.side == "L":
                kids = [replace(pos, shape=RESPONDED, right_values=v) for v in right_space.assignments()]
            else:
                kids = [replace(pos, shape=RESPONDED, left_values=v) for v in left_space.assignments()]
        elif pos.shape == RESPONDED:
            if pos.side == "L":
                kids = [replace(pos, shape=HALF_PICKED, k2=x) for x in right_space.histories]
            else:
                kids = [replace(pos, shape=HALF_PICKED, k=x) for x in left_space.histories]
        elif pos.shape == HALF_PICKED:
            if pos.side == "L":
                kids = [replace(pos, shape=PICKED, k=x) for x in left_space.histories]
            else:
                kids = [replace(pos, shape=PICKED, k2=x) for x in right_space.histories]
        elif pos.shape == PICKED:
            if pos.side == "L":
                kids = [replace(pos, shape=SUCCESSOR_PICKED, l2=x) for x in right_space.successors(pos.right_values, pos.k2)]
            else:
                kids = [replace(pos, shape=SUCCESSOR_PICKED, l=x) for x in left_space.successors(pos.left_values, pos.k)]
        else:
            if pos.side == "L":
                kids = [GamePosition(PAIR, pos.round + 1, x, pos.l2) for x in left_space.successors(pos.left_values, pos.k)]
            else:
                kids = [GamePosition(PAIR, pos.round + 1, pos.l, x) for x in right_space.successors(pos.right_values, pos.k2)]
        self.metrics.increment("game.positions", len(kids))
        return kids


class GameSolver:
    """
    Backward induction over CKN products. The continuation of a position
    depends only on its CKN product and round, so both players' winning
    regions are memoised per product. The two recursions share nothing
    but the tree.
    """

    def __init__(self, tree: GameTree):
        self.tree = tree
        self._dup: Dict[Key, bool] = {}
        self._spoil: Dict[Key, bool] = {}
        self.spoil_choice: Dict[Key, Tuple[str, Values]] = {}
        self._problems: Dict[Tuple[str, Key], Tuple[ChallengeProblem, ChallengeProblem]] = {}
        self.metrics = get_metrics_collector()

    def ok(self, player: str, l: History, l2: History) -> bool:
        """Whether the successor pair (l, l2) is safe for Duplicator, as judged by ``player``'s recursion."""
        if self.tree.marked(l, l2):
            return False
        key = self.tree.key(l, l2)
        if player == DUPLICATOR:
            return self.duplicator_wins_at(key)
        return not self.spoiler_wins_at(key)

    def problems(self, player: str, key: Key) -> Tuple[ChallengeProblem, ChallengeProblem]:
        if (player, key) not in self._problems:
            tree = self.tree
            n, left_id, right_id = key
            left_space, right_space = tree.left.space(n, left_id), tree.right.space(n, right_id)
            forward: Dict = defaultdict(dict)
            converse: Dict = defaultdict(dict)

            def ok(l: History, l2: History) -> bool:
                return self.ok(player, l, l2)

            for k in left_space.histories:
                for k2 in right_space.histories:
                    if tree.marked(k, k2):
                        continue
                    fwd, conv = match_sets(tree.left, tree.right, k, k2, ok)
                    forward[k][k2] = fwd
                    converse[k2][k] = conv
            self._problems[(player, key)] = (
                ChallengeProblem(left_space, right_space, forward, "any", right_space.histories),
                ChallengeProblem(right_space, left_space, converse, "any", left_space.histories),
            )
        return self._problems[(player, key)]

    def duplicator_wins_at(self, key: Key) -> bool:
        if key not in self._dup:
            if key[0] >= self.tree.max_length:
                self._dup[key] = True
            else:
                forward, converse = self.problems(DUPLICATOR, key)
                self._dup[key] = all(p.sweep(stop_at_failure=True)[1] is None for p in (forward, converse))
                self.metrics.increment("game.products")
        return self._dup[key]

    def spoiler_wins_at(self, key: Key) -> bool:
        if key not in self._spoil:
            self._spoil[key] = False
            if key[0] < self.tree.max_length:
                forward, converse = self.problems(SPOILER, key)
                for side, problem in (("L", forward), ("R", converse)):
                    failure = problem.sweep(stop_at_failure=True)[1]
                    if failure is not None:
                        self.spoil_choice[key] = (side, failure)
                        self._spoil[key] = True
                        break
        return self._spoil[key]

    def duplicator_wins(self) -> bool:
        root = self.tree.root
        return not self.tree.marked(root.h, root.h2) and self.duplicator_wins_at(self.tree.key(root.h, root.h2))

    def spoiler_wins(self) -> bool:
        root = self.tree.root
        return self.tree.marked(root.h, root.h2) or self.spoiler_wins_at(self.tree.key(root.h, root.h2))


class SolvedDuplicator:
    """Duplicator's strategy read off the solver: least answering response, first safe pick."""

    def __init__(self, solver: GameSolver):
        self.solver = solver

    def choose(self, tree: GameTree, pos: GamePosition) -> Optional[GamePosition]:
        solver = self.solver
        key = tree.key(pos.h, pos.h2)
        forward, converse = solver.problems(DUPLICATOR, key)
        left_space, right_space = tree.spaces(pos)
        if pos.shape == CHALLENGED:
            if pos.side == "L":
                answer = forward.response(pos.left_values)
                return None if answer is None else replace(pos, shape=RESPONDED, right_values=answer)
            answer = converse.response(pos.right_values)
            return None if answer is None else replace(pos, shape=RESPONDED, left_values=answer)
        if pos.shape == HALF_PICKED:
            if pos.side == "L":
                b = right_space.profile(pos.right_values, pos.k2)
                for k in left_space.histories:
                    sets = forward.match.get(k, {}).get(pos.k2)
                    if sets is not None and b in sets[left_space.profile(pos.left_values, k)]:
                        return replace(pos, shape=PICKED, k=k)
                return None
            a = left_space.profile(pos.left_values, pos.k)
            for k2 in right_space.histories:
                sets = converse.match.get(k2, {}).get(pos.k)
                if sets is not None and a in sets[right_space.profile(pos.right_values, k2)]:
                    return replace(pos, shape=PICKED, k2=k2)
            return None
        if pos.shape == SUCCESSOR_PICKED:
            if pos.side == "L":
                for l in left_space.successors(pos.left_values, pos.k):
                    if solver.ok(DUPLICATOR, l, pos.l2):
                        return GamePosition(PAIR, pos.round + 1, l, pos.l2)
                return None
            for l2 in right_space.successors(pos.right_values, pos.k2):
                if solver.ok(DUPLICATOR, pos.l, l2):
                    return GamePosition(PAIR, pos.round + 1, pos.l, l2)
            return None
        raise ValueError(f"{pos.owner} moves at {pos.shape} positions")


class SolvedSpoiler:
    """Spoiler's strategy read off the solver."""

    def __init__(self, solver: GameSolver):
        self.solver = solver

    def choose(self, tree: GameTree, pos: GamePosition) -> Optional[GamePosition]:
        solver = self.solver
        key = tree.key(pos.h, pos.h2)
        left_space, right_space = tree.spaces(pos)
        if pos.shape == PAIR:
            if not solver.spoiler_wins_at(key):
                return None
            side, values = solver.spoil_choice[key]
            if side == "L":
                return replace(pos, shape=CHALLENGED, side="L", left_values=values)
            return replace(pos, shape=CHALLENGED, side="R", right_values=values)
        forward, converse = solver.problems(SPOILER, key)
        if pos.shape == RESPONDED:
            if pos.side == "L":
                for k2, allowed in zip(right_space.histories, forward.bounds(pos.left_values)):
                    if allowed is not None and right_space.profile(pos.right_values, k2) not in allowed:
                        return replace(pos, shape=HALF_PICKED, k2=k2)
                return None
            for k, allowed in zip(left_space.histories, converse.bounds(pos.right_values)):
                if allowed is not None and left_space.profile(pos.left_values, k) not in allowed:
                    return replace(pos, shape=HALF_PICKED, k=k)
            return None
        if pos.shape == PICKED:
            pick = self.spoiling_successor(tree, pos)
            if pick is None:
                return None
            if pos.side == "L":
                return replace(pos, shape=SUCCESSOR_PICKED, l2=pick)
            return replace(pos, shape=SUCCESSOR_PICKED, l=pick)
        raise ValueError(f"{pos.owner} moves at {pos.shape} positions")

    def spoiling_successor(self, tree: GameTree, pos: GamePosition, uniform: bool = True) -> Optional[History]:
        """
        A successor on the responding side that no successor on the
        challenging side matches. With ``uniform`` it prefers one that
        defeats every partner Duplicator could have picked.
        """
        solver = self.solver
        left_space, right_space = tree.spaces(pos)
        if pos.side == "L":
            candidates = right_space.successors(pos.right_values, pos.k2)
            partners = [k for k in left_space.histories if not tree.marked(k, pos.k2)]

            def defeats(l2: History, k: History) -> bool:
                return not any(solver.ok(SPOILER, l, l2) for l in left_space.successors(pos.left_values, k))

            picked = pos.k
        else:
            candidates = left_space.successors(pos.left_values, pos.k)
            partners = [k2 for k2 in right_space.histories if not tree.marked(pos.k, k2)]

            def defeats(l: History, k2: History) -> bool:
                return not any(solver.ok(SPOILER, l, l2) for l2 in right_space.successors(pos.right_values, k2))

            picked = pos.k2
        if uniform:
            for x in candidates:
                if all(defeats(x, other) for other in partners):
                    return x
        for x in candidates:
            if defeats(x, picked):
                return x
        return None


Policy = Union[SolvedDuplicator, SolvedSpoiler]


@dataclass
class GameResult:
    """Winner of a solved game with the strategy that wins it."""

    winner: str
    determined: bool
    tree: GameTree = field(repr=False)
    solver: GameSolver = field(repr=False)

    @property
    def strategy(self) -> Policy:
        return SolvedDuplicator(self.solver) if self.winner == DUPLICATOR else SolvedSpoiler(self.solver)

    @property
    def root_challenge(self) -> Optional[Tuple[str, Values]]:
        """Spoiler's opening challenge, when Spoiler wins without a root mark."""
        root = self.tree.root
        if self.winner != SPOILER or self.tree.marked(root.h, root.h2):
            return None
        return self.solver.spoil_choice.get(self.tree.key(root.h, root.h2))

    def frontier(self) -> List[Dict]:
        """
        For each Duplicator response to the opening challenge: the
        responder history Spoiler picks and, per partner, the successor
        that defeats it.
        """
        challenge = self.root_challenge
        if challenge is None:
            return []
        side, values = challenge
        tree = self.tree
        spoiler = SolvedSpoiler(self.solver)
        root = tree.root
        left_space, right_space = tree.spaces(root)
        if side == "L":
            pos = replace(root, shape=CHALLENGED, side="L", left_values=values)
            responses = [replace(pos, shape=RESPONDED, right_values=v) for v in right_space.assignments()]
        else:
            pos = replace(root, shape=CHALLENGED, side="R", right_values=values)
            responses = [replace(pos, shape=RESPONDED, left_values=v) for v in left_space.assignments()]
        entries = []
        for responded in responses:
            half = spoiler.choose(tree, responded)
            picks = {}
            for picked in tree.children(half):
                if tree.is_marked(picked):
                    continue
                successor = spoiler.choose(tree, picked)
                partner = picked.k if side == "L" else picked.k2
                picks[partner] = successor.l2 if side == "L" else successor.l
            entries.append({
                "response": responded.right_values if side == "L" else responded.left_values,
                "picked": half.k2 if side == "L" else half.k,
                "successors": picks,
            })
        return entries

    def to_dict(self) -> Dict:
        challenge = self.root_challenge
        opening = None
        if challenge is not None:
            side, values = challenge
            space = self.tree.spaces(self.tree.root)[0 if side == "L" else 1]
            opening = {"side": side, "strategy": space.strategy(values).to_dict()}
        root = self.tree.root
        return {
            "winner": self.winner,
            "determined": self.determined,
            "depth": self.tree.depth,
            "coalition": list(self.tree.coalition),
            "root": [str(root.h), str(root.h2)],
            "root_marked": self.tree.marked(root.h, root.h2),
            "opening_challenge": opening,
        }


def build_game(
    left_model: ICGS,
    right_model: ICGS,
    agents: Iterable[str],
    depth: int,
    seed: Optional[Iterable[Pair]] = None,
    root: Optional[Pair] = None,
) -> GameTree:
    return GameTree(left_model, right_model, agents, depth, seed, root)


def solve(tree: GameTree) -> GameResult:
    """Solve both players' recursions and report the winner."""
    with get_tracer().span("game.solve", {"depth": tree.depth}):
        solver = GameSolver(tree)
        duplicator = solver.duplicator_wins()
        spoiler = solver.spoiler_wins()
    if duplicator == spoiler:
        logger.error(f"game on {tree.left_model.name} vs {tree.right_model.name} is not determined")
    winner = DUPLICATOR if duplicator else SPOILER
    logger.info(f"{tree.left_model.name} vs {tree.right_model.name}: {winner} wins at depth {tree.depth}")
    return GameResult(winner, duplicator != spoiler, tree, solver)


def check_determinacy(tree: GameTree) -> bool:
    """True iff exactly one player wins."""
    return solve(tree).determined


@dataclass
class PlayReport:
    """Outcome of replaying one player's strategy against every opposing move."""

    wins: bool
    pairs: Set[Pair] = field(default_factory=set)
    records: List[Tuple[Tuple, Values]] = field(default_factory=list)
    failure: Optional[GamePosition] = None


def explore_duplicator(tree: GameTree, policy) -> PlayReport:
    """
    Replay a Duplicator policy against all Spoiler moves. Collects the
    pair and picked positions reached and the I-Dupl choices keyed by
    observation sequence.
    """
    report = PlayReport(True)
    done: Set[Key] = set()

    def visit(pos: GamePosition, seen: Tuple) -> bool:
        seen = seen + (tree.observation(pos),)
        if pos.shape == PAIR:
            report.pairs.add((pos.h, pos.h2))
        elif pos.shape == PICKED:
            report.pairs.add((pos.k, pos.k2))
        if tree.is_marked(pos):
            report.failure = pos
            return False
        if tree.is_leaf(pos):
            return True
        if pos.shape == PAIR:
            key = tree.key(pos.h, pos.h2)
            if key in done:
                return True
            done.add(key)
        if pos.player == DUPLICATOR:
            child = policy.choose(tree, pos)
            if child is None:
                report.failure = pos
                return False
            if pos.shape == CHALLENGED:
                report.records.append((seen, child.right_values if pos.side == "L" else child.left_values))
            return visit(child, seen)
        return all(visit(child, seen) for child in tree.children(pos))

    with get_tracer().span("game.replay", {"player": DUPLICATOR}):
        report.wins = visit(tree.root, ())
    return report


def verify_duplicator(tree: GameTree, policy) -> bool:
    return explore_duplicator(tree, policy).wins


def verify_spoiler(tree: GameTree, policy) -> bool:
    """Replay a Spoiler policy against all Duplicator moves."""
    memo: Dict[Key, bool] = {}

    def visit(pos: GamePosition) -> bool:
        if tree.is_marked(pos):
            return True
        if tree.is_leaf(pos):
            return False
        if pos.shape == PAIR:
            key = tree.key(pos.h, pos.h2)
            if key not in memo:
                child = policy.choose(tree, pos)
                memo[key] = child is not None and visit(child)
            return memo[key]
        if pos.player == SPOILER:
            child = policy.choose(tree, pos)
            return child is not None and visit(child)
        return all(visit(child) for child in tree.children(pos))

    with get_tracer().span("game.replay", {"player": SPOILER}):
        return visit(tree.root)


def audit_observation_uniformity(records: Iterable[Tuple[Tuple, Values]]) -> List[str]:
    """Observation sequences that received two different I-player choices."""
    chosen: Dict[Tuple, Values] = {}
    problems = []
    for seen, choice in records:
        if seen in chosen and chosen[seen] != choice:
            problems.append(f"observation sequence {seen} answered with {chosen[seen]} and {choice}")
        chosen.setdefault(seen, choice)
    return problems


def export_trace(result: GameResult, path: Union[str, Path], limit: int = 1000) -> int:
    """
    Write the winner's play set as JSON lines, one position per line with
    the move the winner takes there. Returns the number of lines written.
    """
    tree = result.tree
    policy = result.strategy
    lines: List[str] = []

    def visit(pos: GamePosition) -> None:
        if len(lines) >= limit:
            return
        entry = pos.label()
        entry["owner"] = pos.owner
        entry["observation"] = [list(x) if isinstance(x, tuple) else x for x in tree.observation(pos)]
        entry["marked"] = tree.is_marked(pos)
        if tree.is_leaf(pos):
            lines.append(json.dumps(entry))
            return
        if pos.player == result.winner:
            child = policy.choose(tree, pos)
            entry["chosen"] = None if child is None else child.label()
            lines.append(json.dumps(entry))
            if child is not None:
                visit(child)
            return
        lines.append(json.dumps(entry))
        for child in tree.children(pos):
            if len(lines) >= limit:
                break
            visit(child)

    visit(tree.root)
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return len(lines)
