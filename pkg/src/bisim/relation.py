"""Bounded alternating bisimulation by greatest-fixpoint refinement."""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

from ..model import ICGS, History, strata
from ..observability import get_logger, get_metrics_collector, get_tracer
from .context import SideContext, side_context
from .simulator import ChallengeProblem, SimulatorTable, match_sets

logger = get_logger(__name__)

Pair = Tuple[History, History]
CONDITIONS = ("strict", "restated")
BISIMILAR = "bisimilar-to-depth"
NOT_BISIMILAR = "not-bisimilar"


@dataclass(frozen=True)
class RefinementCertificate:
    """Why a pair left the relation, and in which round."""

    condition: str
    left: History
    right: History
    round: int
    witness: Dict = field(default_factory=dict, compare=False, hash=False)

    def to_dict(self) -> Dict:
        witness = {}
        for key, value in self.witness.items():
            if isinstance(value, History):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            witness[key] = value
        return {
            "condition": self.condition,
            "left": str(self.left),
            "right": str(self.right),
            "round": self.round,
            "witness": witness,
        }


class BisimRelation:
    """
    Pairs of equal-length histories, stratified by length, over two
    unfoldings prepared for one coalition. ``depth`` counts the steps
    below the root; the deepest stratum has length ``root_length + depth``.
    """

    def __init__(
        self,
        left: SideContext,
        right: SideContext,
        depth: int,
        pairs: Dict[int, FrozenSet[Pair]],
        root_length: int = 1,
    ):
        self.left = left
        self.right = right
        self.depth = depth
        self.root_length = root_length
        self.max_length = root_length + depth
        self._pairs = {n: frozenset(pairs.get(n, ())) for n in range(1, self.max_length + 1)}
        self._products: Dict[int, Dict[Tuple[int, int], List[Pair]]] = {}

    @property
    def coalition(self) -> Tuple[str, ...]:
        return self.left.coalition

    def at(self, length: int) -> FrozenSet[Pair]:
        return self._pairs.get(length, frozenset())

    def __contains__(self, pair: Pair) -> bool:
        return pair in self._pairs.get(len(pair[0]), ())

    def __len__(self) -> int:
        return sum(len(p) for p in self._pairs.values())

    def __iter__(self) -> Iterator[Pair]:
        for n in sorted(self._pairs):
            yield from sorted(self._pairs[n])

    def products(self, length: int) -> Dict[Tuple[int, int], List[Pair]]:
        """Pairs of one stratum grouped by (left CKN, right CKN)."""
        if length not in self._products:
            grouped: Dict[Tuple[int, int], List[Pair]] = defaultdict(list)
            for k, k2 in sorted(self.at(length)):
                grouped[(self.left.ckn_id(k), self.right.ckn_id(k2))].append((k, k2))
            self._products[length] = dict(grouped)
        return self._products[length]

    def without(self, removed: Iterable[Pair]) -> "BisimRelation":
        removed = set(removed)
        pairs = {n: frozenset(p for p in ps if p not in removed) for n, ps in self._pairs.items()}
        return BisimRelation(self.left, self.right, self.depth, pairs, self.root_length)


def _contexts(left_model: ICGS, right_model: ICGS, agents: Iterable[str], max_length: int) -> Tuple[SideContext, SideContext]:
    agents = tuple(agents)
    if set(left_model.agents) != set(right_model.agents):
        raise ValueError("both models must have the same agents")
    left = side_context(left_model, left_model.coalition(agents), max_length, "left")
    right = side_context(right_model, right_model.coalition(agents), max_length, "right")
    return left, right


def initial_relation(
    left_model: ICGS,
    right_model: ICGS,
    agents: Iterable[str],
    depth: int,
    seed: Optional[Iterable[Pair]] = None,
    root_length: int = 1,
) -> BisimRelation:
    """Label-matching equal-length pairs, restricted to ``seed`` when given."""
    left, right = _contexts(left_model, right_model, agents, root_length + depth)
    seed = None if seed is None else set(seed)
    pairs = {}
    for n in range(1, root_length + depth + 1):
        by_label: Dict[FrozenSet[str], List[History]] = defaultdict(list)
        for k2 in right.stratum(n).histories:
            by_label[right.label(k2)].append(k2)
        chosen = set()
        for k in left.stratum(n).histories:
            for k2 in by_label.get(left.label(k), ()):
                if seed is None or (k, k2) in seed:
                    chosen.add((k, k2))
        pairs[n] = frozenset(chosen)
    return BisimRelation(left, right, depth, pairs, root_length)


def relation_from_pairs(
    left_model: ICGS,
    right_model: ICGS,
    agents: Iterable[str],
    depth: int,
    pairs: Iterable[Pair],
    root_length: int = 1,
) -> BisimRelation:
    """Wrap an explicit pair set, without filtering, for auditing."""
    left, right = _contexts(left_model, right_model, agents, root_length + depth)
    grouped: Dict[int, Set[Pair]] = defaultdict(set)
    for k, k2 in pairs:
        if len(k) != len(k2):
            raise ValueError(f"pair of unequal lengths: {k} / {k2}")
        if len(k) <= root_length + depth:
            grouped[len(k)].add((k, k2))
    return BisimRelation(left, right, depth, {n: frozenset(p) for n, p in grouped.items()}, root_length)


class Refinement:
    """
    Runs refinement rounds on a relation, keeping simulator tables for
    every CKN product that passed its last evaluation.

    ``conditions="restated"`` checks the strategy-transfer condition in the
    form a Duplicator win certifies: one answer per challenge such that
    every responder history has some related partner. It is monotone in
    the relation, so iterating it from the label-matching pairs reaches
    the greatest fixpoint.

    ``conditions="strict"`` adds the per-agent partner condition and asks
    one answer to serve all pairs of a CKN product jointly. That check is
    not monotone (more pairs can mean more obligations), so it only
    audits a given relation and never drives ``check_bisimulation``.
    """

    def __init__(self, relation: BisimRelation, conditions: str = "restated"):
        if conditions not in CONDITIONS:
            raise ValueError(f"unknown conditions {conditions!r}; expected one of {CONDITIONS}")
        self.relation = relation
        self.conditions = conditions
        self.tables: Dict[Tuple[str, int, int, int], SimulatorTable] = {}
        self.rounds = 0
        self.removed_round: Dict[Pair, int] = {}
        self.certificates: List[RefinementCertificate] = []
        self.logger = logger
        self.tracer = get_tracer()
        self.metrics = get_metrics_collector()

    def step(self, dirty: Optional[Set[int]] = None) -> List[RefinementCertificate]:
        """One round against the current relation; returns the removals."""
        self.rounds += 1
        rel = self.relation
        removed: Dict[Pair, RefinementCertificate] = {}
        with self.tracer.span("refine.round", {"round": self.rounds, "conditions": self.conditions}):
            for n in range(1, rel.max_length + 1):
                if not rel.at(n):
                    continue
                if dirty is None or n in dirty:
                    for pair in sorted(rel.at(n)):
                        if rel.left.label(pair[0]) != rel.right.label(pair[1]):
                            removed[pair] = RefinementCertificate(
                                "label", pair[0], pair[1], self.rounds,
                                {"left": sorted(rel.left.label(pair[0])), "right": sorted(rel.right.label(pair[1]))},
                            )
                    if self.conditions == "strict":
                        for cert in self._partner_condition(n):
                            removed.setdefault((cert.left, cert.right), cert)
                if n < rel.max_length and (dirty is None or n in dirty or n + 1 in dirty):
                    for cert in self._transfer_condition(n):
                        removed.setdefault((cert.left, cert.right), cert)
        certificates = [removed[p] for p in sorted(removed)]
        for pair in removed:
            self.removed_round[pair] = self.rounds
        self.certificates.extend(certificates)
        self.relation = rel.without(removed)
        self.metrics.increment("refinement.rounds")
        self.metrics.increment("refinement.removed", len(removed))
        self.logger.debug(f"round {self.rounds}: removed {len(removed)} pairs")
        return certificates

    def run(self) -> BisimRelation:
        dirty = None
        while True:
            certificates = self.step(dirty)
            if not certificates:
                break
            dirty = {len(c.left) for c in certificates}
        live = set()
        for n in range(1, self.relation.max_length):
            for cids in self.relation.products(n):
                live.add((n,) + cids)
        self.tables = {key: t for key, t in self.tables.items() if key[1:] in live}
        return self.relation

    def _partner_condition(self, n: int) -> List[RefinementCertificate]:
        rel = self.relation
        left, right = rel.left.stratum(n), rel.right.stratum(n)
        partners_of_right: Dict[History, Set[History]] = defaultdict(set)
        partners_of_left: Dict[History, Set[History]] = defaultdict(set)
        for k, k2 in rel.at(n):
            partners_of_right[k2].add(k)
            partners_of_left[k].add(k2)
        memo: Dict[Tuple[str, int, int], Optional[Tuple[str, History]]] = {}
        result = []
        for h, h2 in sorted(rel.at(n)):
            for agent in rel.coalition:
                key = (agent, left.class_id[agent][h], right.class_id[agent][h2])
                if key not in memo:
                    class_left = set(left.classes[agent][key[1]])
                    class_right = set(right.classes[agent][key[2]])
                    memo[key] = None
                    for k2 in sorted(class_right):
                        if not partners_of_right[k2] & class_left:
                            memo[key] = ("item2", k2)
                            break
                    if memo[key] is None:
                        for k in sorted(class_left):
                            if not partners_of_left[k] & class_right:
                                memo[key] = ("converse2", k)
                                break
                if memo[key] is not None:
                    condition, unmatched = memo[key]
                    result.append(RefinementCertificate(
                        condition, h, h2, self.rounds, {"agent": agent, "unmatched": unmatched},
                    ))
                    break
        return result

    def problems(self, n: int, cids: Tuple[int, int], pairs: List[Pair]) -> Tuple[ChallengeProblem, ChallengeProblem]:
        """Forward and converse transfer problems of one CKN product."""
        rel = self.relation
        deeper = rel.at(n + 1)

        def ok(l: History, l2: History) -> bool:
            return (l, l2) in deeper

        forward: Dict = defaultdict(dict)
        converse: Dict = defaultdict(dict)
        for k, k2 in pairs:
            fwd, conv = match_sets(rel.left, rel.right, k, k2, ok)
            forward[k][k2] = fwd
            converse[k2][k] = conv
        space_left = rel.left.space(n, cids[0])
        space_right = rel.right.space(n, cids[1])
        if self.conditions == "strict":
            return (
                ChallengeProblem(space_left, space_right, forward, "all"),
                ChallengeProblem(space_right, space_left, converse, "all"),
            )
        return (
            ChallengeProblem(space_left, space_right, forward, "any", space_right.histories),
            ChallengeProblem(space_right, space_left, converse, "any", space_left.histories),
        )

    def _transfer_condition(self, n: int) -> List[RefinementCertificate]:
        rel = self.relation
        result = []
        for cids, pairs in sorted(rel.products(n).items()):
            forward, converse = self.problems(n, cids, pairs)
            failed = None
            for direction, problem in (("forward", forward), ("converse", converse)):
                entries, failure, relevant = problem.sweep(stop_at_failure=True)
                if failure is not None:
                    failed = (direction, problem, failure)
                    break
                self.tables[(direction, n) + cids] = SimulatorTable(
                    direction, n, problem.challenger, problem.responder, relevant, entries,
                )
            if failed is None:
                continue
            direction, problem, failure = failed
            for key in [("forward", n) + cids, ("converse", n) + cids]:
                self.tables.pop(key, None)
            condition = "item3" if direction == "forward" else "converse3"
            for k, k2 in pairs:
                result.append(RefinementCertificate(
                    condition, k, k2, self.rounds,
                    {
                        "challenge": failure,
                        "strategy": problem.challenger.strategy(failure).to_dict(),
                        "ckn_left": rel.left.ckn_members(n, cids[0])[0],
                        "ckn_right": rel.right.ckn_members(n, cids[1])[0],
                    },
                ))
        return result


def refine(relation: BisimRelation, conditions: str = "restated") -> Tuple[BisimRelation, List[RefinementCertificate]]:
    """One refinement round over every stratum."""
    engine = Refinement(relation, conditions)
    certificates = engine.step()
    return engine.relation, certificates


@dataclass
class BisimResult:
    """Fixpoint of refinement with its simulator tables and certificates."""

    verdict: str
    root: Pair
    depth: int
    relation: BisimRelation
    initial: BisimRelation
    tables: Dict[Tuple[str, int, int, int], SimulatorTable]
    certificates: List[RefinementCertificate]
    removed_round: Dict[Pair, int]
    rounds: int
    strict_violations: Optional[List[RefinementCertificate]] = None

    @property
    def bisimilar(self) -> bool:
        return self.verdict == BISIMILAR

    def root_certificate(self) -> Optional[RefinementCertificate]:
        for cert in self.certificates:
            if (cert.left, cert.right) == self.root:
                return cert
        return None

    def to_dict(self, limit: int = 20) -> Dict:
        root_cert = self.root_certificate()
        out = {
            "verdict": self.verdict,
            "depth": self.depth,
            "coalition": list(self.relation.coalition),
            "root": [str(self.root[0]), str(self.root[1])],
            "rounds": self.rounds,
            "relation_size": len(self.relation),
            "initial_size": len(self.initial),
            "tables": len(self.tables),
            "root_certificate": root_cert.to_dict() if root_cert else None,
            "certificates": [c.to_dict() for c in self.certificates[:limit]],
            "certificate_count": len(self.certificates),
        }
        if self.strict_violations is not None:
            out["strict_audit"] = {
                "violations": len(self.strict_violations),
                "certificates": [c.to_dict() for c in self.strict_violations[:limit]],
            }
        return out


def check_bisimulation(
    left_model: ICGS,
    right_model: ICGS,
    agents: Iterable[str],
    depth: int,
    seed: Optional[Iterable[Pair]] = None,
    root: Optional[Pair] = None,
    strict_audit: bool = False,
) -> BisimResult:
    """
    Refine from the label-matching (seeded) relation to stability. The root
    defaults to the pair of initial-state histories.

    With ``strict_audit`` the fixpoint relation is also audited under the
    strict conditions; the findings are reported, the verdict is not
    affected.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if root is None:
        root = (History((left_model.init,)), History((right_model.init,)))
    if len(root[0]) != len(root[1]):
        raise ValueError("root histories must have equal length")
    with get_tracer().span("bisim.refine", {"depth": depth}):
        initial = initial_relation(left_model, right_model, agents, depth, seed, len(root[0]))
        if root[0] not in initial.left.stratum(len(root[0])).ckn_id:
            raise ValueError(f"{root[0]} is not a history of {left_model.name}")
        if root[1] not in initial.right.stratum(len(root[1])).ckn_id:
            raise ValueError(f"{root[1]} is not a history of {right_model.name}")
        engine = Refinement(initial)
        final = engine.run()
        strict = audit_relation(final, "strict") if strict_audit else None
    certificates = list(engine.certificates)
    if root not in initial:
        reason = "label" if left_model.label(root[0].last) != right_model.label(root[1].last) else "seed"
        certificates.insert(0, RefinementCertificate(reason, root[0], root[1], 0, {
            "left": sorted(left_model.label(root[0].last)),
            "right": sorted(right_model.label(root[1].last)),
        }))
    verdict = BISIMILAR if root in final else NOT_BISIMILAR
    logger.info(f"{left_model.name} vs {right_model.name}: {verdict} after {engine.rounds} rounds")
    return BisimResult(
        verdict, root, depth, final, initial, engine.tables,
        certificates, dict(engine.removed_round), engine.rounds, strict,
    )


def relation_at_round(result: BisimResult, round_index: int) -> BisimRelation:
    """The relation as it stood at the start of ``round_index``."""
    gone = {p for p, r in result.removed_round.items() if r < round_index}
    return result.initial.without(gone)


def replay_certificate(result: BisimResult, certificate: RefinementCertificate) -> bool:
    """Re-evaluate a removal against the relation of its round."""
    pair = (certificate.left, certificate.right)
    if certificate.condition in ("label", "seed"):
        labels_differ = result.initial.left.label(pair[0]) != result.initial.right.label(pair[1])
        return labels_differ if certificate.condition == "label" else pair not in result.initial
    rel = relation_at_round(result, certificate.round)
    if pair not in rel:
        return False
    n = len(pair[0])
    witness = certificate.witness
    if certificate.condition in ("item2", "converse2"):
        agent = witness["agent"]
        unmatched = witness["unmatched"]
        left, right = rel.left.stratum(n), rel.right.stratum(n)
        class_left = set(left.classes[agent][left.class_id[agent][pair[0]]])
        class_right = set(right.classes[agent][right.class_id[agent][pair[1]]])
        if certificate.condition == "item2":
            return unmatched in class_right and not any((k, unmatched) in rel for k in class_left)
        return unmatched in class_left and not any((unmatched, k2) in rel for k2 in class_right)
    cids = (rel.left.ckn_id(pair[0]), rel.right.ckn_id(pair[1]))
    engine = Refinement(rel)
    forward, converse = engine.problems(n, cids, rel.products(n)[cids])
    problem = forward if certificate.condition == "item3" else converse
    return problem.response(witness["challenge"]) is None


def audit_relation(target: Union[BisimResult, BisimRelation], mode: str = "restated") -> List[RefinementCertificate]:
    """
    Re-check every pair of a relation against the label, partner and
    transfer conditions; empty iff one refinement round removes nothing.
    """
    relation = target.relation if isinstance(target, BisimResult) else target
    engine = Refinement(relation, mode)
    return engine.step()


def functional_relation(
    left_model: ICGS,
    depth: int,
    mapping: Callable[[History], Optional[History]],
    root_length: int = 1,
) -> FrozenSet[Pair]:
    """Seed pairs (h, mapping(h)) for every left history up to the depth."""
    pairs = set()
    for layer in strata(left_model, root_length + depth - 1):
        for h in layer:
            image = mapping(h)
            if image is not None:
                pairs.add((h, image))
    return frozenset(pairs)
