"""The three-agent game simulating a Turing machine run."""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from ..model import ICGS, build_icgs
from ..observability import get_logger, get_metrics_collector, get_tracer
from .figures import BRANCHING, PICKS
from .turing import TMSpec

logger = get_logger(__name__)

IDLE = "i"
Pair = Tuple[str, str]

FIXED = ("s_init", "s_init'", "s_lb", "s_lb'", "s_gen", "s_tr")
WAITING = ("s_bot1", "s_bot2", "s_bot3", "s_bot4")


def cell(phase: int, symbol: str) -> str:
    return f"s{phase}_{symbol}"


def head(state: str, symbol: str) -> str:
    return f"s_{state}_{symbol}"


def frontier(phase: int) -> str:
    return f"s{phase}_tr"


def move(label: str) -> str:
    return "s_" + label.replace("-", "_")


@dataclass(frozen=True)
class TMEncoding:
    """
    The encoded game together with what the correspondence to the simple
    game needs: the group each state belongs to, the ambiguous states and
    the unique error-free pair of agents 1 and 2 at the others.
    """

    tm: TMSpec
    model: ICGS
    groups: Dict[str, str]
    ambiguous: FrozenSet[str]
    correct: Dict[str, Optional[Pair]]


def _routes(tm: TMSpec) -> Tuple[Dict[str, Dict[Pair, Tuple[str, ...]]], Dict[str, str]]:
    """
    Error-free moves of agents 1 and 2 per state. A pair maps to one target,
    or to one target per agent-3 pick at the branching states. ``fallback``
    names where the remaining pairs go when that is not s_err.
    """
    ii = (IDLE, IDLE)
    table = tm.table
    routes: Dict[str, Dict[Pair, Tuple[str, ...]]] = defaultdict(dict)
    fallback: Dict[str, str] = {}

    routes["s_init"][ii] = ("s_gen", "s_init'")
    routes["s_init'"][ii] = ("s_lb",)
    routes["s_lb"][(IDLE, tm.init)] = ("s_lb'",)
    routes["s_lb'"][ii] = ("s_lb'",)
    routes["s_gen"][ii] = ("s_tr", cell(0, tm.blank))
    routes["s_tr"][ii] = ("s_gen", frontier(1))

    for z in tm.alphabet:
        hub = cell(0, z)
        routes[hub][ii] = (cell(1, z),)
        if z == tm.blank:
            routes[hub][(IDLE, tm.init)] = (head(tm.init, z),)
        for t in table.values():
            arriving = (t.label, IDLE) if t.move == "L" else (IDLE, t.label)
            routes[hub][arriving] = (head(t.next, z),)
        fallback[hub] = "s_bot1"
        routes[cell(1, z)][ii] = (hub,)

    for q in tm.states:
        for z in tm.alphabet:
            t = table.get((q, z))
            routes[head(q, z)]
            if t is not None:
                leaving = (t.label, IDLE) if t.move == "R" else (IDLE, t.label)
                routes[head(q, z)][leaving] = (cell(0, t.write),)

    routes[frontier(1)][ii] = (frontier(0),)
    routes[frontier(0)][ii] = (frontier(1),)
    fallback[frontier(1)] = "s_bot3"
    for label in tm.labels:
        if label.endswith("-R"):
            routes[frontier(1)][(label, IDLE)] = (move(label),)
            routes[move(label)][(IDLE, label)] = (frontier(1),)
        else:
            routes[frontier(1)][(IDLE, label)] = (move(label),)
            routes[move(label)][(label, IDLE)] = (frontier(1),)

    routes["s_bot1"][ii] = ("s_bot2",)
    fallback["s_bot2"] = "s_bot1"
    routes["s_bot3"][ii] = ("s_bot4",)
    fallback["s_bot4"] = "s_bot3"
    return routes, fallback


def _states(tm: TMSpec) -> List[str]:
    states = list(FIXED)
    for z in tm.alphabet:
        states += [cell(0, z), cell(1, z)]
    states += [head(q, z) for q in tm.states for z in tm.alphabet]
    states += [frontier(0), frontier(1)]
    states += [move(label) for label in tm.labels]
    return states + list(WAITING) + ["s_err"]


def _groups(tm: TMSpec) -> Dict[str, str]:
    groups = {s: s for s in FIXED + ("s_err",)}
    for z in tm.alphabet:
        groups[cell(0, z)] = "s_amb1"
        groups[cell(1, z)] = "s_namb1"
    for q in tm.states:
        for z in tm.alphabet:
            groups[head(q, z)] = "s_namb1"
    groups[frontier(1)] = "s_amb2"
    groups[frontier(0)] = "s_namb2"
    for label in tm.labels:
        groups[move(label)] = "s_namb2"
    groups.update({"s_bot1": "s_namb1", "s_bot2": "s_amb1", "s_bot3": "s_namb2", "s_bot4": "s_amb2"})
    return groups


def tm_encoding(tm: TMSpec) -> TMEncoding:
    """Encode ``tm`` and keep the bookkeeping the correspondence needs."""
    with get_tracer().span("reduction.encode", {"states": len(tm.states), "transitions": len(tm.delta)}):
        agents = ["1", "2", "3"]
        states = _states(tm)
        acts = [IDLE, tm.init] + tm.labels
        routes, fallback = _routes(tm)

        protocol = {}
        transitions = []
        for s in states:
            own = [IDLE] if s == "s_err" else acts
            picks = PICKS if s in BRANCHING else PICKS[:1]
            protocol[("1", s)] = own
            protocol[("2", s)] = own
            protocol[("3", s)] = picks
            for a1 in own:
                for a2 in own:
                    for n, pick in enumerate(picks):
                        targets = routes.get(s, {}).get((a1, a2))
                        if targets is None:
                            target = fallback.get(s, "s_err")
                        else:
                            target = targets[n] if len(targets) > 1 else targets[0]
                        transitions.append((s, (a1, a2, pick), target))

        model = build_icgs(
            agents,
            states,
            "s_init",
            protocol,
            transitions,
            obs={
                "1": [["s_gen"], ["s_err"], [s for s in states if s not in ("s_gen", "s_err")]],
                "2": [["s_tr"], ["s_err"], [s for s in states if s not in ("s_tr", "s_err")]],
            },
            labels={"s_err": ["err"]},
            atoms=["err"],
            name="tm",
        )
    ambiguous = frozenset(fallback)
    correct: Dict[str, Optional[Pair]] = {}
    for s in states:
        if s in ambiguous or s == "s_err":
            continue
        pairs = list(routes.get(s, {}))
        correct[s] = pairs[0] if pairs else None
    get_metrics_collector().gauge("reduction.states", len(states))
    logger.info(f"Encoded machine as a game with {len(states)} states and {len(transitions)} transitions")
    return TMEncoding(tm, model, _groups(tm), ambiguous, correct)


def encode_tm(tm: TMSpec) -> ICGS:
    """The game whose agents 1 and 2 can avoid s_err forever iff ``tm`` never halts."""
    return tm_encoding(tm).model
