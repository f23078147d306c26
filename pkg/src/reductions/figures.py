"""Built-in example models."""

from itertools import product
from typing import Callable, Dict, List, Tuple

from ..model import ICGS, build_icgs

Transition = Tuple[str, Tuple[str, ...], str]


def _complete(
    states: List[str],
    agents: List[str],
    protocol: Dict[Tuple[str, str], List[str]],
    route: Callable[[str, Tuple[str, ...]], str],
) -> List[Transition]:
    """One transition per enabled joint action, sent wherever ``route`` says."""
    transitions = []
    for s in states:
        for joint in product(*(sorted(protocol[(a, s)]) for a in agents)):
            transitions.append((s, joint, route(s, joint)))
    return transitions


def coordination() -> ICGS:
    """
    Two agents must meet: agent 1 goes (g) or waits (w), agent 2 picks a
    meeting place (3 or 4). Agent 1 confuses s1 with s2, agent 2 s2 with
    s3. Success s holds at s4, failure f at s5.
    """
    agents = ["1", "2"]
    states = ["s1", "s2", "s3", "s4", "s5"]
    protocol = {}
    for s in states:
        protocol[("1", s)] = ["g", "w"]
        protocol[("2", s)] = ["3", "4"]
    winning = {("s1", ("g", "4")), ("s2", ("g", "3")), ("s2", ("w", "4")), ("s3", ("g", "4"))}

    def route(s, joint):
        if s in ("s4", "s5"):
            return s
        return "s4" if (s, joint) in winning else "s5"

    return build_icgs(
        agents,
        states,
        "s1",
        protocol,
        _complete(states, agents, protocol, route),
        obs={"1": [["s1", "s2"]], "2": [["s2", "s3"]]},
        labels={"s4": ["s"], "s5": ["f"]},
        atoms=["f", "s"],
        initial=["s1", "s2", "s3"],
        name="coordination",
    )


def _hennessy_milner(prime: str, winning: Dict[str, List[Tuple[str, str]]], name: str) -> ICGS:
    agents = ["1", "2"]
    q = [f"q{n}{prime}" for n in range(1, 5)]
    top, bot = f"q_top{prime}", f"q_bot{prime}"
    states = q + [top, bot]
    protocol = {}
    for s in states:
        protocol[("1", s)] = ["a", "b", "c"]
        protocol[("2", s)] = ["x", "y", "z"]

    def route(s, joint):
        if s in (top, bot):
            return s
        return top if joint in winning[s] else bot

    return build_icgs(
        agents,
        states,
        q[0],
        protocol,
        _complete(states, agents, protocol, route),
        obs={"1": [[q[0], q[1]], [q[2], q[3]]], "2": [[q[1], q[2]]]},
        labels={top: ["p"]},
        atoms=["p"],
        initial=q,
        name=name,
    )


def hm_left() -> ICGS:
    """Every q_i reaches q_top with (a,x) and with (b,y)."""
    both = [("a", "x"), ("b", "y")]
    return _hennessy_milner("", {f"q{n}": both for n in range(1, 5)}, "hm-left")


def hm_right() -> ICGS:
    """Like hm-left, except q1' only wins with (a,x) and q4' only with (b,y)."""
    both = [("a", "x"), ("b", "y")]
    winning = {"q1'": [("a", "x")], "q2'": both, "q3'": both, "q4'": [("b", "y")]}
    return _hennessy_milner("'", winning, "hm-right")


SIMPLE_STATES = [
    "s_init", "s_init'", "s_lb", "s_lb'", "s_gen", "s_tr",
    "s_amb1", "s_amb2", "s_namb1", "s_namb2", "s_err",
]
BRANCHING = ("s_init", "s_gen", "s_tr")
PICKS = ["pick0", "pick1"]


def simple() -> ICGS:
    """
    The simple game: from s_init, agent 3 resolves the branching toward
    the left-bound chain or the generator; every non-ambiguous state
    needs (ok, ok) to stay clear of s_err, ambiguous states accept any
    joint action.
    """
    agents = ["1", "2", "3"]
    states = SIMPLE_STATES
    protocol = {}
    for s in states:
        for agent in ("1", "2"):
            protocol[(agent, s)] = ["ok"] if s == "s_err" else ["nok", "ok"]
        protocol[("3", s)] = PICKS if s in BRANCHING else ["pick0"]
    forced = {
        ("s_init", "pick0"): "s_gen",
        ("s_init", "pick1"): "s_init'",
        ("s_gen", "pick0"): "s_tr",
        ("s_gen", "pick1"): "s_amb1",
        ("s_tr", "pick0"): "s_gen",
        ("s_tr", "pick1"): "s_amb2",
        ("s_init'", "pick0"): "s_lb",
        ("s_lb", "pick0"): "s_lb'",
        ("s_lb'", "pick0"): "s_lb'",
        ("s_namb1", "pick0"): "s_amb1",
        ("s_namb2", "pick0"): "s_amb2",
    }

    def route(s, joint):
        if s == "s_err":
            return s
        if s == "s_amb1":
            return "s_namb1"
        if s == "s_amb2":
            return "s_namb2"
        if joint[:2] == ("ok", "ok"):
            return forced[(s, joint[2])]
        return "s_err"

    return build_icgs(
        agents,
        states,
        "s_init",
        protocol,
        _complete(states, agents, protocol, route),
        obs={
            "1": [["s_gen"], ["s_err"], [s for s in states if s not in ("s_gen", "s_err")]],
            "2": [["s_tr"], ["s_err"], [s for s in states if s not in ("s_tr", "s_err")]],
        },
        labels={"s_err": ["err"]},
        atoms=["err"],
        name="simple",
    )
