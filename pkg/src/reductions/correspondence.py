"""Relating the machine game to the simple game and to the machine's run."""

from functools import partial
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from ..bisim import BisimResult, SimulatorTable, check_bisimulation, functional_relation, side_context, simulator_from_map
from ..model import History
from ..observability import get_logger, get_tracer
from ..strategies import safe_strategies
from .encoding import IDLE, TMEncoding, cell, frontier, head, move
from .figures import simple
from .turing import TMSpec, simulate_tm

logger = get_logger(__name__)

COALITION = ("1", "2")
Run = Tuple[str, ...]


def chi_action(encoding: TMEncoding, state: str, agent: str, action: str) -> str:
    """
    The simple-game action standing for ``action`` at ``state``: ok exactly
    when it is the agent's share of the one error-free pair, or when it is
    idling at an ambiguous state.
    """
    if agent == "3":
        return action
    if state == "s_err":
        return "ok"
    if state in encoding.ambiguous:
        return "ok" if action == IDLE else "nok"
    pair = encoding.correct.get(state)
    if pair is None:
        return "nok"
    return "ok" if action == pair[int(agent) - 1] else "nok"


def chi_map(encoding: TMEncoding, h: History) -> History:
    """The image of a machine-game history in the simple game."""
    agents = encoding.model.agents
    joints = tuple(
        tuple(chi_action(encoding, s, agent, a) for agent, a in zip(agents, joint))
        for s, joint in zip(h.states, h.actions)
    )
    return History(tuple(encoding.groups[s] for s in h.states), joints)


def chi_relation(encoding: TMEncoding, depth: int) -> FrozenSet[Tuple[History, History]]:
    return functional_relation(encoding.model, depth, partial(chi_map, encoding))


def chi_bisimulation(encoding: TMEncoding, depth: int) -> BisimResult:
    """Refine the relation induced by the history map against the simple game."""
    return check_bisimulation(encoding.model, simple(), COALITION, depth, seed=chi_relation(encoding, depth))


def chi_simulators(encoding: TMEncoding, depth: int) -> List[SimulatorTable]:
    """
    Forward simulator tables read off the history map: on each CKN of the
    machine game, a challenge is answered in the CKN of its image by
    translating the challenger's choice at a preimage.
    """
    right_model = simple()
    max_length = 1 + depth
    left = side_context(encoding.model, encoding.model.coalition(COALITION), max_length, "left")
    right = side_context(right_model, right_model.coalition(COALITION), max_length, "right")
    coalition = left.coalition

    def translate(k: History, profile: Tuple[str, ...]) -> Tuple[str, ...]:
        return tuple(chi_action(encoding, k.last, agent, a) for agent, a in zip(coalition, profile))

    tables = []
    with get_tracer().span("reduction.simulators", {"depth": depth}):
        for n in range(1, max_length):
            stratum = left.stratum(n)
            for cid, members in enumerate(stratum.members):
                preimages: Dict[History, History] = {}
                for h in members:
                    preimages.setdefault(chi_map(encoding, h), h)
                responder = right.space(n, right.ckn_id(chi_map(encoding, members[0])))
                tables.append(simulator_from_map(stratum.spaces[cid], responder, preimages.get, translate))
    logger.info(f"Built {len(tables)} simulator tables from the history map up to depth {depth}")
    return tables


def _start() -> List[History]:
    return [History(("s_init",))]


def good_runs(encoding: TMEncoding, depth: int) -> Optional[List[Run]]:
    """
    State sequences reached by the first error-avoiding strategy of agents
    1 and 2 over ``depth`` steps, or None when there is none.
    """
    first = next(iter(safe_strategies(encoding.model, COALITION, _start(), depth)), None)
    if first is None:
        return None
    return sorted({h.states for h in first.reached})


def expected_runs(tm: TMSpec, depth: int) -> Optional[List[Run]]:
    """
    The run prefixes of length ``depth + 1`` that simulate ``tm``: the
    left-bound run, the generator run, one run per tape cell and one per
    frontier between neighbouring cells. None when the machine halts too
    early for the run to survive ``depth`` steps.
    """
    trace = simulate_tm(tm, max(0, depth // 2))
    if trace.halted and depth >= 2 * trace.steps + 4:
        return None
    configs = trace.configurations
    moves = [tm.step(c.state, c.read(tm.blank)) for c in configs[:-1]]

    def generator(length: int) -> List[str]:
        return ["s_init"] + ["s_gen" if j % 2 else "s_tr" for j in range(1, length)]

    runs = [tuple(generator(depth + 1))]
    runs.append(tuple((["s_init", "s_init'", "s_lb"] + ["s_lb'"] * depth)[:depth + 1]))
    for n in range(0, (depth - 2) // 2 + 1):
        run = generator(2 * n + 2)
        for j in range(2 * n + 2, depth + 1):
            k = (j - 2) // 2 if j % 2 == 0 else (j - 3) // 2
            c = configs[k]
            z = c.tape.get(n, tm.blank)
            if j % 2 == 0:
                run.append(cell(0, z))
            elif c.head == n:
                run.append(head(c.state, z))
            else:
                run.append(cell(1, z))
        runs.append(tuple(run))
    for n in range(1, (depth - 1) // 2 + 1):
        run = generator(2 * n + 1) + [frontier(1)]
        for j in range(2 * n + 2, depth + 1):
            if j % 2:
                run.append(frontier(1))
                continue
            t = moves[(j - 4) // 2]
            source = configs[(j - 4) // 2].head
            crossing = source == n - 1 if t.move == "R" else source == n
            run.append(move(t.label) if crossing else frontier(0))
        runs.append(tuple(run))
    return sorted(set(runs))


def avoidable(model, depth: int) -> bool:
    return next(iter(safe_strategies(model, COALITION, _start(), depth)), None) is not None


def failure_depth(tm: TMSpec, max_steps: int) -> Optional[int]:
    """The first depth at which s_err can no longer be avoided, if the machine halts in time."""
    trace = simulate_tm(tm, max_steps)
    return 2 * trace.steps + 4 if trace.halted else None


def halting_correspondence(encoding: TMEncoding, depths: Iterable[int]) -> List[Dict]:
    """
    Per depth: whether agents 1 and 2 can avoid s_err in the machine game,
    whether the machine's run predicts it, and whether the simple game
    (where avoidance always succeeds) agrees.
    """
    simple_model = simple()
    depths = sorted(set(depths))
    predicted_at = failure_depth(encoding.tm, max(depths, default=0))
    rows = []
    with get_tracer().span("reduction.halting", {"depths": len(depths)}):
        for d in depths:
            tm_ok = avoidable(encoding.model, d)
            simple_ok = avoidable(simple_model, d)
            predicted = predicted_at is None or d < predicted_at
            rows.append({
                "depth": d,
                "avoidable": tm_ok,
                "predicted": predicted,
                "simple_avoidable": simple_ok,
                "matches_prediction": tm_ok == predicted,
                "matches_simple": tm_ok == simple_ok,
            })
            logger.debug(f"depth {d}: avoidable={tm_ok} predicted={predicted}")
    return rows
