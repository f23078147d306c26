"""Desk-scale acceptance run.

Runs the example checks, the Hennessy-Milner counterexample with formula
extraction, the simple-game strategy count, the machine reduction and the
random-model property suites, then writes one row per check to
``evaluation/results.csv`` and the full table to ``evaluation/results.json``.
"""

import json
import time
from pathlib import Path

import numpy as np
import pandas as pd

from src.bisim import (
    DUPLICATOR,
    SPOILER,
    audit_duplicator_relation,
    build_game,
    check_bisimulation,
    check_determinacy,
    duplicator_from_relation,
    extract_formula,
    solve,
    verify_distinguishing,
    verify_duplicator,
)
from src.logic import Truth, check, parse_formula
from src.model import History
from src.observability import get_metrics_collector, get_tracer, setup_logger
from src.reductions import (
    chi_bisimulation,
    coordination,
    expected_runs,
    good_runs,
    halting_correspondence,
    halting_machine,
    hm_left,
    hm_right,
    simple,
    simulate_tm,
    table1_machine,
    tm_encoding,
)
from src.strategies import count_safe_strategies
from src.utils.helpers import random_formula, random_model, random_renaming

logger = setup_logger("icgs.evaluation", log_level="INFO")

COALITIONS = (("1",), ("2",), ("1", "2"))
SEMANTICS = ("obj", "subj", "ck")


def _row(name: str, expected, observed, start: float) -> dict:
    return {
        "check": name,
        "expected": str(expected),
        "observed": str(observed),
        "passed": expected == observed,
        "seconds": round(time.perf_counter() - start, 4),
    }


def coordination_checks():
    model = coordination()
    formula = parse_formula("<<1,2>> X s")
    for semantics, expected in (("subj", Truth.TRUE), ("obj", Truth.TRUE), ("ck", Truth.FALSE)):
        start = time.perf_counter()
        verdict = check(model, History(("s1",)), formula, semantics, 2)
        yield _row(f"coordination {semantics}", expected, verdict.value, start)


def hennessy_milner_checks():
    start = time.perf_counter()
    result = solve(build_game(hm_left(), hm_right(), ["1", "2"], 2))
    yield _row("hm game winner", SPOILER, result.winner, start)
    refined = check_bisimulation(hm_left(), hm_right(), ["1", "2"], 2)
    yield _row("hm refinement agrees", result.winner == DUPLICATOR, refined.bisimilar, start)
    start = time.perf_counter()
    formula = extract_formula(result)
    left, right = verify_distinguishing(result, formula)
    yield _row("hm formula separates", (Truth.TRUE, Truth.FALSE), (left.value, right.value), start)


def simple_game_checks():
    for depth in (2, 3, 4):
        start = time.perf_counter()
        count = count_safe_strategies(simple(), ["1", "2"], [History(("s_init",))], depth)
        yield _row(f"simple avoiding strategies depth {depth}", 1, count, start)


def reduction_checks():
    start = time.perf_counter()
    yield _row("table1 runs 10^4 steps", False, simulate_tm(table1_machine(), 10_000).halted, start)
    encoding = tm_encoding(table1_machine())
    start = time.perf_counter()
    yield _row("table1 good runs depth 9", expected_runs(encoding.tm, 9), good_runs(encoding, 9), start)
    start = time.perf_counter()
    yield _row("table1 chi bisimulation depth 3", True, chi_bisimulation(encoding, 3).bisimilar, start)
    for tm, name in ((table1_machine(), "table1"), (halting_machine(), "halting")):
        start = time.perf_counter()
        rows = halting_correspondence(tm_encoding(tm), range(0, 12))
        yield _row(f"{name} avoidance matches run", True, all(r["matches_prediction"] for r in rows), start)


def property_checks(n_models: int = 50, seed: int = 7):
    """
    Models have at most three states. Each model takes the next coalition
    in turn; single agents run the renamed-copy round trip at depth 3, the
    full coalition at depth 2.
    """
    rng = np.random.default_rng(seed)
    determined = agreed = renamed = translated = monotone = 0
    start = time.perf_counter()
    for i in range(n_models):
        coalition = list(COALITIONS[i % len(COALITIONS)])
        depth = 2 if len(coalition) > 1 else 3
        left, right = random_model(rng, max_states=3), random_model(rng, max_states=3)
        tree = build_game(left, right, coalition, 2)
        determined += check_determinacy(tree)
        agreed += check_bisimulation(left, right, coalition, 2).bisimilar == (solve(tree).winner == DUPLICATOR)

        copy = random_renaming(left, rng)
        root = (History((left.init,)), History((copy.init,)))
        result = check_bisimulation(left, copy, coalition, depth, root=root)
        renamed += result.bisimilar

        game = build_game(left, copy, coalition, depth, root=root)
        solved = solve(game)
        translated += (
            result.bisimilar
            and verify_duplicator(game, duplicator_from_relation(result))
            and solved.winner == DUPLICATOR
            and not audit_duplicator_relation(game, solved.strategy)
        )

        for _ in range(20):
            formula = random_formula(rng, coalition, ["p", "q"], 2)
            ok = True
            for s in SEMANTICS:
                verdict = check(left, root[0], formula, s, 2)
                ok = ok and check(copy, root[1], formula, s, 2).value == verdict.value
                ok = ok and (not verdict.value.decided or check(left, root[0], formula, s, 3).value == verdict.value)
            monotone += ok
    yield _row("determinacy", n_models, determined, start)
    yield _row("refinement agrees with game", n_models, agreed, start)
    yield _row("renamed copy bisimilar", n_models, renamed, start)
    yield _row("relation/duplicator round trip", n_models, translated, start)
    yield _row("preservation and bound monotonicity", n_models * 20, monotone, start)


def main():
    rows = []
    metrics = get_metrics_collector()
    for suite in (coordination_checks, hennessy_milner_checks, simple_game_checks, reduction_checks, property_checks):
        logger.info(f"Running {suite.__name__}")
        with metrics.timed(f"evaluation.{suite.__name__}"):
            rows.extend(suite())
    df = pd.DataFrame(rows)
    out_dir = Path(__file__).resolve().parent
    df.to_csv(out_dir / "results.csv", index=False)
    with open(out_dir / "results.json", "w") as f:
        json.dump(
            {
                "results": df.to_dict(orient="records"),
                "metrics": metrics.get_summary(),
                "trace": get_tracer().get_trace_summary(),
            },
            f, default=str, indent=2,
        )
    print(df.to_string(index=False))
    failed = df[~df["passed"]]
    if not failed.empty:
        print(f"\n{len(failed)} check(s) failed")
    return 0 if failed.empty else 1


if __name__ == "__main__":
    raise SystemExit(main())
