"""Coordinator that runs the verification commands and assembles their reports."""

import time
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Optional, Tuple

from dotenv import load_dotenv

from . import __version__
from .bisim import (
    DUPLICATOR,
    build_game,
    check_bisimulation,
    dump_relation,
    export_trace,
    extract_formula,
    load_relation,
    solve,
    verify_distinguishing,
)
from .exceptions import ConsistencyError, ICGSError, LimitExceededError, ModelFormatError
from .logic import Truth, check, format_formula, parse_formula
from .model import ICGS, History, dump_model, load_model, parse_history, strata, validate
from .observability import get_metrics_collector, get_tracer, setup_logger
from .reductions import BUILTIN_MODELS, builtin_example, builtin_machine, halting_correspondence, load_tm, tm_encoding
from .reductions.turing import BUILTIN_MACHINES
from .utils.helpers import file_digest

load_dotenv()

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3


class VerificationCoordinator:
    """
    Runs one command per call and returns a result dictionary.

    Every result carries ``success`` and ``exit_code``; successful ones add
    the command's inputs (with file hashes), parameters, verdict payload,
    wall-clock time, tool version and the metrics summary. Library errors
    are caught here and turned into failed results.
    """

    def __init__(self):
        self.logger = setup_logger("icgs.coordinator")
        self.tracer = get_tracer()
        self.metrics = get_metrics_collector()

    # inputs

    def resolve_model(self, target: str) -> Tuple[ICGS, Dict[str, str]]:
        """A model file path or the name of a built-in example."""
        path = Path(target)
        if path.is_file():
            return load_model(path), {"path": str(path), "sha256": file_digest(path)}
        if target in BUILTIN_MODELS:
            return builtin_example(target), {"builtin": target}
        raise ModelFormatError(f"{target!r} is neither a model file nor one of {sorted(BUILTIN_MODELS)}")

    def resolve_machine(self, target: str):
        path = Path(target)
        if path.is_file():
            return load_tm(path), {"path": str(path), "sha256": file_digest(path)}
        if target in BUILTIN_MACHINES:
            return builtin_machine(target), {"builtin": target}
        raise ModelFormatError(f"{target!r} is neither a machine file nor one of {sorted(BUILTIN_MACHINES)}")

    def _write(self, text: str, out: Optional[str]) -> Optional[Dict[str, str]]:
        if out is None:
            return None
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return {"path": str(path), "sha256": file_digest(path)}

    # plumbing

    def _run(self, command: str, body: Callable[[], Tuple[int, Dict[str, Any]]]) -> Dict[str, Any]:
        start = time.perf_counter()
        self.metrics.increment(f"commands.{command}")
        with self.tracer.span(f"command.{command}"):
            try:
                exit_code, report = body()
            except ConsistencyError as e:
                self.logger.error(f"{command}: {e}")
                return {"success": False, "command": command, "exit_code": EXIT_INCONSISTENT, "error": str(e)}
            except LimitExceededError as e:
                self.logger.error(f"{command}: {e}")
                return {"success": False, "command": command, "exit_code": EXIT_INPUT, "error": str(e)}
            except (ICGSError, ValueError, OSError) as e:
                self.logger.error(f"{command}: {e}")
                return {"success": False, "command": command, "exit_code": EXIT_INPUT, "error": str(e)}
            finally:
                strata.cache_clear()
        elapsed = time.perf_counter() - start
        self.metrics.record_timing(f"commands.{command}", elapsed)
        return {
            "success": True,
            "command": command,
            "exit_code": exit_code,
            "version": __version__,
            "elapsed_seconds": round(elapsed, 6),
            **report,
            "metrics": self.metrics.get_summary(),
        }

    # commands

    def cmd_validate(self, model_spec: str) -> Dict[str, Any]:
        def body():
            model, source = self.resolve_model(model_spec)
            report = validate(model)
            verdict = "valid" if report.is_valid else "invalid"
            return (EXIT_OK if report.is_valid else EXIT_NEGATIVE), {
                "inputs": {"model": source},
                "verdict": verdict,
                "report": report.to_dict(),
            }

        return self._run("validate", body)

    def cmd_check(
        self,
        model_spec: str,
        history: Optional[str],
        formula: str,
        semantics: str = "obj",
        bound: int = 2,
    ) -> Dict[str, Any]:
        def body():
            model, source = self.resolve_model(model_spec)
            h = parse_history(model, history) if history else History((model.init,))
            parsed = parse_formula(formula)
            verdict = check(model, h, parsed, semantics, bound)
            exit_code = EXIT_OK if verdict.value is Truth.TRUE else EXIT_NEGATIVE
            return exit_code, {
                "inputs": {"model": source},
                "parameters": {
                    "history": str(h),
                    "formula": format_formula(parsed),
                    "semantics": semantics,
                    "bound": bound,
                },
                "verdict": str(verdict.value),
                "result": verdict.to_dict(),
            }

        return self._run("check", body)

    def cmd_bisim(
        self,
        left_spec: str,
        right_spec: str,
        coalition: Iterable[str],
        depth: int,
        seed_path: Optional[str] = None,
        mode: str = "both",
        strict_audit: bool = False,
        distinguish: bool = False,
        trace_path: Optional[str] = None,
        relation_out: Optional[str] = None,
    ) -> Dict[str, Any]:
        """
        Refine, solve the game, or both. In mode both any disagreement
        between the refinement verdict and the game winner is an internal
        error. ``strict_audit`` reports strict-condition violations of the
        refined relation without changing the verdict.
        """
        def body():
            if mode not in ("refine", "game", "both"):
                raise ValueError(f"unknown mode {mode!r}")
            left, left_source = self.resolve_model(left_spec)
            right, right_source = self.resolve_model(right_spec)
            agents = left.coalition(coalition)
            right.coalition(coalition)
            seed = None
            inputs = {"left": left_source, "right": right_source}
            if seed_path:
                seed = load_relation(seed_path, left, right)
                inputs["seed"] = {"path": seed_path, "sha256": file_digest(seed_path)}
            report: Dict[str, Any] = {
                "inputs": inputs,
                "parameters": {"coalition": list(agents), "depth": depth, "mode": mode, "strict_audit": strict_audit},
            }

            refined = None
            if mode in ("refine", "both"):
                refined = check_bisimulation(left, right, agents, depth, seed, strict_audit=strict_audit)
                report["refinement"] = refined.to_dict()
                written = self._write(dump_relation(left, right, refined.relation), relation_out)
                if written:
                    report["relation_file"] = written

            game = None
            if mode in ("game", "both"):
                game = solve(build_game(left, right, agents, depth, seed))
                report["game"] = game.to_dict()
                if not game.determined:
                    raise ConsistencyError("both players claim a win")
                if trace_path:
                    report["trace_lines"] = export_trace(game, trace_path)

            if mode == "both":
                if refined.bisimilar != (game.winner == DUPLICATOR):
                    raise ConsistencyError(
                        f"refinement says {refined.verdict} but {game.winner} wins the game"
                    )

            bisimilar = game.winner == DUPLICATOR if game is not None else refined.bisimilar
            report["verdict"] = "bisimilar-to-depth" if bisimilar else "not-bisimilar"

            if distinguish and game is not None and not bisimilar and seed is None:
                formula = extract_formula(game)
                left_verdict, right_verdict = verify_distinguishing(game, formula)
                report["formula"] = format_formula(formula)
                report["formula_check"] = {"left": left_verdict.to_dict(), "right": right_verdict.to_dict()}
                separates = left_verdict.value is Truth.TRUE and right_verdict.value is Truth.FALSE
                report["formula_separates"] = separates
                if not separates:
                    self.logger.warning("extracted formula does not separate the roots at this bound")
            return (EXIT_OK if bisimilar else EXIT_NEGATIVE), report

        return self._run("bisim", body)

    def cmd_encode_tm(self, tm_spec: str, out: Optional[str] = None) -> Dict[str, Any]:
        def body():
            tm, source = self.resolve_machine(tm_spec)
            model = tm_encoding(tm).model
            text = dump_model(model)
            report = {
                "inputs": {"machine": source},
                "verdict": "encoded",
                "states": len(model.states),
                "transitions": len(model.transitions),
            }
            written = self._write(text, out)
            if written:
                report["output"] = written
            else:
                report["model"] = text
            return EXIT_OK, report

        return self._run("encode-tm", body)

    def cmd_emit(self, name: str, out: Optional[str] = None) -> Dict[str, Any]:
        def body():
            model = builtin_example(name)
            text = dump_model(model)
            report = {"inputs": {"builtin": name}, "verdict": "emitted", "states": len(model.states)}
            written = self._write(text, out)
            if written:
                report["output"] = written
            else:
                report["model"] = text
            return EXIT_OK, report

        return self._run("emit", body)

    def cmd_reduction(self, tm_spec: str, depths: Iterable[int]) -> Dict[str, Any]:
        """Error avoidance in the machine game, per depth, against the machine's own run."""

        def body():
            tm, source = self.resolve_machine(tm_spec)
            rows = halting_correspondence(tm_encoding(tm), depths)
            if not all(r["matches_prediction"] for r in rows):
                raise ConsistencyError("error avoidance disagrees with the simulated run")
            runs_forever = all(r["avoidable"] for r in rows)
            return (EXIT_OK if runs_forever else EXIT_NEGATIVE), {
                "inputs": {"machine": source},
                "parameters": {"depths": [r["depth"] for r in rows]},
                "verdict": "avoidable" if runs_forever else "halts",
                "rows": rows,
            }

        return self._run("reduction", body)
