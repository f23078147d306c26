"""Bounded alternating bisimulation: refinement, games and distinguishing formulas."""

from .context import SideContext, Stratum, side_context
from .simulator import ChallengeProblem, SimulatorTable, audit_simulator, match_sets, simulator_from_map
from .relation import (
    BISIMILAR,
    CONDITIONS,
    NOT_BISIMILAR,
    BisimRelation,
    BisimResult,
    Refinement,
    RefinementCertificate,
    audit_relation,
    check_bisimulation,
    functional_relation,
    initial_relation,
    refine,
    relation_at_round,
    relation_from_pairs,
    replay_certificate,
)
from .game import (
    DUPLICATOR,
    SPOILER,
    GamePosition,
    GameResult,
    GameSolver,
    GameTree,
    PlayReport,
    SolvedDuplicator,
    SolvedSpoiler,
    audit_observation_uniformity,
    build_game,
    check_determinacy,
    explore_duplicator,
    export_trace,
    solve,
    verify_duplicator,
    verify_spoiler,
)
from .translation import (
    RelationDuplicator,
    audit_duplicator_relation,
    duplicator_from_relation,
    relation_from_duplicator,
)
from .extraction import FormulaExtractor, extract_formula, verify_distinguishing
from .io import dump_relation, load_relation, relation_from_records, relation_records

__all__ = [
    "SideContext",
    "Stratum",
    "side_context",
    "ChallengeProblem",
    "SimulatorTable",
    "audit_simulator",
    "match_sets",
    "simulator_from_map",
    "BISIMILAR",
    "CONDITIONS",
    "NOT_BISIMILAR",
    "BisimRelation",
    "BisimResult",
    "Refinement",
    "RefinementCertificate",
    "audit_relation",
    "check_bisimulation",
    "functional_relation",
    "initial_relation",
    "refine",
    "relation_at_round",
    "relation_from_pairs",
    "replay_certificate",
    "DUPLICATOR",
    "SPOILER",
    "GamePosition",
    "GameResult",
    "GameSolver",
    "GameTree",
    "PlayReport",
    "SolvedDuplicator",
    "SolvedSpoiler",
    "audit_observation_uniformity",
    "build_game",
    "check_determinacy",
    "explore_duplicator",
    "export_trace",
    "solve",
    "verify_duplicator",
    "verify_spoiler",
    "RelationDuplicator",
    "audit_duplicator_relation",
    "duplicator_from_relation",
    "relation_from_duplicator",
    "FormulaExtractor",
    "extract_formula",
    "verify_distinguishing",
    "dump_relation",
    "load_relation",
    "relation_from_records",
    "relation_records",
]
