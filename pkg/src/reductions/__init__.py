"""Concrete models: the built-in examples and the Turing machine reduction."""

from ..exceptions import ModelFormatError
from ..model import ICGS
from .figures import coordination, hm_left, hm_right, simple
from .turing import (
    Configuration,
    TMSpec,
    TMTrace,
    TMTransition,
    builtin_machine,
    dump_tm,
    halting_machine,
    halting_step,
    load_tm,
    simulate_tm,
    table1_machine,
    tm_from_dict,
)
from .encoding import TMEncoding, encode_tm, tm_encoding
from .correspondence import (
    avoidable,
    chi_action,
    chi_bisimulation,
    chi_map,
    chi_relation,
    chi_simulators,
    expected_runs,
    failure_depth,
    good_runs,
    halting_correspondence,
)

BUILTIN_MODELS = {
    "coordination": coordination,
    "hm-left": hm_left,
    "hm-right": hm_right,
    "simple": simple,
    "tm-table1": lambda: encode_tm(table1_machine()),
}


def builtin_example(name: str) -> ICGS:
    """One of the named example models."""
    if name not in BUILTIN_MODELS:
        raise ModelFormatError(f"unknown example {name!r}; choose from {sorted(BUILTIN_MODELS)}")
    return BUILTIN_MODELS[name]()


__all__ = [
    "coordination",
    "hm_left",
    "hm_right",
    "simple",
    "builtin_example",
    "BUILTIN_MODELS",
    "Configuration",
    "TMSpec",
    "TMTrace",
    "TMTransition",
    "builtin_machine",
    "dump_tm",
    "halting_machine",
    "halting_step",
    "load_tm",
    "simulate_tm",
    "table1_machine",
    "tm_from_dict",
    "TMEncoding",
    "encode_tm",
    "tm_encoding",
    "avoidable",
    "chi_action",
    "chi_bisimulation",
    "chi_map",
    "chi_relation",
    "chi_simulators",
    "expected_runs",
    "failure_depth",
    "good_runs",
    "halting_correspondence",
]
