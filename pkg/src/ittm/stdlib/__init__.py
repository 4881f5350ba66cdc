"""Ready-made programs: clocks, classical deciders, the well-order decider and the census."""
from .builder import Builder
from .census import CENSUS_BUDGETS, CensusReport, approx_weak_jump, census, describe, family_program, total_size
from .classical import ClassicalTM, ce_membership, classical_from_dict, exists_search, halting_decider
from .clocks import DEFAULT_BOUND, ClockError, clock_coefficients, compile_clock, sequence
from .wo import wo_decider

__all__ = [
    "Builder",
    "CENSUS_BUDGETS",
    "CensusReport",
    "ClassicalTM",
    "ClockError",
    "DEFAULT_BOUND",
    "approx_weak_jump",
    "ce_membership",
    "classical_from_dict",
    "census",
    "clock_coefficients",
    "compile_clock",
    "describe",
    "exists_search",
    "family_program",
    "halting_decider",
    "sequence",
    "total_size",
    "wo_decider",
]
