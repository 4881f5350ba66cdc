"""Infinite time Turing machine simulator and program lab."""
from .assembler import assemble, disassemble, program_from_json, program_to_json
from .machine import (
    AssemblyError,
    Configuration,
    Oracle,
    Program,
    Rule,
    answer_query,
    initial_configuration,
    step,
)
from .ordinal import OMEGA, ONE, ZERO, Ordinal, format_ordinal, parse_ordinal
from .tape import EPReal, encode_natural, encode_relation, pair, unpair

__version__ = "0.1.0"
