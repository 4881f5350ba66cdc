from .cycles import BlockCycle, detect_block_cycle, limit_configuration
from .engine import (
    LIMINF,
    LIMSUP,
    Budgets,
    Diverges,
    Halted,
    LimitRecord,
    Reason,
    Run,
    RunOutcome,
    Undetermined,
    advance_clock,
    detect_divergence,
    fixed_point,
    run,
)

__all__ = [
    "BlockCycle",
    "Budgets",
    "Diverges",
    "Halted",
    "LIMINF",
    "LIMSUP",
    "LimitRecord",
    "Reason",
    "Run",
    "RunOutcome",
    "Undetermined",
    "advance_clock",
    "detect_block_cycle",
    "detect_divergence",
    "fixed_point",
    "limit_configuration",
    "run",
]
