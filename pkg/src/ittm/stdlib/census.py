"""Census of halting stages over a small, fixed program family.

The family with ``s`` states has states ``q0 .. q{s-1}``; ``q0`` starts and
the highest-numbered state handles limits.  A program reads only the scratch
cell under the head and leaves the input and output cells alone.  For each
(state, scratch bit) it either halts, or writes a bit, moves left or right and
enters a state.  Tables are listed lexicographically, halting first, so the
family sizes are 25, 6561, ... and program indices are stable.

Indices count through the 1-state family first, then the 2-state one, and
so on up to ``max_states``.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..leap import Budgets, Diverges, Halted, RunOutcome, Undetermined, run
from ..machine import Program, Rule, read_vectors
from ..ordinal import ONE, Ordinal, add, compare, format_ordinal, parse_ordinal

CENSUS_BUDGETS = Budgets(max_steps_per_block=10_000, max_limit_depth=3, max_total_leaps=64)
HALT = None


def _options(s: int) -> list:
    moves = [(w, m, n) for w in (0, 1) for m in ("L", "R") for n in range(s)]
    return [HALT] + moves


def family_size(s: int) -> int:
    return (4 * s + 1) ** (2 * s)


def total_size(max_states: int) -> int:
    return sum(family_size(s) for s in range(1, max_states + 1))


def _locate(index: int) -> tuple[int, int]:
    s = 1
    while index >= family_size(s):
        index -= family_size(s)
        s += 1
    return s, index


def family_table(index: int) -> tuple[int, tuple]:
    """The state count and per-(state, bit) choices of program ``index``."""
    s, k = _locate(index)
    opts = _options(s)
    digits = []
    for _ in range(2 * s):
        k, d = divmod(k, len(opts))
        digits.append(d)
    return s, tuple(opts[d] for d in reversed(digits))


def family_program(index: int) -> Program:
    s, choices = family_table(index)
    table = {}
    for q in range(s):
        for read in read_vectors(3):
            choice = choices[2 * q + read[1]]
            if choice is HALT:
                table[(f"q{q}", read)] = Rule(read, 0, "halt")
            else:
                w, m, n = choice
                table[(f"q{q}", read)] = Rule((read[0], w, read[2]), -1 if m == "L" else 1, f"q{n}")
    return Program(table, start="q0", limit=f"q{s - 1}", halt="halt", name=f"census #{index}")


def describe(index: int) -> str:
    s, choices = family_table(index)
    parts = []
    for i, c in enumerate(choices):
        q, b = divmod(i, 2)
        parts.append(f"q{q}/{b}:" + ("H" if c is HALT else f"{c[0]}{c[1]}q{c[2]}"))
    return " ".join(parts)


def _run_range(args) -> list[RunOutcome]:
    lo, hi, budgets = args
    return [run(family_program(i), budgets=budgets, full_tapes=False).outcome for i in range(lo, hi)]


def run_family(max_states: int, budgets: Budgets | None = None, workers: int = 1, chunk: int = 500) -> list[RunOutcome]:
    """Outcome of every family program on input 0, in index order."""
    budgets = budgets or CENSUS_BUDGETS
    n = total_size(max_states)
    jobs = [(lo, min(n, lo + chunk), budgets) for lo in range(0, n, chunk)]
    if workers <= 1:
        parts = map(_run_range, jobs)
        return [o for part in parts for o in part]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves job order, so the result does not depend on scheduling
        return [o for part in pool.map(_run_range, jobs) for o in part]


@dataclass
class CensusReport:
    max_states: int
    outcomes: list[RunOutcome]
    stages: list[Ordinal] = field(init=False)
    counts: dict[Ordinal, int] = field(init=False)
    first: dict[Ordinal, int] = field(init=False)
    gaps: list[tuple[Ordinal, Ordinal]] = field(init=False)

    def __post_init__(self):
        self.counts, self.first = {}, {}
        for i, o in enumerate(self.outcomes):
            if isinstance(o, Halted):
                self.counts[o.stage] = self.counts.get(o.stage, 0) + 1
                self.first.setdefault(o.stage, i)
        self.stages = sorted(self.counts)
        self.gaps = realized_gaps(self.stages)

    @property
    def halted(self) -> int:
        return sum(self.counts.values())

    @property
    def diverging(self) -> int:
        return sum(isinstance(o, Diverges) for o in self.outcomes)

    @property
    def undetermined(self) -> int:
        return sum(isinstance(o, Undetermined) for o in self.outcomes)

    def halted_before(self, bound) -> set[int]:
        return {i for i, o in enumerate(self.outcomes) if isinstance(o, Halted) and compare(o.stage, bound) < 0}

    def to_dict(self) -> dict:
        return {
            "max_states": self.max_states,
            "programs": len(self.outcomes),
            "halted": self.halted,
            "diverges": self.diverging,
            "undetermined": self.undetermined,
            "stages": [
                {"stage": format_ordinal(s), "count": self.counts[s], "first": self.first[s]} for s in self.stages
            ],
            "gaps": [[format_ordinal(a), format_ordinal(b)] for a, b in self.gaps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        rows = [("stage", "programs", "first")]
        rows += [(format_ordinal(s), str(self.counts[s]), str(self.first[s])) for s in self.stages]
        widths = [max(len(r[i]) for r in rows) for i in range(3)]
        lines = [f"census of {len(self.outcomes)} programs with at most {self.max_states} states"]
        lines.append(f"halted {self.halted}  diverges {self.diverging}  undetermined {self.undetermined}")
        lines.append("")
        for r in rows:
            lines.append(f"{r[0]:<{widths[0]}}  {r[1]:>{widths[1]}}  {r[2]:>{widths[2]}}".rstrip())
        lines.append("")
        if self.gaps:
            lines.append("gaps below the largest realized stage:")
            lines += [f"  [{format_ordinal(a)}, {format_ordinal(b)})" for a, b in self.gaps]
        else:
            lines.append("no gaps below the largest realized stage")
        return "\n".join(lines) + "\n"


def realized_gaps(stages: list[Ordinal]) -> list[tuple[Ordinal, Ordinal]]:
    """Maximal half-open intervals of nonzero stages below ``max(stages)`` that no stage hits."""
    gaps = []
    lo = ONE
    for s in stages:
        if compare(lo, s) < 0:
            gaps.append((lo, s))
        lo = add(s, ONE)
    return gaps


def census(max_states: int = 2, budgets: Budgets | None = None, workers: int = 1) -> CensusReport:
    return CensusReport(max_states, run_family(max_states, budgets, workers))


def approx_weak_jump(bound, max_states: int = 2, budgets: Budgets | None = None, workers: int = 1) -> set[int]:
    """Indices of family programs that halt on input 0 before stage ``bound``."""
    if isinstance(bound, str):
        bound = parse_ordinal(bound)
    bound = Ordinal.of(bound)
    if not bound:
        return set()
    outcomes = run_family(max_states, budgets, workers)
    return {i for i, o in enumerate(outcomes) if isinstance(o, Halted) and compare(o.stage, bound) < 0}
