"""Block cycles over explicit configuration lists.

This is the slow, obviously-correct counterpart of the compiled detector:
it works on :class:`Configuration` values produced by the reference
``step`` function and is used to cross-check the executor.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..machine import Configuration, Program
from ..tape import EPReal

EXACT, TRANSLATED = "exact", "translated"


@dataclass(frozen=True)
class BlockCycle:
    """A repeat inside one omega-block.

    ``anchor`` is the configuration at ``start_index + length``.  For an exact
    cycle ``varying`` lists, per tape, the cells that take both values during
    the cycle.  For a translated cycle the head drifts right by
    ``displacement`` per period, never going below ``floor``, and the tape
    from ``floor + displacement`` on is the tape from ``floor`` on, shifted.
    """

    kind: str
    start_index: int
    length: int
    displacement: int
    anchor: Configuration
    varying: tuple[frozenset, ...] = ()
    floor: int = 0

    @property
    def wake(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """Per tape: the settled cells below ``floor`` and the pattern laid down after them."""
        if self.kind != TRANSLATED:
            return ()
        m, d = self.floor, self.displacement
        return tuple((tuple(t.head(m)), tuple(t[m + i] for i in range(d))) for t in self.anchor.tapes)


def _varying(configs: Sequence[Configuration]) -> tuple[frozenset, ...]:
    heads = {c.head for c in configs}
    out = []
    for t in range(len(configs[0].tapes)):
        cells = frozenset(x for x in heads if len({c.tapes[t][x] for c in configs}) > 1)
        out.append(cells)
    return tuple(out)


def detect_block_cycle(configs: Sequence[Configuration]) -> BlockCycle | None:
    """Find the earliest-ending exact or translated repeat in ``configs``.

    ``configs`` must be consecutive configurations of one block.
    """
    seen: dict[Configuration, int] = {}
    heads = [c.head for c in configs]
    for j, c in enumerate(configs):
        if c in seen:
            i = seen[c]
            return BlockCycle(EXACT, i, j - i, 0, c, _varying(configs[i : j + 1]), min(heads[i : j + 1]))
        seen[c] = j
        for i in range(j):
            a = configs[i]
            d = c.head - a.head
            if a.state != c.state or d <= 0:
                continue
            m = min(heads[i : j + 1])
            if m < 1:
                continue
            if all(tj.shift(m + d) == ti.shift(m) for ti, tj in zip(a.tapes, c.tapes)):
                return BlockCycle(TRANSLATED, i, j - i, d, c, (), m)
    return None


def limit_configuration(program: Program, cycle: BlockCycle, rule: str = "limsup") -> Configuration:
    """The configuration at the limit of the block that ``cycle`` repeats forever."""
    anchor = cycle.anchor
    if cycle.kind == EXACT:
        fill = 1 if rule == "limsup" else 0
        tapes = tuple(
            t.with_cells({x: fill for x in cells}) for t, cells in zip(anchor.tapes, cycle.varying)
        )
    else:
        m, d = cycle.floor, cycle.displacement
        tapes = tuple(EPReal(t.head(m), [t[m + i] for i in range(d)]) for t in anchor.tapes)
    return Configuration(program.limit, 0, tapes)
