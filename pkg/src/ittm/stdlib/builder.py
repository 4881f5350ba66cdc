"""Small helper for generating assembler source from Python."""
from __future__ import annotations

from ..assembler import assemble
from ..machine import Program

RuleSpec = tuple  # (read pattern or None for default, write pattern, move, goto)


class Builder:
    """Collects state blocks and renders them as assembler text.

    Read patterns use ``0``/``1``/``*``; ``None`` stands for the ``default``
    rule.  Write patterns use ``*`` to keep the bit that was read.
    """

    def __init__(self, tapes: int = 3, start: str = "start", limit: str = "limit", halt: str = "halt", name: str = ""):
        self.tapes = tapes
        self.start, self.limit, self.halt = start, limit, halt
        self.name = name
        self.blocks: dict[str, list[RuleSpec]] = {}
        self.comments: list[str] = []
        self._counter = 0

    @property
    def keep(self) -> str:
        return "*" * self.tapes

    def fresh(self, hint: str = "s") -> str:
        self._counter += 1
        return f"{hint}_{self._counter}"

    def state(self, name: str, *rules: RuleSpec) -> str:
        if name in self.blocks:
            raise ValueError(f"state {name} defined twice")
        self.blocks[name] = list(rules)
        return name

    def goto(self, name: str, target: str, move: str = "S") -> str:
        """A state that changes nothing and moves on."""
        return self.state(name, (None, self.keep, move, target))

    def source(self) -> str:
        lines = [f"# {c}" for c in self.comments]
        lines += [f"tapes {self.tapes}", f"start {self.start}", f"limit {self.limit}", f"halt {self.halt}", ""]
        for name, rules in self.blocks.items():
            lines.append(f"{name}:")
            for read, write, move, goto in rules:
                head = "default" if read is None else f"on {read}"
                lines.append(f"  {head} write {write} move {move} goto {goto}")
        return "\n".join(lines) + "\n"

    def build(self) -> Program:
        return assemble(self.source(), self.name)
