"""Finite-time machines embedded into infinite time programs.

Each construction is a product: the classical machine's states are copied
in, it works on the scratch tape, and the input tape carries one marker
cell so that the decider can find its way back.  If the classical machine
never reaches the awaited event, the run arrives at stage w in the limit
state, and the limit state halts with output 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..machine import Program
from .builder import Builder

MOVES = {"L": -1, "R": 1, "S": 0}


@dataclass(frozen=True)
class ClassicalTM:
    """A binary-alphabet, one-way-tape Turing machine.

    ``transitions`` maps ``(state, bit)`` to ``(write, move, next)`` with
    ``move`` one of ``L``/``R``/``S``; moving left from cell 0 stays put.
    ``emit`` names the state whose visits enumerate the head position.
    """

    transitions: Mapping[tuple[str, int], tuple[int, str, str]]
    start: str
    halt: str
    emit: str | None = None
    name: str = ""
    states: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        order = [self.start]
        for (s, _), (_, _, nxt) in self.transitions.items():
            order += [s, nxt]
        states = tuple(s for s in dict.fromkeys(order) if s != self.halt)
        for s in states:
            for b in (0, 1):
                if (s, b) not in self.transitions:
                    raise ValueError(f"classical machine has no rule for ({s}, {b})")
        if any(s == self.halt for s, _ in self.transitions):
            raise ValueError("halt state has rules")
        object.__setattr__(self, "states", states)

    def simulate(self, n: int = 0, max_steps: int = 10_000):
        """Run on ``n`` ones for at most ``max_steps`` steps.

        Returns ``(halted, steps, emitted)`` where ``emitted`` lists the head
        positions at visits to the ``emit`` state, in order.
        """
        tape = {i: 1 for i in range(n)}
        state, head, emitted = self.start, 0, []
        for steps in range(max_steps + 1):
            if state == self.halt:
                return True, steps, emitted
            if state == self.emit:
                emitted.append(head)
            if steps == max_steps:
                break
            write, move, nxt = self.transitions[(state, tape.get(head, 0))]
            tape[head] = write
            head = max(0, head + MOVES[move])
            state = nxt
        return False, max_steps, emitted


def _embed(b: Builder, m: ClassicalTM, prefix: str, on_halt: str, on_emit: str | None = None) -> str:
    """Copy ``m`` into ``b`` working on the scratch tape; return its start state name."""

    def name(s: str) -> str:
        if s == m.halt:
            return on_halt
        return prefix + s

    for s in m.states:
        rules = []
        for bit in (0, 1):
            write, move, nxt = m.transitions[(s, bit)]
            if s == m.emit and on_emit is not None:
                rules.append((f"1{bit}*", "***", "S", on_emit))
                rules.append((f"0{bit}*", f"*{write}*", move, name(nxt)))
            else:
                rules.append((f"*{bit}*", f"*{write}*", move, name(nxt)))
        b.state(prefix + s, *rules)
    return name(m.start)


def _chain(b: Builder, hint: str, count: int, move: str, then: str, write: str = "***") -> str:
    """``count`` moves in one direction, then ``then``; the first state writes ``write``."""
    nxt = then
    for i in range(count, 0, -1):
        nxt = b.state(f"{hint}_{i}", (None, write if i == 1 else "***", move, nxt))
    return nxt


def halting_decider(m: ClassicalTM, n: int) -> Program:
    """On input 0: output 1 at a finite stage if ``m`` halts on ``n``, else 0 at stage w."""
    b = Builder(name=f"halts? {m.name or 'machine'} on {n}")
    b.comments.append(f"decides whether the embedded machine halts on input {n}")
    b.state("found", ("1**", "**1", "S", "halt"), ("0**", "***", "L", "found"))
    m_start = _embed(b, m, "m.", on_halt="found")
    # lay down n ones on the scratch tape, return to cell 0, mark it, start m
    b.state("mark", (None, "1**", "S", m_start))
    back = _chain(b, "return", n, "L", "mark")
    if n == 0:
        b.goto("start", "mark")
    else:
        nxt = back
        for i in range(n - 1, -1, -1):
            nxt = b.state("start" if i == 0 else f"write_{i}", (None, "*1*", "R", nxt))
    b.goto("limit", "halt")
    return b.build()


def ce_membership(enumerator: ClassicalTM, n: int) -> Program:
    """On input 0: output 1 iff ``enumerator`` ever visits its emit state with the head on cell ``n``."""
    if enumerator.emit is None:
        raise ValueError("the enumerator needs an emit state")
    b = Builder(name=f"{n} in {enumerator.name or 'enumeration'}?")
    b.comments.append(f"decides whether {n} is ever enumerated")
    b.state("accept", (None, "**1", "S", "halt"))
    home = _chain(b, "home", n, "L", "accept")
    b.goto("exhausted", "exhausted")
    e_start = _embed(b, enumerator, "e.", on_halt="exhausted", on_emit=home)
    back = _chain(b, "return", n, "L", e_start)
    b.state("place", (None, "1**", "S", back))
    if n == 0:
        b.goto("start", "place")
    else:
        out = _chain(b, "seek", n, "R", "place")
        b.goto("start", out)
    b.goto("limit", "halt")
    return b.build()


def exists_search(phi: Program) -> Program:
    """Search n = 0, 1, 2, ... for a witness of ``phi``; run it on the parameter real x.

    ``phi`` is started with the head on cell n and must halt with the head
    back on cell n and its verdict in the output cell there.  It must not
    move left of n or write the scratch tape.  The search halts with output
    1 at a finite stage if some n is accepted, and with output 0 at stage w
    otherwise.
    """
    if phi.tape_count != 3:
        raise ValueError("the predicate must be a three-tape program")
    b = Builder(name=f"exists n. {phi.name or 'phi'}")
    b.comments.append("unbounded search for a witness n")
    b.state("start", (None, "*1*", "S", "phi." + phi.start))
    for state in phi.states:
        if state == phi.halt:
            continue
        rules = []
        for read in sorted(k[1] for k in phi.transitions if k[0] == state):
            r = phi.transitions[(state, read)]
            goto = "verdict" if r.goto == phi.halt else "phi." + r.goto
            mv = {-1: "L", 0: "S", 1: "R"}[r.move]
            rules.append(("".join(map(str, read)), "".join(map(str, r.write)), mv, goto))
        b.state("phi." + state, *rules)
    b.state("verdict", ("**1", "**0", "S", "witness"), ("**0", "***", "R", "phi." + phi.start))
    b.state("witness", ("*1*", "**1", "S", "halt"), ("*0*", "***", "L", "witness"))
    b.goto("limit", "halt")
    return b.build()


def classical_from_dict(data: dict) -> ClassicalTM:
    """Read ``{"start", "halt", "emit"?, "name"?, "rules": [[state, bit, write, move, next], ...]}``."""
    table = {}
    for state, bit, write, move, nxt in data["rules"]:
        if (state, bit) in table:
            raise ValueError(f"two rules for ({state}, {bit})")
        table[(state, int(bit))] = (int(write), move, nxt)
    return ClassicalTM(table, data["start"], data["halt"], data.get("emit"), data.get("name", ""))
