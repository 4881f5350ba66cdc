"""Programs, configurations and successor-step semantics.

A machine has three tapes (input, scratch, output), or four when a program
uses the oracle tape, and one head shared by all of them.  Moving left from
cell 0 leaves the head at cell 0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

from .tape import ZEROS, EPReal

LEFT, STAY, RIGHT = -1, 0, 1
MOVE_NAMES = {LEFT: "L", STAY: "S", RIGHT: "R"}
MOVE_CODES = {v: k for k, v in MOVE_NAMES.items()}
TAPE_NAMES = ("input", "scratch", "output", "oracle")

Bits = tuple[int, ...]


class MachineError(Exception):
    pass


class AssemblyError(MachineError):
    pass


class DslSyntaxError(AssemblyError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class DuplicateRuleError(AssemblyError):
    pass


class TotalityError(AssemblyError):
    def __init__(self, missing: list[tuple[str, Bits]]):
        self.missing = missing
        listing = ", ".join(f"{s} on {''.join(map(str, r))}" for s, r in missing)
        super().__init__(f"transition table is not total; missing: {listing}")


@dataclass(frozen=True)
class Rule:
    write: Bits
    move: int
    goto: str


def read_vectors(tape_count: int) -> list[Bits]:
    return [tuple(v) for v in itertools.product((0, 1), repeat=tape_count)]


class Program:
    """An immutable, validated transition table.

    ``transitions`` maps ``(state, read_vector)`` to a :class:`Rule` and must
    be total over every state except ``halt`` (and ``query``, whose rules are
    superseded by the oracle protocol).
    """

    def __init__(
        self,
        transitions: Mapping[tuple[str, Bits], Rule],
        start: str,
        limit: str,
        halt: str,
        tape_count: int = 3,
        query: str | None = None,
        yes: str | None = None,
        no: str | None = None,
        name: str = "",
    ):
        if tape_count not in (3, 4):
            raise AssemblyError("tape_count must be 3 or 4")
        if query is not None:
            if tape_count != 4:
                raise AssemblyError("the oracle protocol needs the fourth (oracle) tape")
            if yes is None or no is None:
                raise AssemblyError("query needs both yes and no states")
            if query in (start, limit, halt, yes, no):
                raise AssemblyError("query must differ from start, limit, halt, yes and no")
        if halt in (start, limit):
            raise AssemblyError("halt must differ from start and limit")
        self.tape_count = tape_count
        self.start, self.limit, self.halt = start, limit, halt
        self.query, self.yes, self.no = query, yes, no
        self.name = name
        table = {}
        for (state, read), rule in transitions.items():
            if len(read) != tape_count or len(rule.write) != tape_count:
                raise AssemblyError(f"rule for {state} has the wrong width")
            if state == halt:
                raise AssemblyError("halt has no outgoing transitions")
            if state == query:
                continue
            table[(state, tuple(read))] = rule
        self.transitions = MappingProxyType(table)

        order = [start, limit]
        for state, _ in table:
            order.append(state)
        for rule in table.values():
            order.append(rule.goto)
        order += [s for s in (query, yes, no) if s is not None]
        order.append(halt)
        self.states = tuple(dict.fromkeys(order))

        missing = [
            (s, r)
            for s in self.states
            if s not in (halt, query)
            for r in read_vectors(tape_count)
            if (s, r) not in table
        ]
        if missing:
            raise TotalityError(missing)

    def rule(self, state: str, read: Bits) -> Rule:
        return self.transitions[(state, read)]

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return (
            self.tape_count == other.tape_count
            and (self.start, self.limit, self.halt) == (other.start, other.limit, other.halt)
            and (self.query, self.yes, self.no) == (other.query, other.yes, other.no)
            and dict(self.transitions) == dict(other.transitions)
        )

    def __hash__(self):
        return hash((self.tape_count, self.start, self.limit, self.halt, frozenset(self.transitions.items())))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Program{label}: {len(self.states)} states, {self.tape_count} tapes>"

    @property
    def uses_oracle(self) -> bool:
        return self.query is not None


@dataclass(frozen=True)
class Configuration:
    state: str
    head: int
    tapes: tuple[EPReal, ...]

    def read(self) -> Bits:
        return tuple(t[self.head] for t in self.tapes)

    def describe(self) -> dict:
        return {
            "state": self.state,
            "head": self.head,
            "tapes": [t.to_text() for t in self.tapes],
        }


class Oracle:
    """A total membership predicate on reals, used to answer queries."""

    def __init__(self, membership: Callable[[EPReal], bool], description: str = "oracle"):
        self.membership = membership
        self.description = description

    def __contains__(self, r: EPReal) -> bool:
        return bool(self.membership(r))

    def __repr__(self):
        return f"Oracle({self.description})"

    @classmethod
    def empty(cls) -> "Oracle":
        return cls(lambda r: False, "{}")

    @classmethod
    def finite(cls, reals: Iterable[EPReal]) -> "Oracle":
        members = frozenset(reals)
        text = "{" + ", ".join(sorted(r.to_text() for r in members)) + "}"
        return cls(members.__contains__, text)

    @classmethod
    def cofinite(cls, excluded: Iterable[EPReal]) -> "Oracle":
        out = frozenset(excluded)
        text = "complement of {" + ", ".join(sorted(r.to_text() for r in out)) + "}"
        return cls(lambda r: r not in out, text)


def initial_configuration(p: Program, input_real: EPReal = ZEROS) -> Configuration:
    tapes = (input_real,) + (ZEROS,) * (p.tape_count - 1)
    return Configuration(p.start, 0, tapes)


def step(p: Program, c: Configuration) -> Configuration:
    """One successor step.  Only the cells under the head may change."""
    if c.state == p.halt:
        raise MachineError("cannot step a halted machine")
    if c.state == p.query:
        raise MachineError("query state is resolved by the oracle protocol, not by step")
    rule = p.transitions[(c.state, c.read())]
    tapes = tuple(
        t if t[c.head] == b else t.with_cells({c.head: b})
        for t, b in zip(c.tapes, rule.write)
    )
    return Configuration(rule.goto, max(0, c.head + rule.move), tapes)


def answer_query(p: Program, c: Configuration, oracle: Oracle) -> Configuration:
    if p.query is None or c.state != p.query:
        raise MachineError("answer_query needs a configuration in the query state")
    target = p.yes if c.tapes[3] in oracle else p.no
    return Configuration(target, c.head, c.tapes)
