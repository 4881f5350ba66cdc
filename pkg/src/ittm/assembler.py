"""Text assembler, disassembler and JSON form for programs.

Grammar, one item per line, ``#`` starts a comment::

    tapes 3                          # or 4 for the oracle tape
    start s0
    limit lim
    halt done
    query q yes got no missed        # oracle programs only

    define bump                      # macro; @names are ports
      go: on *** write *1* move R goto @next
    end
    use bump as b1 with next=lim     # states become b1.go, ...

    s0:
      on 1** write *** move R goto s0
      default write 1** move S goto b1.go

Read patterns use ``0``, ``1`` and ``*``.  In write patterns ``*`` keeps the
bit that was read.  A ``default`` rule covers every read vector no explicit
rule of the state matches; explicit rules must not overlap.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .machine import (
    MOVE_CODES,
    MOVE_NAMES,
    AssemblyError,
    Bits,
    DslSyntaxError,
    DuplicateRuleError,
    Program,
    Rule,
    read_vectors,
)

NAME = r"[A-Za-z_][A-Za-z0-9_.]*"
_NAME_RE = re.compile(rf"^{NAME}$")
_LABEL_RE = re.compile(rf"^({NAME})\s*:\s*(.*)$")
_RULE_RE = re.compile(
    rf"^(?:on\s+([01*]+)|default)\s+write\s+([01*]+)\s+move\s+([LRS])\s+goto\s+(@?{NAME})$"
)
_USE_RE = re.compile(rf"^use\s+({NAME})\s+as\s+({NAME})(?:\s+with\s+(.*))?$")


@dataclass
class _Line:
    number: int
    text: str


@dataclass
class _StateBlock:
    name: str
    rules: list[tuple[str | None, str, str, str, int]] = field(default_factory=list)
    line: int = 0


def _strip(source: str) -> list[_Line]:
    out = []
    for i, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            out.append(_Line(i, text))
    return out


def _parse_rule(text: str, line: int):
    m = _RULE_RE.match(text)
    if not m:
        raise DslSyntaxError(f"cannot read rule {text!r}", line)
    return (m.group(1), m.group(2), m.group(3), m.group(4), line)


def _parse_bindings(text: str | None, line: int) -> dict[str, str]:
    bindings = {}
    if not text:
        return bindings
    for chunk in text.replace(",", " ").split():
        port, sep, target = chunk.partition("=")
        if not sep or not _NAME_RE.match(port) or not _NAME_RE.match(target):
            raise DslSyntaxError(f"bad binding {chunk!r}; expected port=state", line)
        bindings[port] = target
    return bindings


class _Assembler:
    def __init__(self, source: str, name: str):
        self.name = name
        self.lines = _strip(source)
        self.header: dict[str, object] = {}
        self.macros: dict[str, list[_Line]] = {}
        self.blocks: dict[str, _StateBlock] = {}

    def run(self) -> Program:
        body = self._collect_macros(self.lines)
        self._read_body(body, prefix="", ports={}, top=True, depth=0)
        return self._build()

    def _collect_macros(self, lines: list[_Line]) -> list[_Line]:
        body = []
        i = 0
        while i < len(lines):
            ln = lines[i]
            words = ln.text.split()
            if words[0] == "define":
                if len(words) != 2 or not _NAME_RE.match(words[1]):
                    raise DslSyntaxError("expected 'define <name>'", ln.number)
                if words[1] in self.macros:
                    raise DslSyntaxError(f"macro {words[1]} defined twice", ln.number)
                j = i + 1
                while j < len(lines) and lines[j].text != "end":
                    if lines[j].text.split()[0] == "define":
                        raise DslSyntaxError("macros cannot be nested", lines[j].number)
                    j += 1
                if j == len(lines):
                    raise DslSyntaxError(f"macro {words[1]} has no 'end'", ln.number)
                self.macros[words[1]] = lines[i + 1 : j]
                i = j + 1
                continue
            if ln.text == "end":
                raise DslSyntaxError("'end' without 'define'", ln.number)
            body.append(ln)
            i += 1
        return body

    def _read_body(self, lines, prefix, ports, top, depth):
        if depth > 32:
            raise DslSyntaxError("macro expansion too deep (recursive use?)")
        local = set()
        for ln in lines:
            m = _LABEL_RE.match(ln.text)
            if m and not ln.text.startswith(("on ", "default ")):
                local.add(m.group(1))
            u = _USE_RE.match(ln.text)
            if u:
                local.add(u.group(2))

        def rename(target: str, line: int) -> str:
            if target.startswith("@"):
                if top:
                    raise DslSyntaxError(f"port {target} outside a macro", line)
                if target[1:] not in ports:
                    raise DslSyntaxError(f"port {target} is not bound", line)
                return ports[target[1:]]
            if not top and (target in local or target.split(".", 1)[0] in local):
                return prefix + target
            return target

        current = None
        for ln in lines:
            words = ln.text.split()
            head = words[0]
            if head in ("tapes", "start", "limit", "halt", "query"):
                if not top:
                    raise DslSyntaxError(f"'{head}' is not allowed inside a macro", ln.number)
                self._directive(words, ln.number)
                current = None
                continue
            if head == "use":
                m = _USE_RE.match(ln.text)
                if not m:
                    raise DslSyntaxError("expected 'use <macro> as <prefix> [with port=state ...]'", ln.number)
                macro, sub = m.group(1), m.group(2)
                if macro not in self.macros:
                    raise DslSyntaxError(f"unknown macro {macro}", ln.number)
                bindings = {
                    k: rename(v, ln.number)
                    for k, v in _parse_bindings(m.group(3), ln.number).items()
                }
                sub_prefix = (prefix if not top else "") + sub + "."
                self._read_body(self.macros[macro], sub_prefix, bindings, top=False, depth=depth + 1)
                current = None
                continue
            if head in ("on", "default"):
                if current is None:
                    raise DslSyntaxError("rule outside a state block", ln.number)
                read, write, move, goto, line = _parse_rule(ln.text, ln.number)
                current.rules.append((read, write, move, rename(goto, line), line))
                continue
            m = _LABEL_RE.match(ln.text)
            if not m:
                raise DslSyntaxError(f"cannot read {ln.text!r}", ln.number)
            name = rename(m.group(1), ln.number)
            if name in self.blocks:
                raise DslSyntaxError(f"state {name} defined twice", ln.number)
            current = _StateBlock(name, line=ln.number)
            self.blocks[name] = current
            rest = m.group(2)
            if rest:
                read, write, move, goto, line = _parse_rule(rest, ln.number)
                current.rules.append((read, write, move, rename(goto, line), line))

    def _directive(self, words, line):
        head = words[0]
        if head in self.header:
            raise DslSyntaxError(f"'{head}' given twice", line)
        if head == "tapes":
            if len(words) != 2 or words[1] not in ("3", "4"):
                raise DslSyntaxError("expected 'tapes 3' or 'tapes 4'", line)
            self.header["tapes"] = int(words[1])
        elif head == "query":
            if len(words) != 6 or words[2] != "yes" or words[4] != "no":
                raise DslSyntaxError("expected 'query <state> yes <state> no <state>'", line)
            for w in (words[1], words[3], words[5]):
                if not _NAME_RE.match(w):
                    raise DslSyntaxError(f"bad state name {w!r}", line)
            self.header["query"] = (words[1], words[3], words[5])
        else:
            if len(words) != 2 or not _NAME_RE.match(words[1]):
                raise DslSyntaxError(f"expected '{head} <state>'", line)
            self.header[head] = words[1]

    def _build(self) -> Program:
        tapes = self.header.get("tapes", 3)
        for key in ("start", "limit", "halt"):
            if key not in self.header:
                raise AssemblyError(f"missing '{key}' directive")
        query, yes, no = self.header.get("query", (None, None, None))
        table: dict[tuple[str, Bits], Rule] = {}
        for block in self.blocks.values():
            explicit: dict[Bits, tuple[Rule, int]] = {}
            default = None
            for read, write, move, goto, line in block.rules:
                if len(write) != tapes or (read is not None and len(read) != tapes):
                    raise DslSyntaxError(f"patterns must have {tapes} symbols", line)
                if read is None:
                    if default is not None:
                        raise DuplicateRuleError(f"state {block.name} has two default rules (line {line})")
                    default = (write, move, goto)
                    continue
                for vec in read_vectors(tapes):
                    if all(p == "*" or int(p) == b for p, b in zip(read, vec)):
                        if vec in explicit:
                            raise DuplicateRuleError(
                                f"state {block.name}: rules on lines {explicit[vec][1]} and {line} "
                                f"both match {''.join(map(str, vec))}"
                            )
                        explicit[vec] = (_resolve(vec, write, move, goto), line)
            for vec in read_vectors(tapes):
                if vec in explicit:
                    table[(block.name, vec)] = explicit[vec][0]
                elif default is not None:
                    table[(block.name, vec)] = _resolve(vec, *default)
        halt = self.header["halt"]
        if halt in self.blocks:
            raise AssemblyError(f"halt state {halt} must not have rules")
        return Program(
            table,
            start=self.header["start"],
            limit=self.header["limit"],
            halt=halt,
            tape_count=tapes,
            query=query,
            yes=yes,
            no=no,
            name=self.name,
        )


def _resolve(vec: Bits, write: str, move: str, goto: str) -> Rule:
    bits = tuple(b if w == "*" else int(w) for w, b in zip(write, vec))
    return Rule(bits, MOVE_CODES[move], goto)


def assemble(source: str, name: str = "") -> Program:
    return _Assembler(source, name).run()


def disassemble(p: Program) -> str:
    """Explicit listing: one rule per (state, read vector); reassembles to ``p``."""
    lines = [f"tapes {p.tape_count}", f"start {p.start}", f"limit {p.limit}", f"halt {p.halt}"]
    if p.query is not None:
        lines.append(f"query {p.query} yes {p.yes} no {p.no}")
    for state in p.states:
        if state in (p.halt, p.query):
            continue
        lines.append("")
        lines.append(f"{state}:")
        for vec in read_vectors(p.tape_count):
            r = p.transitions[(state, vec)]
            lines.append(
                f"  on {''.join(map(str, vec))} write {''.join(map(str, r.write))} "
                f"move {MOVE_NAMES[r.move]} goto {r.goto}"
            )
    return "\n".join(lines) + "\n"


def program_to_dict(p: Program) -> dict:
    table = {}
    for state in p.states:
        if state in (p.halt, p.query):
            continue
        table[state] = {
            "".join(map(str, vec)): {
                "write": "".join(map(str, r.write)),
                "move": MOVE_NAMES[r.move],
                "goto": r.goto,
            }
            for vec in read_vectors(p.tape_count)
            for r in [p.transitions[(state, vec)]]
        }
    out = {
        "tapes": p.tape_count,
        "start": p.start,
        "limit": p.limit,
        "halt": p.halt,
        "transitions": table,
    }
    if p.query is not None:
        out["query"] = {"state": p.query, "yes": p.yes, "no": p.no}
    return out


def program_from_dict(data: dict) -> Program:
    table = {}
    for state, rules in data["transitions"].items():
        for read, r in rules.items():
            vec = tuple(int(ch) for ch in read)
            table[(state, vec)] = Rule(tuple(int(ch) for ch in r["write"]), MOVE_CODES[r["move"]], r["goto"])
    q = data.get("query") or {}
    return Program(
        table,
        start=data["start"],
        limit=data["limit"],
        halt=data["halt"],
        tape_count=data["tapes"],
        query=q.get("state"),
        yes=q.get("yes"),
        no=q.get("no"),
    )


def program_to_json(p: Program) -> str:
    return json.dumps(program_to_dict(p), indent=2, sort_keys=True) + "\n"


def program_from_json(text: str) -> Program:
    return program_from_dict(json.loads(text))
