"""Independent oracles for the test suite.

Nothing here imports package arithmetic or execution code: ordinals are
coefficient vectors, reals are bit functions, machines run on dict tapes.
"""
from __future__ import annotations

from itertools import permutations

# ordinals below w^w as {exponent: coefficient}


def vec(terms) -> dict[int, int]:
    """From an iterable of (exponent, coefficient) pairs."""
    return {e: c for e, c in terms if c}


def v_cmp(a: dict, b: dict) -> int:
    for e in sorted(set(a) | set(b), reverse=True):
        x, y = a.get(e, 0), b.get(e, 0)
        if x != y:
            return -1 if x < y else 1
    return 0


def v_add(a: dict, b: dict) -> dict:
    if not b:
        return dict(a)
    top = max(b)
    out = {e: c for e, c in a.items() if e > top}
    out[top] = a.get(top, 0) + b[top]
    out.update({e: c for e, c in b.items() if e < top})
    return out


def v_mul(a: dict, b: dict) -> dict:
    """Left distributivity over the terms of ``b``, highest first."""
    if not a or not b:
        return {}
    lead = max(a)
    out: dict = {}
    for e in sorted(b, reverse=True):
        d = b[e]
        if e > 0:
            part = {lead + e: d}
        else:
            part = dict(a)
            part[lead] = a[lead] * d
        out = v_add(out, part)
    return out


# frozen literal values, worked out by hand
FROZEN_ORDINALS = {
    "add(w*2+5, w)": "w*3",
    "add(1, w)": "w",
    "add(w, 1)": "w+1",
    "mul(w+1, w)": "w^2",
    "mul(2, w)": "w",
    "mul(w, 2)": "w*2",
    "next_limit(w+3)": "w*2",
}


# reals


def bit_at(prefix: str, period: str, i: int) -> int:
    if i < len(prefix):
        return int(prefix[i])
    return int(period[(i - len(prefix)) % len(period)])


def unpair_search(n: int) -> tuple[int, int]:
    """Walk the diagonals until the code is found."""
    k = 0
    for s in range(n + 2):
        for j in range(s + 1):
            if k == n:
                return s - j, j
            k += 1
    raise AssertionError("unreachable")


# machines on dict tapes


def naive_configs(program, input_bits, count: int):
    """Up to ``count`` configurations after the start, as (state, head, {tape: {cell: bit}}).

    ``input_bits(i)`` gives input cell i.  Stops early after a halt.
    """
    T = program.tape_count
    tapes = [dict() for _ in range(T)]

    def cell(t, x):
        if t == 0 and x not in tapes[0]:
            return input_bits(x)
        return tapes[t].get(x, 0)

    state, head = program.start, 0
    out = []
    for _ in range(count):
        read = tuple(cell(t, head) for t in range(T))
        rule = program.transitions[(state, read)]
        for t in range(T):
            tapes[t][head] = rule.write[t]
        head = max(0, head + rule.move)
        state = rule.goto
        out.append((state, head, [dict(tp) for tp in tapes]))
        if state == program.halt:
            break
    return out


def classical_halts(transitions, start, halt, ones: int, max_steps: int):
    """Steps to halt for a binary one-way machine on ``ones`` ones, or None."""
    tape = {i: 1 for i in range(ones)}
    state, head = start, 0
    for steps in range(max_steps + 1):
        if state == halt:
            return steps
        w, m, state = transitions[(state, tape.get(head, 0))]
        tape[head] = w
        head = max(0, head + {"L": -1, "R": 1, "S": 0}[m])
    return None


def classical_loops(transitions, start, halt, ones: int, max_steps: int) -> bool:
    """True when the run provably never halts within the evidence of ``max_steps`` steps.

    Certificates: an exact repeat of (state, head, tape), or a rightward
    repeat, where the state recurs further right, the head never went back
    past the earlier position, and everything from there on looks the same.
    """
    tape = {i: 1 for i in range(ones)}
    state, head = start, 0
    seen = set()
    history = []  # (state, head, snapshot, lowest head since)
    for _ in range(max_steps):
        if state == halt:
            return False
        top = max([x for x, b in tape.items() if b] + [head]) + 1
        snap = tuple(tape.get(x, 0) for x in range(top))
        key = (state, head, snap)
        if key in seen:
            return True
        seen.add(key)
        for i, (s0, h0, t0, low) in enumerate(history):
            low = min(low, head)
            history[i] = (s0, h0, t0, low)
            if s0 == state and head > h0 and low >= h0 and t0[h0:] == snap[head:head + len(t0) - h0] and not any(snap[head + len(t0) - h0:]):
                return True
        history.append((state, head, snap, head))
        w, m, state = transitions[(state, tape.get(head, 0))]
        tape[head] = w
        head = max(0, head + {"L": -1, "R": 1, "S": 0}[m])
    return False


def classical_emits(transitions, start, halt, emit, max_steps: int) -> set[int]:
    tape: dict = {}
    state, head, seen = start, 0, set()
    for _ in range(max_steps):
        if state == halt:
            break
        if state == emit:
            seen.add(head)
        w, m, state = transitions[(state, tape.get(head, 0))]
        tape[head] = w
        head = max(0, head + {"L": -1, "R": 1, "S": 0}[m])
    return seen


# finite orders


def is_finite_well_order(pairs) -> bool:
    """Brute force: some listing of the field makes the relation exactly 'earlier than'."""
    pairs = set(pairs)
    field = sorted({x for p in pairs for x in p})
    for order in permutations(field):
        pos = {x: i for i, x in enumerate(order)}
        if pairs == {(a, b) for a in field for b in field if pos[a] < pos[b]}:
            return True
    return not field
