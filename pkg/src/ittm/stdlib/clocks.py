"""Clock compiler: programs that halt on input 0 at a prescribed ordinal stage.

Targets are ``w^2*A + w*B + C`` with every coefficient at most ``bound``.

Finite targets are a chain of states.  Transfinite ones keep two flags in
cell 0, which the limit state can see without moving: ``F`` on the scratch
tape and ``L`` on the output tape.  ``F`` is flashed (set, then cleared) at
every limit that is not a multiple of w^2.  At a multiple of w^2 it has
changed unboundedly often and therefore reads 1.  ``L`` is raised exactly in
the stretch of time just before the target limit.  So the target is the
unique limit that sees ``F = L = 1``.

Cell 1 of the scratch tape holds the phase: 0 while counting multiples of
w^2, 1 while counting plain limits.  Counts are unary marks from cell 2 on,
always one unbroken run of 1s.  A clock started on a dirty tape (see
:func:`sequence`) wipes that run before it begins.  The transition taken at
the target lowers ``L`` again, so the output tape ends blank.
"""
from __future__ import annotations

from ..machine import Program, Rule, read_vectors
from ..ordinal import Ordinal, parse_ordinal
from .builder import Builder

DEFAULT_BOUND = 16


class ClockError(ValueError):
    pass


def clock_coefficients(target: Ordinal, bound: int = DEFAULT_BOUND) -> tuple[int, int, int]:
    if not target:
        raise ClockError("no program halts at stage 0")
    coef = {e: c for e, c in target.terms}
    if target.leading_exponent > 2:
        raise ClockError(f"{target} is not below w^3")
    a, b, c = coef.get(2, 0), coef.get(1, 0), coef.get(0, 0)
    if max(a, b, c) > bound:
        raise ClockError(f"{target} has a coefficient above the bound {bound}")
    return a, b, c


def compile_clock(target: Ordinal | int | str, bound: int = DEFAULT_BOUND) -> Program:
    if isinstance(target, str):
        target = parse_ordinal(target)
    target = Ordinal.of(target)
    A, B, C = clock_coefficients(target, bound)
    b = Builder(name=f"clock {target}")
    b.comments.append(f"halts on input 0 at stage {target}")
    K = b.keep

    if A == 0 and B == 0:
        names = ["start"] + [f"tick{i}" for i in range(2, C + 1)]
        for i, n in enumerate(names):
            b.goto(n, names[i + 1] if i + 1 < len(names) else "halt")
        b.goto("limit", "halt")
        return b.build()

    tail = [f"tail{i}" for i in range(1, C + 1)]
    for i, n in enumerate(tail):
        b.goto(n, tail[i + 1] if i + 1 < len(tail) else "halt")
    on_target = tail[0] if tail else "halt"

    if A >= 1:
        p0, f0, l0 = 0, 0, int(A == 1 and B == 0)
    else:
        p0, f0 = 1, int(B == 1)
        l0 = f0

    # block 0: set flags and phase, wipe old marks, park in an idle loop
    b.state("start", (None, f"*{f0}{l0}", "R", "init_phase"))
    b.state("init_phase", (None, f"*{p0}0", "R", "wipe"))
    b.state("wipe", ("*1*", "*0*", "R", "wipe"), ("*0*", K, "S", "idle"))
    b.goto("idle", "idle")

    b.state(
        "limit",
        ("*11", "**0", "S", on_target),
        ("*10", "*0*", "R", "skip_phase"),
        ("*0*", "*1*", "S", "flash_off"),
    )
    b.state("flash_off", (None, "*0*", "R", "read_phase"))
    b.state("read_phase", ("*0*", K, "S", "idle"), ("*1*", K, "R", "omega_0"))
    b.goto("skip_phase", "square_0", "R")

    # return-home chains: hop_<kind>_<j> needs j more left moves
    depth = max(A, B) + 2
    finish = {"none": ("idle", K), "L": ("set_L", "**1"), "FL": ("set_FL", "*11")}
    for kind, (name, write) in finish.items():
        if kind != "none":
            b.state(name, (None, write, "S", "idle"))
        for j in range(depth + 1):
            target_state = name if j == 0 else f"hop_{kind}_{j - 1}"
            if j == 0:
                b.goto(f"hop_{kind}_0", name)
            else:
                b.goto(f"hop_{kind}_{j}", target_state, "L")

    # phase 0: count multiples of w^2
    for k in range(max(A, 1)):
        nxt = f"square_{min(k + 1, max(A, 1) - 1)}"
        if k + 1 < A:
            kind = "L" if (k + 2 == A and B == 0) else "none"
            here = ("*0*", "*1*", "L", f"hop_{kind}_{1 + k}")
        elif k + 1 == A and B >= 1:
            here = ("*0*", K, "L", f"switch_{k}")
        else:
            here = ("*0*", K, "S", "idle")
        b.state(f"square_{k}", ("*1*", K, "R", nxt), here)
    if A >= 1 and B >= 1:
        k = A - 1
        for j in range(k, 0, -1):
            b.state(f"switch_{j}", (None, "*0*", "L", f"switch_{j - 1}"))
        b.state("switch_0", (None, "*1*", "L", "switch_home"))
        f = int(B == 1)
        b.state("switch_home", (None, f"*{f}{f}", "S", "idle"))

    # phase 1: count plain limits
    for k in range(max(B, 1)):
        nxt = f"omega_{min(k + 1, max(B, 1) - 1)}"
        if k + 1 < B:
            kind = "FL" if k + 2 == B else "none"
            here = ("*0*", "*1*", "L", f"hop_{kind}_{1 + k}")
        else:
            here = ("*0*", K, "S", "idle")
        b.state(f"omega_{k}", ("*1*", K, "R", nxt), here)
    return b.build()


def _writes_input(p: Program) -> bool:
    return any(rule.write[0] != read[0] for (_, read), rule in p.transitions.items())


def sequence(p: Program, q: Program) -> Program:
    """Run ``p``; when it would halt, run ``q`` instead.

    On input 0 the result halts at stage ``stage(p) + stage(q)``.  The
    input tape's cell 0 records which of the two is running, so ``p`` must
    halt with its head on cell 0, neither program may write the input tape,
    and ``q`` must not look at it.  ``q`` also starts on whatever ``p`` left
    on the scratch and output tapes; clocks tolerate the leftovers of clocks.
    """
    if p.tape_count != 3 or q.tape_count != 3:
        raise ValueError("sequence composes three-tape programs")
    if _writes_input(p) or _writes_input(q):
        raise ValueError("sequence needs programs that leave the input tape alone")
    for (state, read), rule in q.transitions.items():
        other = q.transitions[(state, (1 - read[0],) + read[1:])]
        if (other.move, other.goto, other.write[1:]) != (rule.move, rule.goto, rule.write[1:]):
            raise ValueError(f"second program reads the input tape in state {state}")

    def rp(s):
        return "p." + s

    def rq(s):
        return "q." + s

    table = {}
    for (state, read), rule in p.transitions.items():
        if rule.goto == p.halt:
            table[(rp(state), read)] = Rule((1,) + rule.write[1:], rule.move, rq(q.start))
        else:
            table[(rp(state), read)] = Rule(rule.write, rule.move, rp(rule.goto))
    for (state, read), rule in q.transitions.items():
        goto = "halt" if rule.goto == q.halt else rq(rule.goto)
        table[(rq(state), read)] = Rule(rule.write, rule.move, goto)
    for read in read_vectors(3):
        if read[0] == 0:
            table[("limit", read)] = table[(rp(p.limit), read)]
        else:
            table[("limit", read)] = table[(rq(q.limit), read)]
    name = f"{p.name or 'p'} ; {q.name or 'q'}"
    return Program(table, start=rp(p.start), limit="limit", halt="halt", name=name)
