from __future__ import annotations

import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ittm.assembler import assemble
from ittm.cli import validate
from ittm.leap import (
    LIMINF,
    Budgets,
    Diverges,
    Halted,
    Reason,
    Undetermined,
    advance_clock,
    detect_block_cycle,
    detect_divergence,
    limit_configuration,
    run,
)
from ittm.machine import Configuration, Oracle, Program, Rule, initial_configuration, read_vectors, step
from ittm.ordinal import OMEGA, ZERO, Ordinal, parse_ordinal
from ittm.tape import ZEROS, EPReal

W = parse_ordinal

FIVE_STEPS = """
start a
limit lim
halt done
a: default write *** move R goto b
b: default write *** move R goto c
c: default write *** move R goto d
d: default write **1 move R goto e
e: default write *** move S goto done
lim: default write *** move S goto lim
"""

STABLE = """
# writes 1 on scratch cell 0 at step 10, then idles; the limit copies it out
start c0
limit lim
halt done
c0: default write *** move S goto c1
c1: default write *** move S goto c2
c2: default write *** move S goto c3
c3: default write *** move S goto c4
c4: default write *** move S goto c5
c5: default write *** move S goto c6
c6: default write *** move S goto c7
c7: default write *** move S goto c8
c8: default write *** move S goto c9
c9: default write *1* move S goto idle
idle: default write *** move S goto idle
lim:
  on *1* write **1 move S goto done
  default write *** move S goto done
"""

GROWING = """
# marks output cell 0 as home; each pass then walks to the end of the ones
# on scratch, adds one, and walks back home
start mark
limit lim
halt done
mark: default write **1 move R goto out
out:
  on *1* write *** move R goto out
  on *0* write *1* move L goto back
back:
  on **1 write *** move R goto out
  default write *** move L goto back
lim: default write *** move S goto done
"""


def test_clock_omega(program):
    o = run(program("clock_omega")).outcome
    assert o == Halted(ZEROS, OMEGA)


def test_finite_halt():
    o = run(assemble(FIVE_STEPS)).outcome
    assert o == Halted(EPReal.parse("0001|0"), Ordinal.of(5))


def test_limit_rule_examples(program):
    flash = run(program("flasher"))
    assert flash.outcome.output[0] == 1 and flash.outcome.stage == OMEGA
    assert flash.limits[0].configuration.tapes[1][0] == 1
    stable = run(assemble(STABLE)).outcome
    assert stable.output[0] == 1 and stable.stage == OMEGA


def test_liminf_rule(program):
    o = run(program("flasher"), rule=LIMINF).outcome
    assert o.output[0] == 0
    with pytest.raises(ValueError):
        run(program("flasher"), rule="median")


def test_translated_limit(program):
    r = run(program("wake"))
    assert r.limits[0].configuration.tapes[1] == EPReal.parse("|10")
    assert r.trace[0]["cycle"] == "translated"


def test_looper_diverges(program):
    r = run(program("looper"))
    assert r.outcome == Diverges(OMEGA, W("w*2"))
    assert detect_divergence(r.limits) == r.outcome
    assert detect_divergence(r.limits[:1]) is None
    assert r.trace[-1]["event"] == "diverge"


def test_clock_omega_repeats_yet_escapes(program):
    r = run(program("clock_omega"), record=5)
    assert len(set(r.configurations)) == 1
    assert detect_divergence(r.limits) is None
    assert detect_divergence([]) is None


def test_budget_invariance(program):
    small = run(program("flasher"), budgets=Budgets(10, 4, 10)).outcome
    large = run(program("flasher"), budgets=Budgets(1000, 4, 1000)).outcome
    assert small == large


def test_growing_workspace_is_undetermined():
    o = run(assemble(GROWING), budgets=Budgets(5000, 4, 100)).outcome
    assert isinstance(o, Undetermined) and o.reason is Reason.STEP_BUDGET
    with pytest.raises(ValueError):
        Budgets(0, 1, 1)


def test_leap_budgets(program):
    o = run(program("looper"), budgets=Budgets(100, 1, 1)).outcome
    assert isinstance(o, Undetermined) and o.reason is Reason.BLOCK_BUDGET


def test_advance_clock():
    assert advance_clock(W("w+3"), False) == W("w+4")
    assert advance_clock(W("w+3"), True) == W("w*2")
    assert advance_clock(ZERO, True) == OMEGA


def test_detect_block_cycle_examples(program):
    idle = program("looper")
    c = initial_configuration(idle)
    cyc = detect_block_cycle([c, step(idle, c)])
    assert (cyc.kind, cyc.length, cyc.displacement) == ("exact", 1, 0)
    assert limit_configuration(idle, cyc) == Configuration("limit", 0, c.tapes)

    march = assemble("start s\nlimit lim\nhalt h\ns: default write *0* move R goto s\nlim: default write *** move S goto h\n")
    configs = [initial_configuration(march)]
    for _ in range(4):
        configs.append(step(march, configs[-1]))
    cyc = detect_block_cycle(configs)
    assert (cyc.kind, cyc.displacement) == ("translated", 1)

    grow = assemble(GROWING)
    configs = [initial_configuration(grow)]
    for _ in range(300):
        configs.append(step(grow, configs[-1]))
    assert detect_block_cycle(configs) is None


def test_detect_block_cycle_limits(program):
    flash = program("flasher")
    configs = [initial_configuration(flash)]
    for _ in range(3):
        configs.append(step(flash, configs[-1]))
    cyc = detect_block_cycle(configs)
    assert limit_configuration(flash, cyc).tapes[1] == EPReal.parse("1|0")

    wake = program("wake")
    configs = [initial_configuration(wake)]
    for _ in range(8):
        configs.append(step(wake, configs[-1]))
    cyc = detect_block_cycle(configs)
    assert cyc.kind == "translated"
    assert limit_configuration(wake, cyc).tapes[1] == EPReal.parse("|10")


def test_oracle_tape_and_queries():
    src = """
    tapes 4
    start s
    limit lim
    halt h
    query q yes y no n
    s: default write **** move S goto q
    y: default write **1* move S goto h
    n: default write **** move S goto h
    lim: default write **** move S goto h
    """
    p = assemble(src)
    assert run(p, oracle=Oracle.finite([ZEROS])).outcome.output[0] == 1
    assert run(p).outcome.output[0] == 0
    flashing_oracle = """
    tapes 4
    start s
    limit lim
    halt h
    s:
      on ***0 write ***1 move S goto s
      on ***1 write ***0 move S goto s
    lim:
      on ***1 write **1* move S goto h
      default write **** move S goto h
    """
    assert run(assemble(flashing_oracle)).outcome.output[0] == 1


def test_trace_events_validate(program):
    for name in ["clock_omega", "flasher", "looper", "wake"]:
        r = run(program(name), trace_steps=5)
        assert r.trace
        for ev in r.trace:
            validate(ev, "trace-event")
    r = run(assemble(FIVE_STEPS), trace_steps=10)
    steps = [ev for ev in r.trace if ev["event"] == "step"]
    assert [ev["stage"] for ev in steps] == ["1", "2", "3", "4", "5"]
    assert steps[3]["changed_cells"] == [[2, 3, 1]]
    assert r.trace[-1]["event"] == "halt" and r.trace[-1]["stage"] == "5"


def random_block_program(rng: random.Random) -> Program:
    names = ["q0", "q1", "q2"]
    table = {}
    for s in names:
        for vec in read_vectors(3):
            write = tuple(rng.randint(0, 1) for _ in range(3))
            table[(s, vec)] = Rule(write, rng.choice((-1, 0, 0, 1)), rng.choice(names))
    for vec in read_vectors(3):
        table[("lim", vec)] = Rule(vec, 0, "done")
    return Program(table, start="q0", limit="lim", halt="done")


def brute_limsup(p: Program, n: int):
    """Limit configuration from an exact repeat, using three full passes of the cycle."""
    configs = [initial_configuration(p)]
    seen = {configs[0]: 0}
    for k in range(1, n):
        c = step(p, configs[-1])
        if c in seen:
            i, length = seen[c], k - seen[c]
            for _ in range(3 * length):
                configs.append(step(p, configs[-1]))
            window = configs[i:]
            tapes = []
            for t in range(3):
                top = max(x.tapes[t].span for x in window) + max(x.head for x in window) + 2
                bits = []
                for x in range(top):
                    vals = {cfg.tapes[t][x] for cfg in window}
                    bits.append(1 if len(vals) > 1 else vals.pop())
                tapes.append(EPReal(bits, window[-1].tapes[t].period))
            return Configuration("lim", 0, tuple(tapes))
        seen[c] = k
        configs.append(c)
    return None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_limsup_matches_brute_force(seed):
    p = random_block_program(random.Random(seed))
    want = brute_limsup(p, 300)
    assume(want is not None)
    r = run(p, budgets=Budgets(10_000, 2, 4))
    assert isinstance(r.outcome, Halted)
    assert r.limits[0].configuration == want
    assert r.outcome.output == want.tapes[2]
