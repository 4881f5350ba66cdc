"""Transfinite executor.

Successor steps inside an omega-block run in the compiled kernel.  When the
kernel finds an exact or translated cycle, the block's limit is computed
cell by cell and the clock jumps to the next limit ordinal.

Above the first level, the executor records the configurations it sees at
limit stages.  Each cell carries an epoch tag: the epoch of its last change.
A limit gets an epoch number when it is reached, so "changed somewhere in
(alpha, beta]" reduces to "tag greater than the epoch of alpha".

* If the configuration at a limit lambda with low exponent e repeats one
  seen at an earlier multiple of w^e in the same w^(e+1)-block, the run
  between the two repeats forever.  The clock jumps to the next multiple of
  w^(e+1).  Every cell that changed in between goes to 1 (0 under liminf).
* If that limit configuration already has every changed cell at 1, the
  jump reproduces it and the machine never halts: :class:`Diverges`.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from ..machine import Configuration, Oracle, Program
from ..ordinal import ONE, ZERO, Ordinal, add, format_ordinal, next_limit, next_multiple
from ..tape import ZEROS, EPReal, EPSeq, lcm
from . import kernel as K

LIMSUP, LIMINF = "limsup", "liminf"


class Reason(str, enum.Enum):
    STEP_BUDGET = "step_budget"
    BLOCK_BUDGET = "block_budget"
    LIMIT_DEPTH_BUDGET = "limit_depth_budget"
    UNREPRESENTABLE_LIMIT = "unrepresentable_limit"


@dataclass(frozen=True)
class Budgets:
    max_steps_per_block: int = 1_000_000
    max_limit_depth: int = 4
    max_total_leaps: int = 10_000

    def __post_init__(self):
        if min(self.max_steps_per_block, self.max_limit_depth, self.max_total_leaps) < 1:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class Halted:
    output: EPReal
    stage: Ordinal
    kind = "halted"


@dataclass(frozen=True)
class Diverges:
    first_limit: Ordinal
    repeat_limit: Ordinal
    kind = "diverges"


@dataclass(frozen=True)
class Undetermined:
    reason: Reason
    last_stage: Ordinal
    diagnostics: str = ""
    kind = "undetermined"


RunOutcome = Halted | Diverges | Undetermined


@dataclass(frozen=True)
class LimitRecord:
    """A configuration at a limit stage with the epoch bookkeeping needed to
    tell which cells changed since."""

    stage: Ordinal
    configuration: Configuration
    epoch: int
    tags: tuple[EPSeq, ...]


@dataclass
class Run:
    outcome: RunOutcome
    trace: list[dict] = field(default_factory=list)
    limits: list[LimitRecord] = field(default_factory=list)
    configurations: list[Configuration] = field(default_factory=list)
    steps: int = 0

    def trace_jsonl(self) -> str:
        return "".join(json.dumps(ev, sort_keys=True) + "\n" for ev in self.trace)


def advance_clock(current: Ordinal, leap: bool) -> Ordinal:
    return next_limit(current) if leap else add(current, ONE)


# tape and tag helpers


def materialize(seq: EPSeq, n: int, dtype=np.int64) -> np.ndarray:
    out = np.empty(n, dtype=dtype)
    k = min(n, len(seq.prefix))
    if k:
        out[:k] = seq.prefix[:k]
    if n > k:
        per = seq.period
        if len(per) == 1:
            out[k:] = per[0]
        else:
            reps = -(-(n - k) // len(per))
            out[k:] = np.tile(np.array(per, dtype=dtype), reps)[: n - k]
    return out


def _extent(seqs) -> tuple[int, int]:
    top, per = 0, 1
    for s in seqs:
        top = max(top, len(s.prefix))
        per = lcm(per, len(s.period))
    return top, per


def _split(values: np.ndarray, top: int, cls=EPSeq) -> EPSeq:
    vals = values.tolist()
    return cls(vals[:top], vals[top:])


def changed_since(tags: EPSeq, epoch: int) -> EPSeq:
    return tags.map(lambda v: v > epoch)


def fixed_point(tapes, tags, epoch: int, rule: str = LIMSUP) -> bool:
    """Every cell tagged after ``epoch`` holds the limit rule's default value."""
    want = 1 if rule == LIMSUP else 0
    for tape, tag in zip(tapes, tags):
        top, per = _extent((tape, tag))
        n = top + per
        ch = materialize(tag, n) > epoch
        if np.any(materialize(tape, n)[ch] != want):
            return False
    return True


def _force(tape: EPReal, tag: EPSeq, epoch: int, value: int) -> EPReal:
    top, per = _extent((tape, tag))
    n = top + per
    vals = materialize(tape, n)
    vals[materialize(tag, n) > epoch] = value
    return _split(vals, top, EPReal)


def _retag(tag: EPSeq, changed: EPSeq, epoch: int) -> EPSeq:
    top, per = _extent((tag, changed))
    n = top + per
    vals = materialize(tag, n)
    vals[materialize(changed, n, np.bool_)] = epoch
    return _split(vals, top)


def detect_divergence(history: list[LimitRecord], rule: str = LIMSUP) -> Diverges | None:
    """Check the newest limit record against every earlier one.

    A repeat counts only if every cell that changed between the two stages
    holds 1 (0 under liminf) in the repeated configuration; then the limit of
    the repetition reproduces it and the loop is closed under limits.
    """
    if not history:
        return None
    last = history[-1]
    for rec in history[:-1]:
        if rec.configuration == last.configuration and rec.stage < last.stage:
            if fixed_point(last.configuration.tapes, last.tags, rec.epoch, rule):
                return Diverges(rec.stage, last.stage)
    return None


# compiled program tables


@dataclass
class _Compiled:
    index: dict
    names: list
    nxt: np.ndarray
    wbits: np.ndarray
    mv: np.ndarray
    halt: int
    query: int
    tape_count: int


def compile_program(p: Program) -> _Compiled:
    cached = getattr(p, "_compiled", None)
    if cached is not None:
        return cached
    names = list(p.states)
    index = {s: i for i, s in enumerate(names)}
    T = p.tape_count
    R = 1 << T
    nxt = np.zeros((len(names), R), dtype=np.int64)
    wbits = np.zeros((len(names), R), dtype=np.int64)
    mv = np.zeros((len(names), R), dtype=np.int64)
    for (state, read), rule in p.transitions.items():
        i = index[state]
        r = 0
        for b in read:
            r = (r << 1) | b
        w = 0
        for b in rule.write:
            w = (w << 1) | b
        nxt[i, r] = index[rule.goto]
        wbits[i, r] = w
        mv[i, r] = rule.move
    query = index[p.query] if p.query is not None else -1
    cp = _Compiled(index, names, nxt, wbits, mv, index[p.halt], query, T)
    object.__setattr__(p, "_compiled", cp)
    return cp


def _bits_of(w: int, T: int) -> tuple[int, ...]:
    return tuple((w >> (T - 1 - t)) & 1 for t in range(T))


class _Block:
    """Dense working copy of one omega-block's tapes."""

    def __init__(self, cp: _Compiled, tapes: tuple[EPReal, ...], state: int, budget: int, log_cap: int):
        self.cp = cp
        self.base = tapes
        T = len(tapes)
        spans = max(t.span for t in tapes)
        self.bpat = np.zeros((T, spans), dtype=np.int8)
        self.plen = np.zeros(T, dtype=np.int64)
        self.per = np.zeros(T, dtype=np.int64)
        period_lcm = 1
        for i, t in enumerate(tapes):
            cells = t.prefix + t.period
            self.bpat[i, : len(cells)] = cells
            self.plen[i] = len(t.prefix)
            self.per[i] = len(t.period)
            period_lcm = lcm(period_lcm, len(t.period))
        self.period_lcm = period_lcm
        self.maxplen = int(self.plen.max())
        W = 64
        while W < 2 * spans + 8:
            W *= 2
        self.tapes = self._fill(0, W)
        self.last_change = np.full((T, W), -1, dtype=np.int64)
        self.ex_snap = np.zeros((T, W), dtype=np.int8)
        self.tr_snap = np.zeros((T, W), dtype=np.int8)
        self.regs = np.zeros(K.NREGS, dtype=np.int64)
        self.regs[K.R_STATE] = state
        self.regs[K.R_HI] = 1
        self.regs[K.R_TR_ON] = 1
        self.regs[K.R_TR_NEXT] = 1
        self.hashes = np.zeros(2, dtype=np.uint64)
        self.budget = budget
        self.log_cap = log_cap
        self.log_ohead = np.zeros(log_cap, dtype=np.int64)
        self.log_write = np.zeros(log_cap, dtype=np.int64)
        self.log_state = np.zeros(log_cap, dtype=np.int64)
        self.log_head = np.zeros(log_cap, dtype=np.int64)

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        out = np.empty((len(self.base), hi - lo), dtype=np.int8)
        for i, t in enumerate(self.base):
            vals = materialize(t, hi, np.int8)
            out[i] = vals[lo:hi]
        return out

    def _grow(self):
        W = self.tapes.shape[1]
        T = self.tapes.shape[0]
        self.tapes = np.concatenate([self.tapes, self._fill(W, 2 * W)], axis=1)
        self.last_change = np.concatenate([self.last_change, np.full((T, W), -1, dtype=np.int64)], axis=1)
        self.ex_snap = np.concatenate([self.ex_snap, np.zeros((T, W), dtype=np.int8)], axis=1)
        self.tr_snap = np.concatenate([self.tr_snap, np.zeros((T, W), dtype=np.int8)], axis=1)

    def run(self) -> int:
        cp = self.cp
        while True:
            code = K.run_block(
                cp.nxt, cp.wbits, cp.mv, cp.halt, cp.query,
                self.tapes, self.last_change, self.bpat, self.plen, self.per,
                self.period_lcm, self.maxplen, self.ex_snap, self.tr_snap,
                self.regs, self.hashes, self.budget, self.log_cap,
                self.log_ohead, self.log_write, self.log_state, self.log_head,
            )
            if code != K.GROW:
                return code
            self._grow()

    @property
    def steps(self) -> int:
        return int(self.regs[K.R_STEPS])

    @property
    def state(self) -> int:
        return int(self.regs[K.R_STATE])

    @property
    def head(self) -> int:
        return int(self.regs[K.R_HEAD])

    @property
    def hi(self) -> int:
        return int(self.regs[K.R_HI])

    def tape(self, t: int) -> EPReal:
        """Current contents of tape ``t`` as a finite description."""
        base = self.base[t]
        hi = self.hi
        top = max(hi, len(base.prefix))
        per = len(base.period)
        vals = materialize(base, top + per, np.int8)
        vals[:hi] = self.tapes[t, :hi]
        return _split(vals, top, EPReal)

    def exact_limit(self, rule: str):
        """Limit tapes and per-tape changed-cell sets after an exact cycle."""
        start = int(self.regs[K.R_C_START])
        hi = self.hi
        out, changed = [], []
        for t, base in enumerate(self.base):
            top = max(hi, len(base.prefix))
            per = len(base.period)
            vals = materialize(base, top + per, np.int8)
            vals[:hi] = self.tapes[t, :hi]
            lc = self.last_change[t, :hi]
            vals[:hi][lc > start] = 1 if rule == LIMSUP else 0
            out.append(_split(vals, top, EPReal))
            changed.append(EPSeq((lc >= 0).tolist(), (False,)))
        return tuple(out), tuple(changed)

    def translated_limit(self):
        start = int(self.regs[K.R_C_START])
        d = int(self.regs[K.R_C_DISP])
        m = int(self.regs[K.R_C_FLOOR])
        hi = self.hi
        out, changed = [], []
        for t, base in enumerate(self.base):
            cur = materialize(self.tape(t), m + d, np.int8)
            out.append(EPReal(cur[:m].tolist(), cur[m:].tolist()))
            lc = self.last_change[t, :hi]
            now = lc >= 0
            moving = np.nonzero(lc > start)[0]
            first = {}
            for p in moving.tolist():
                first.setdefault(p % d, p)
            if first:
                xs = np.arange(hi)
                res = xs % d
                firsts = np.full(d, np.iinfo(np.int64).max, dtype=np.int64)
                for r, p in first.items():
                    firsts[r] = p
                now = now | (xs >= firsts[res])
            period = [((hi + i) % d) in first for i in range(d)]
            changed.append(EPSeq(now.tolist(), period))
        return tuple(out), tuple(changed)

    def replay(self, start: Configuration, count: int, names: list) -> list[Configuration]:
        """Configurations after each of the first ``count`` logged steps."""
        T = len(self.base)
        out = []
        c = start
        for k in range(min(count, self.steps, self.log_cap)):
            bits = _bits_of(int(self.log_write[k]), T)
            h = int(self.log_ohead[k])
            tapes = tuple(tp if tp[h] == b else tp.with_cells({h: b}) for tp, b in zip(c.tapes, bits))
            c = Configuration(names[int(self.log_state[k])], int(self.log_head[k]), tapes)
            out.append(c)
        return out

    def extend(self, configs: list[Configuration], count: int, code: int) -> None:
        """Continue ``configs`` (index k = after k steps) to ``count`` steps along the detected cycle.

        An exact cycle repeats.  A translated cycle repeats shifted right by
        its displacement, over a frozen stretch of tape below the floor.
        """
        j = self.steps
        L = int(self.regs[K.R_C_LEN])
        anchor = configs[j]
        d = int(self.regs[K.R_C_DISP]) if code == K.TRANSLATED else 0
        m = int(self.regs[K.R_C_FLOOR])
        frozen = [t.head(m + d) for t in anchor.tapes] if d else None
        while len(configs) <= count:
            prev = configs[len(configs) - L]
            if not d:
                configs.append(prev)
                continue
            tapes = []
            for keep, t in zip(frozen, prev.tapes):
                tail = t.shift(m)
                tapes.append(EPReal(keep + list(tail.prefix), tail.period))
            configs.append(Configuration(prev.state, prev.head + d, tuple(tapes)))


def _stage_text(a: Ordinal) -> str:
    return format_ordinal(a)


def run(
    program: Program,
    input_real: EPReal = ZEROS,
    oracle: Oracle | None = None,
    budgets: Budgets | None = None,
    *,
    rule: str = LIMSUP,
    trace_steps: int = 0,
    record: int = 0,
    full_tapes: bool = True,
) -> Run:
    """Execute ``program`` on ``input_real`` through transfinite time.

    ``trace_steps`` successor steps at the start of every block are written to
    the trace; ``record`` keeps that many configurations of the first block
    in :attr:`Run.configurations`, carried on along the detected cycle when
    the block was cut short by one.
    """
    if rule not in (LIMSUP, LIMINF):
        raise ValueError(f"unknown limit rule {rule!r}")
    budgets = budgets or Budgets()
    oracle = oracle or Oracle.empty()
    cp = compile_program(program)
    T = program.tape_count
    fill = 1 if rule == LIMSUP else 0

    tapes = (input_real,) + (ZEROS,) * (T - 1)
    tags = tuple(EPSeq((), (0,)) for _ in range(T))
    epoch = 0
    stage = ZERO
    state = program.start
    result = Run(outcome=None)
    trace = result.trace

    first = LimitRecord(ZERO, Configuration(state, 0, tapes), 0, tags)
    history: dict[tuple, list[LimitRecord]] = {}
    tables: dict[int, dict] = {}
    leaps = 0
    first_block = True

    def finish(outcome):
        result.outcome = outcome
        return result

    while True:
        epoch += 1
        block_start = Configuration(state, 0, tapes)
        if first_block and record:
            result.configurations.append(block_start)
        blk = _Block(cp, tapes, cp.index[state], budgets.max_steps_per_block, max(trace_steps, record if first_block else 0))
        while True:
            code = blk.run()
            if code != K.QUERY:
                break
            oracle_tape = blk.tape(3)
            answer = oracle_tape in oracle
            target = program.yes if answer else program.no
            blk.regs[K.R_STATE] = cp.index[target]
            blk.regs[K.R_TR_ON] = 0
            blk.regs[K.R_TR_VALID] = 0
            trace.append({
                "event": "query",
                "stage": _stage_text(add(stage, blk.steps)),
                "state": target,
                "head": blk.head,
                "answer": answer,
            })
            if target == program.halt:
                code = K.HALT
                break
        result.steps += blk.steps

        if trace_steps:
            prev = block_start
            for k, c in enumerate(blk.replay(block_start, trace_steps, cp.names)):
                h = int(blk.log_ohead[k])
                # a step into the halt state is stamped like the halt itself
                at = add(ONE, add(stage, k)) if c.state == program.halt else add(stage, k + 1)
                trace.append({
                    "event": "step",
                    "stage": _stage_text(at),
                    "state": c.state,
                    "head": c.head,
                    "changed_cells": [[t, h, c.tapes[t][h]] for t in range(T) if c.tapes[t][h] != prev.tapes[t][h]],
                })
                prev = c
        if first_block and record:
            result.configurations.extend(blk.replay(block_start, record, cp.names))
            if code in (K.EXACT, K.TRANSLATED) and len(result.configurations) == blk.steps + 1:
                blk.extend(result.configurations, record, code)
            del result.configurations[record:]
        first_block = False

        if code == K.HALT:
            final_stage = add(ONE, add(stage, blk.steps - 1))
            out = blk.tape(2)
            ev = {"event": "halt", "stage": _stage_text(final_stage), "state": program.halt, "head": blk.head}
            if full_tapes:
                ev["tapes"] = [blk.tape(t).to_text() for t in range(T)]
            trace.append(ev)
            return finish(Halted(out, final_stage))
        if code == K.BUDGET:
            last = add(stage, blk.steps)
            msg = f"no cycle found within {budgets.max_steps_per_block} steps of the block at {stage}"
            trace.append({"event": "undetermined", "stage": _stage_text(last), "reason": Reason.STEP_BUDGET.value})
            return finish(Undetermined(Reason.STEP_BUDGET, last, msg))

        if code == K.EXACT:
            tapes, changed = blk.exact_limit(rule)
        else:
            tapes, changed = blk.translated_limit()
        tags = tuple(_retag(tg, ch, epoch) for tg, ch in zip(tags, changed))
        lam = next_limit(stage)
        kind = "exact" if code == K.EXACT else "translated"

        # process the limit, jumping further while higher-level repeats occur
        while True:
            leaps += 1
            if leaps > budgets.max_total_leaps:
                trace.append({"event": "undetermined", "stage": _stage_text(lam), "reason": Reason.BLOCK_BUDGET.value})
                return finish(Undetermined(Reason.BLOCK_BUDGET, lam, f"more than {budgets.max_total_leaps} limit stages"))
            e = lam.low_exponent
            if e > budgets.max_limit_depth:
                trace.append({"event": "undetermined", "stage": _stage_text(lam), "reason": Reason.LIMIT_DEPTH_BUDGET.value})
                return finish(Undetermined(Reason.LIMIT_DEPTH_BUDGET, lam, f"limit {lam} is above w^{budgets.max_limit_depth}"))
            epoch += 1
            config = Configuration(program.limit, 0, tapes)
            rec = LimitRecord(lam, config, epoch, tags)
            result.limits.append(rec)
            ev = {"event": "leap", "stage": _stage_text(lam), "state": program.limit, "head": 0, "cycle": kind}
            if full_tapes:
                ev["tapes"] = [t.to_text() for t in tapes]
            trace.append(ev)

            key = (program.limit, tapes)
            seen = history.setdefault(key, [])
            for old in seen:
                if fixed_point(tapes, tags, old.epoch, rule):
                    trace.append({
                        "event": "diverge",
                        "stage": _stage_text(lam),
                        "first_limit": _stage_text(old.stage),
                        "repeat_limit": _stage_text(lam),
                    })
                    return finish(Diverges(old.stage, lam))
            seen.append(rec)

            for j in range(1, e):
                tables[j] = {key: rec}
            table = tables.get(e)
            if table is None:
                table = tables[e] = {(program.start, first.configuration.tapes): first}
            prev = table.get(key)
            if prev is None:
                table[key] = rec
                break
            # the stretch from prev to lam repeats until the next w^(e+1) multiple
            changed = tuple(changed_since(tg, prev.epoch) for tg in tags)
            tapes = tuple(_force(tp, tg, prev.epoch, fill) for tp, tg in zip(tapes, tags))
            epoch += 1
            tags = tuple(_retag(tg, ch, epoch) for tg, ch in zip(tags, changed))
            lam = next_multiple(lam, e + 1)
            kind = f"repeat of {prev.stage}"

        stage = lam
        state = program.limit
