"""Compiled successor-step loop with in-block cycle detection.

The kernel runs one omega-block on dense int8 tape arrays and returns as
soon as something needs Python's attention: a halt, a query, a detected
cycle, an exhausted step budget, or the head reaching the end of the
allocated arrays.  All loop state lives in ``regs`` so a call can resume
exactly where the previous one stopped.

Cells at or beyond ``hi`` (one past the rightmost head position of the
block) have never been written and still hold the block's base tape, which
is described by ``bpat``/``plen``/``per``.
"""
from __future__ import annotations

import numpy as np
from numba import njit

HALT, QUERY, EXACT, TRANSLATED, BUDGET, GROW = 1, 2, 3, 4, 5, 6

(
    R_STEPS,
    R_STATE,
    R_HEAD,
    R_HI,
    R_EX_STEP,
    R_EX_NEXT,
    R_EX_STATE,
    R_EX_HEAD,
    R_EX_HI,
    R_EX_VALID,
    R_TR_STEP,
    R_TR_NEXT,
    R_TR_STATE,
    R_TR_HEAD,
    R_TR_HI,
    R_TR_MIN,
    R_TR_VALID,
    R_TR_ON,
    R_C_START,
    R_C_LEN,
    R_C_DISP,
    R_C_FLOOR,
) = range(22)
NREGS = 24


@njit(cache=True)
def _mix(t, x):
    z = np.uint64(x) * np.uint64(8) + np.uint64(t) + np.uint64(1)
    z = z * np.uint64(0x9E3779B97F4A7C15)
    z ^= z >> np.uint64(30)
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z = z * np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


@njit(cache=True)
def _base_at(bpat, plen, per, t, y):
    if y < plen[t]:
        return bpat[t, y]
    return bpat[t, plen[t] + (y - plen[t]) % per[t]]


@njit(cache=True)
def _translated_match(tapes, tr_snap, bpat, plen, per, T, hi, tr_hi, m, d, lo, top):
    for t in range(T):
        for x in range(lo, top):
            y = x + d
            if y < hi:
                now = tapes[t, y]
            else:
                now = _base_at(bpat, plen, per, t, y)
            if x < tr_hi:
                then = tr_snap[t, x]
            else:
                then = _base_at(bpat, plen, per, t, x)
            if now != then:
                return False
    return True


@njit(cache=True)
def run_block(
    nxt,
    wbits,
    mv,
    halt,
    query,
    tapes,
    last_change,
    bpat,
    plen,
    per,
    period_lcm,
    maxplen,
    ex_snap,
    tr_snap,
    regs,
    hashes,
    budget,
    log_cap,
    log_ohead,
    log_write,
    log_state,
    log_head,
):
    T = tapes.shape[0]
    W = tapes.shape[1]
    steps = regs[R_STEPS]
    state = regs[R_STATE]
    head = regs[R_HEAD]
    hi = regs[R_HI]
    h = hashes[0]
    code = 0
    while True:
        if head + 1 >= W:
            code = GROW
            break
        # exact repeat of the full configuration against the Brent snapshot
        if (
            regs[R_EX_VALID] == 1
            and steps > regs[R_EX_STEP]
            and state == regs[R_EX_STATE]
            and head == regs[R_EX_HEAD]
            and h == hashes[1]
        ):
            exh = regs[R_EX_HI]
            same = True
            for t in range(T):
                for x in range(hi):
                    if x < exh:
                        v = ex_snap[t, x]
                    else:
                        v = _base_at(bpat, plen, per, t, x)
                    if tapes[t, x] != v:
                        same = False
                        break
                if not same:
                    break
            if same:
                regs[R_C_START] = regs[R_EX_STEP]
                regs[R_C_LEN] = steps - regs[R_EX_STEP]
                code = EXACT
                break
        if steps >= regs[R_EX_NEXT]:
            for t in range(T):
                for x in range(hi):
                    ex_snap[t, x] = tapes[t, x]
            regs[R_EX_STEP] = steps
            regs[R_EX_STATE] = state
            regs[R_EX_HEAD] = head
            regs[R_EX_HI] = hi
            regs[R_EX_VALID] = 1
            hashes[1] = h
            regs[R_EX_NEXT] = max(1, 2 * steps)
        if steps >= budget:
            code = BUDGET
            break

        r = 0
        for t in range(T):
            r = (r << 1) | tapes[t, head]
        w = wbits[state, r]
        for t in range(T):
            b = (w >> (T - 1 - t)) & 1
            if tapes[t, head] != b:
                tapes[t, head] = b
                h ^= _mix(t, head)
                last_change[t, head] = steps + 1
        if steps < log_cap:
            log_ohead[steps] = head
            log_write[steps] = w
        head += mv[state, r]
        if head < 0:
            head = 0
        state = nxt[state, r]
        if steps < log_cap:
            log_state[steps] = state
            log_head[steps] = head
        steps += 1
        if head < regs[R_TR_MIN]:
            regs[R_TR_MIN] = head

        if head >= hi:
            hi = head + 1
            if regs[R_TR_ON] == 1:
                if regs[R_TR_VALID] == 1 and state == regs[R_TR_STATE]:
                    d = head - regs[R_TR_HEAD]
                    m = regs[R_TR_MIN]
                    if d > 0 and m >= 1 and d % period_lcm == 0:
                        tr_hi = regs[R_TR_HI]
                        top = max(tr_hi, hi - d, maxplen)
                        near = regs[R_TR_HEAD]
                        lo = max(m, near - 4)
                        if _translated_match(
                            tapes, tr_snap, bpat, plen, per, T, hi, tr_hi, m, d, lo, min(top, near + 4)
                        ) and _translated_match(
                            tapes, tr_snap, bpat, plen, per, T, hi, tr_hi, m, d, m, top
                        ):
                            regs[R_C_START] = regs[R_TR_STEP]
                            regs[R_C_LEN] = steps - regs[R_TR_STEP]
                            regs[R_C_DISP] = d
                            regs[R_C_FLOOR] = m
                            code = TRANSLATED
                            break
                if steps >= regs[R_TR_NEXT]:
                    for t in range(T):
                        for x in range(hi):
                            tr_snap[t, x] = tapes[t, x]
                    regs[R_TR_STEP] = steps
                    regs[R_TR_STATE] = state
                    regs[R_TR_HEAD] = head
                    regs[R_TR_HI] = hi
                    regs[R_TR_MIN] = head
                    regs[R_TR_VALID] = 1
                    regs[R_TR_NEXT] = 2 * steps
        if state == halt:
            code = HALT
            break
        if state == query:
            code = QUERY
            break

    regs[R_STEPS] = steps
    regs[R_STATE] = state
    regs[R_HEAD] = head
    regs[R_HI] = hi
    hashes[0] = h
    return code
