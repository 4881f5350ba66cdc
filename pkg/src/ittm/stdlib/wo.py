"""Count-through decider for well-orders with finite field.

The input real codes a relation: i precedes j iff bit pair(i, j) is 1.  The
run is a sequence of passes over the input, each filling one omega-block:

* ``linear``: every related pair (a, b) must have a != b and b not before a.
* ``least``: find a least element.  The current guess g sits on the scratch
  tape.  Whenever a pair (i, g) turns up, g becomes i, the flag cell F is
  flashed and the pass restarts.  If the guess changes unboundedly often, F
  reads 1 at the limit and the input is rejected.  If no pair is left, the
  field is exhausted and the input is accepted.
* ``compare``: every other element y of the field must satisfy g before y.
* ``erase``: delete every pair that mentions g, then start over at ``least``.

Erasing g can strand an element whose only pairs were with g.  So the
``linear`` pass also records the field as a bitmap S, and each erase clears
g from it.  Once no pair is left, the input is accepted only if at most one
element of S was never erased.  A relation that survives all of this is a
strict linear order, which for a finite field is a well-order.

Layout.  Scratch cells 0 and 1 hold a two-cell sentinel; no other pair of
adjacent scratch cells is ever both 1.  That lets the head find cell 0 by
moving left until it has seen two 1s in a row.  Flags sit at odd cells
3..9.  Unary counters I, J, A, B, G and N are interleaved with the bitmap S from
cell 10 on: bit x of track r lives at 10 + 14x + 2r + 1.  N is one more than
the largest field element and bounds scans of S.  The output tape carries a
single marker M while a pair is being examined.  Its cell is decoded by
walking M down to 0 while stepping (I, J) through the pairing order.  M is
later walked back up the same way.  The verdict is output cell 0.
"""
from __future__ import annotations

from ..machine import Program
from .builder import Builder

ORIGIN = 10
TRACK_NAMES = "IJABGSN"
I, J, A, B, G, S, N = range(len(TRACK_NAMES))
STRIDE = 2 * len(TRACK_NAMES)
FLAG_F, PHASE0, PHASE1, GUESS_SET = 3, 5, 7, 9
KEEP = "***"


def track_cell(r: int, x: int = 0) -> int:
    return ORIGIN + STRIDE * x + 2 * r + 1


class _Gen(Builder):
    """Continuation-passing generator: each method returns an entry state."""

    def __init__(self):
        super().__init__(name="wo decider")
        self.comments.append("count-through well-order decider for finite fields")

    # movement

    def walk(self, n: int, d: str, then: str) -> str:
        nxt = then
        for _ in range(n):
            nxt = self.state(self.fresh("mv"), (None, KEEP, d, nxt))
        return nxt

    def hop(self, read, write, delta: int, then: str):
        """A rule that writes and then travels ``delta`` cells before ``then``."""
        if delta == 0:
            return (read, write, "S", then)
        d = "R" if delta > 0 else "L"
        return (read, write, d, self.walk(abs(delta) - 1, d, then))

    def home(self, then: str) -> str:
        a, b = self.fresh("homeA"), self.fresh("homeB")
        self.state(a, ("*1*", KEEP, "L", b), ("*0*", KEEP, "L", a))
        self.state(b, ("*1*", KEEP, "S", then), ("*0*", KEEP, "L", a))
        return a

    def at(self, cell: int, *rules) -> str:
        """From cell 0, go to ``cell`` and apply ``rules`` there."""
        here = self.state(self.fresh("at"), *rules)
        return self.walk(cell, "R", here)

    def alias(self) -> str:
        return self.fresh("loop")

    def bind(self, name: str, target: str) -> str:
        return self.goto(name, target)

    # flags

    def flag_read(self, cell: int, if1: str, if0: str) -> str:
        return self.at(cell, ("*1*", KEEP, "S", self.home(if1)), ("*0*", KEEP, "S", self.home(if0)))

    def flag_write(self, cell: int, v: int, then: str) -> str:
        return self.at(cell, (None, f"*{v}*", "S", self.home(then)))

    # unary counters

    def t_zero(self, r: int, if_zero: str, if_pos: str) -> str:
        return self.flag_read(track_cell(r), if_pos, if_zero)

    def t_inc(self, r: int, then: str) -> str:
        st = self.alias()
        self.state(st, self.hop("*1*", KEEP, STRIDE, st), ("*0*", "*1*", "S", self.home(then)))
        return self.walk(track_cell(r), "R", st)

    def t_dec(self, r: int, then: str) -> str:
        first, scan, clear = self.alias(), self.alias(), self.alias()
        self.state(clear, (None, "*0*", "S", self.home(then)))
        self.state(scan, self.hop("*1*", KEEP, STRIDE, scan), self.hop("*0*", KEEP, -STRIDE, clear))
        self.state(first, self.hop(None, KEEP, STRIDE, scan))
        return self.walk(track_cell(r), "R", first)

    def t_clear(self, r: int, then: str) -> str:
        st = self.alias()
        self.state(st, self.hop("*1*", "*0*", STRIDE, st), ("*0*", KEEP, "S", self.home(then)))
        return self.walk(track_cell(r), "R", st)

    def t_copy(self, src: int, dst: int, then: str) -> str:
        rd, w0, w1 = self.alias(), self.alias(), self.alias()
        delta = 2 * (dst - src)
        back = STRIDE - delta
        self.state(rd, self.hop("*0*", KEEP, delta, w0), self.hop("*1*", KEEP, delta, w1))
        self.state(w1, self.hop(None, "*1*", back, rd))
        self.state(w0, self.hop("*1*", "*0*", back, rd), ("*0*", KEEP, "S", self.home(then)))
        return self.walk(track_cell(src), "R", rd)

    def t_eq(self, a: int, b: int, yes: str, no: str) -> str:
        rd, c0, c1 = self.alias(), self.alias(), self.alias()
        delta = 2 * (b - a)
        back = STRIDE - delta
        self.state(rd, self.hop("*0*", KEEP, delta, c0), self.hop("*1*", KEEP, delta, c1))
        self.state(c0, ("*0*", KEEP, "S", self.home(yes)), ("*1*", KEEP, "S", self.home(no)))
        self.state(c1, self.hop("*1*", KEEP, back, rd), ("*0*", KEEP, "S", self.home(no)))
        return self.walk(track_cell(a), "R", rd)

    def eq_pair(self, x: int, y: int, yes: str, no: str) -> str:
        """(I, J) == (x, y)?"""
        return self.t_eq(I, x, self.t_eq(J, y, yes, no), no)

    def next_pair(self, then: str) -> str:
        """Advance (I, J) one place in the pairing order."""
        pos = self.t_dec(I, self.t_inc(J, then))
        st, put = self.alias(), self.alias()
        done = self.state(self.fresh("fin"), (None, "*1*", "S", self.home(then)))
        dj = 2 * (I - J)
        self.state(st, self.hop("*1*", "*0*", dj, put), self.hop("*0*", KEEP, dj, done))
        self.state(put, self.hop(None, "*1*", STRIDE - dj, st))
        zero = self.walk(track_cell(J), "R", st)
        return self.t_zero(I, zero, pos)

    def prev_pair(self, then: str) -> str:
        """Step (I, J) back one place in the pairing order; (I, J) != (0, 0)."""
        pos = self.t_dec(J, self.t_inc(I, then))
        st, chk, put = self.alias(), self.alias(), self.alias()
        to_j = track_cell(J) - track_cell(I) - STRIDE
        self.state(st, self.hop(None, "*0*", STRIDE, chk))
        self.state(chk, self.hop("*1*", KEEP, to_j, put), ("*0*", KEEP, "S", self.home(then)))
        self.state(put, self.hop(None, "*1*", -to_j, st))
        zero = self.walk(track_cell(I), "R", st)
        return self.t_zero(J, zero, pos)

    def bit_write(self, bits: int, index: int, v: int, then: str) -> str:
        """Set bit ``index`` (a unary counter) of the bitmap track ``bits`` to ``v``."""
        st = self.alias()
        put = self.state(self.fresh("put"), (None, f"*{v}*", "S", self.home(then)))
        self.state(st, self.hop("*1*", KEEP, STRIDE, st), self.hop("*0*", KEEP, 2 * (bits - index), put))
        return self.walk(track_cell(index), "R", st)

    def raise_bound(self, index: int, then: str) -> str:
        """N := max(N, index + 1)."""
        st, more = self.alias(), self.alias()
        delta = 2 * (N - index)
        last = self.state(self.fresh("put"), (None, "*1*", "S", self.home(then)))
        self.state(st, self.hop("*1*", KEEP, delta, more), self.hop("*0*", KEEP, delta, last))
        self.state(more, self.hop(None, "*1*", STRIDE - delta, st))
        return self.walk(track_cell(index), "R", st)

    def at_most_one(self, bits: int, yes: str, no: str) -> str:
        """Does the bitmap track ``bits`` hold at most one 1 below N?"""
        bound = [self.alias(), self.alias()]
        look = [self.alias(), self.alias()]
        delta = 2 * (bits - N)
        for seen in (0, 1):
            self.state(bound[seen], self.hop("*1*", KEEP, delta, look[seen]), ("*0*", KEEP, "S", self.home(yes)))
            hit = self.hop("*1*", KEEP, STRIDE - delta, bound[1]) if seen == 0 else ("*1*", KEEP, "S", self.home(no))
            self.state(look[seen], hit, self.hop("*0*", KEEP, STRIDE - delta, bound[seen]))
        return self.walk(track_cell(N), "R", bound[0])

    # the cell marker M on the output tape

    def m_at_zero(self, yes: str, no: str) -> str:
        return self.state(self.fresh("m0"), ("**1", KEEP, "S", yes), ("**0", KEEP, "S", no))

    def m_shift(self, d: str, then: str) -> str:
        find, put = self.alias(), self.alias()
        self.state(find, ("**0", KEEP, "R", find), ("**1", "**0", d, put))
        self.state(put, (None, "**1", "S", self.home(then)))
        return find

    def decode(self, then: str) -> str:
        """M at k, (I, J) = (0, 0)  ->  M at 0, (I, J) = unpair(k)."""
        loop = self.alias()
        self.bind(loop, self.m_at_zero(then, self.m_shift("L", self.next_pair(loop))))
        return loop

    def forward_to(self, x: int, y: int, then: str) -> str:
        """M at 0, (I, J) = (0, 0)  ->  M at pair(x, y), (I, J) = (x, y)."""
        loop = self.alias()
        self.bind(loop, self.eq_pair(x, y, then, self.next_pair(self.m_shift("R", loop))))
        return loop

    def back_to_zero(self, then: str) -> str:
        loop = self.alias()
        step = self.prev_pair(self.m_shift("L", loop))
        self.bind(loop, self.t_zero(I, self.t_zero(J, then, step), step))
        return loop

    def lookup(self, x: int, y: int, if1: str, if0: str) -> str:
        """Read input bit pair(x, y); M and (I, J) end where they started (0 and (0, 0))."""
        find = self.alias()
        self.state(
            find,
            ("**0", KEEP, "R", find),
            ("1*1", KEEP, "S", self.home(self.back_to_zero(if1))),
            ("0*1", KEEP, "S", self.home(self.back_to_zero(if0))),
        )
        return self.forward_to(x, y, find)

    # passes

    def resume(self, scan: str, erase: bool = False) -> str:
        """Walk M back to the pair under examination, drop it and scan on."""
        find = self.alias()
        write = "0*0" if erase else "**0"
        self.state(find, ("**0", KEEP, "R", find), ("**1", write, "R", scan))
        return self.forward_to(A, B, self.t_clear(I, self.t_clear(J, find)))

    def scan(self, name: str, action) -> None:
        """Right scan; each related pair is decoded into (A, B) and handed to ``action``."""
        after = self.t_copy(I, A, self.t_copy(J, B, self.t_clear(I, self.t_clear(J, action()))))
        self.state(name, ("0**", KEEP, "R", name), ("1**", "**1", "S", self.home(self.decode(after))))


def wo_decider() -> Program:
    g = _Gen()
    reject_m = g.state("reject_m", (None, "**0", "S", "halt"))

    def linear():
        record = g.bit_write(S, A, 1, g.bit_write(S, B, 1, g.raise_bound(A, g.raise_bound(B, g.resume("scan_linear")))))
        return g.t_eq(A, B, reject_m, g.lookup(B, A, reject_m, record))

    g.scan("scan_linear", linear)

    def least():
        update = g.t_copy(A, G, g.flag_write(FLAG_F, 1, g.flag_write(FLAG_F, 0, "restart_least")))
        seed = g.t_copy(A, G, g.flag_write(GUESS_SET, 1, g.resume("scan_least")))
        check = g.t_eq(B, G, update, g.resume("scan_least"))
        return g.flag_read(GUESS_SET, check, seed)

    g.scan("scan_least", least)
    g.state("restart_least", (None, "**0", "R", "scan_least"))

    def compare():
        second = g.t_eq(B, G, g.resume("scan_compare"), g.lookup(G, B, g.resume("scan_compare"), reject_m))
        return g.t_eq(A, G, second, g.lookup(G, A, second, reject_m))

    g.scan("scan_compare", compare)

    def erase():
        hit = g.resume("scan_erase", erase=True)
        return g.t_eq(A, G, hit, g.t_eq(B, G, hit, g.resume("scan_erase")))

    g.scan("scan_erase", erase)

    def begin(scan):
        return g.state(g.fresh("begin"), (None, KEEP, "R", scan))

    accept = g.state("accept", (None, "**1", "S", "halt"))
    reject = g.state("reject", (None, "**0", "S", "halt"))
    lim_linear = g.flag_write(PHASE0, 1, begin("scan_least"))
    lim_least = g.flag_read(
        FLAG_F,
        reject,
        g.flag_read(GUESS_SET, g.flag_write(PHASE0, 0, g.flag_write(PHASE1, 1, begin("scan_compare"))), g.at_most_one(S, accept, reject)),
    )
    lim_compare = g.flag_write(PHASE0, 1, begin("scan_erase"))
    lim_erase = g.bit_write(S, G, 0, g.t_clear(G, g.flag_write(GUESS_SET, 0, g.flag_write(PHASE1, 0, begin("scan_least")))))
    g.goto(
        "limit",
        g.flag_read(
            PHASE1,
            g.flag_read(PHASE0, lim_erase, lim_compare),
            g.flag_read(PHASE0, lim_least, lim_linear),
        ),
    )
    g.state("sentinel", (None, "*1*", "S", "scan_linear"))
    g.state("start", ("1**", KEEP, "S", "halt"), ("0**", "*1*", "R", "sentinel"))
    return g.build()
