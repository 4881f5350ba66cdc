"""Eventually periodic sequences and the relation codec.

Tape contents are infinite sequences with a finite description: a prefix
followed by a repeating period.  :class:`EPSeq` holds any hashable cell
values (the executor keeps integer change-tags in them); :class:`EPReal`
restricts cells to bits and is what programs read and write.
"""
from __future__ import annotations

from math import gcd, isqrt
from typing import Callable, Hashable, Iterable


def _primitive_root(period: tuple) -> tuple:
    n = len(period)
    for p in range(1, n + 1):
        if n % p == 0 and period == period[:p] * (n // p):
            return period[:p]
    return period


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class EPSeq:
    """Sequence ``prefix + period + period + ...`` in canonical form."""

    __slots__ = ("prefix", "period", "_hash")

    def __init__(self, prefix: Iterable[Hashable] = (), period: Iterable[Hashable] = (0,)):
        prefix = tuple(prefix)
        period = _primitive_root(tuple(period))
        if not period:
            raise ValueError("period must be nonempty")
        # pull the prefix tail into the period while it matches
        n, p, k = len(prefix), len(period), 0
        while k < n and prefix[n - 1 - k] == period[(-1 - k) % p]:
            k += 1
        if k:
            r = k % p
            period = period[p - r:] + period[:p - r]
            prefix = prefix[: n - k]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "_hash", hash((prefix, period)))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), (self.prefix, self.period))

    def __getitem__(self, i: int):
        if i < 0:
            raise IndexError("negative cell index")
        n = len(self.prefix)
        if i < n:
            return self.prefix[i]
        return self.period[(i - n) % len(self.period)]

    def __eq__(self, other):
        if not isinstance(other, EPSeq):
            return NotImplemented
        return self.prefix == other.prefix and self.period == other.period

    def __hash__(self):
        return self._hash

    @property
    def span(self) -> int:
        """Length of the description; cells at or beyond ``len(prefix)`` repeat."""
        return len(self.prefix) + len(self.period)

    def head(self, n: int) -> list:
        return [self[i] for i in range(n)]

    def with_cells(self, cells: dict[int, Hashable]) -> "EPSeq":
        if not cells:
            return self
        top = max(max(cells) + 1, len(self.prefix))
        values = [cells.get(i, self[i]) for i in range(top)]
        period = [self[top + i] for i in range(len(self.period))]
        return type(self)(values, period)

    def shift(self, k: int) -> "EPSeq":
        """The sequence with its first ``k`` cells dropped."""
        n = len(self.prefix)
        if k <= n:
            return type(self)(self.prefix[k:], self.period)
        r = (k - n) % len(self.period)
        return type(self)((), self.period[r:] + self.period[:r])

    def map(self, fn: Callable) -> "EPSeq":
        return EPSeq([fn(v) for v in self.prefix], [fn(v) for v in self.period])

    @staticmethod
    def zip_with(fn: Callable, *seqs: "EPSeq") -> "EPSeq":
        """Cellwise combination; the result is again eventually periodic."""
        start = max(len(s.prefix) for s in seqs)
        per = 1
        for s in seqs:
            per = lcm(per, len(s.period))
        values = [fn(*(s[i] for s in seqs)) for i in range(start + per)]
        return EPSeq(values[:start], values[start:])

    def all_cells(self, pred: Callable) -> bool:
        return all(pred(v) for v in self.prefix) and all(pred(v) for v in self.period)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.prefix)!r}, {list(self.period)!r})"


class EPReal(EPSeq):
    """An eventually periodic infinite binary sequence (a "real")."""

    __slots__ = ()

    def __init__(self, prefix: Iterable[int] = (), period: Iterable[int] = (0,)):
        prefix = tuple(map(int, prefix))
        period = tuple(map(int, period))
        if not {*prefix, *period} <= {0, 1}:
            raise ValueError("reals are binary sequences")
        super().__init__(prefix, period)

    @classmethod
    def zeros(cls) -> "EPReal":
        return ZEROS

    @classmethod
    def parse(cls, text: str) -> "EPReal":
        """Read ``prefix|period`` such as ``110|0``; a bare word is a finite prefix."""
        text = text.strip()
        if "|" in text:
            prefix, period = text.split("|", 1)
        else:
            prefix, period = text, "0"
        if not period or any(ch not in "01" for ch in prefix + period):
            raise ValueError(f"bad real {text!r}; expected e.g. 110|0")
        return cls((int(ch) for ch in prefix), (int(ch) for ch in period))

    @classmethod
    def from_seq(cls, seq: EPSeq) -> "EPReal":
        return cls(seq.prefix, seq.period)

    def to_text(self) -> str:
        return "".join(map(str, self.prefix)) + "|" + "".join(map(str, self.period))

    def ones(self, bound: int) -> list[int]:
        return [i for i in range(bound) if self[i]]

    @property
    def is_finitely_supported(self) -> bool:
        return self.period == (0,)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"EPReal({self.to_text()!r})"


ZEROS = EPReal()


def get_bit(r: EPReal, i: int) -> int:
    return r[i]


def set_bit(r: EPReal, i: int, b: int) -> EPReal:
    if r[i] == b:
        return r
    return r.with_cells({i: int(b)})


def encode_natural(n: int) -> EPReal:
    if n < 0:
        raise ValueError("naturals only")
    return EPReal([1] * n, [0])


def decode_natural(r: EPReal) -> int | None:
    if r.period != (0,):
        return None
    n = len(r.prefix)
    return n if all(r.prefix) else None


def pair(i: int, j: int) -> int:
    """Cantor pairing <i,j> = (i+j)(i+j+1)/2 + j."""
    if i < 0 or j < 0:
        raise ValueError("naturals only")
    s = i + j
    return s * (s + 1) // 2 + j


def unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("naturals only")
    s = (isqrt(8 * n + 1) - 1) // 2
    j = n - s * (s + 1) // 2
    return s - j, j


def encode_relation(pairs: Iterable[tuple[int, int]]) -> EPReal:
    cells = {pair(i, j): 1 for i, j in pairs}
    return ZEROS.with_cells(cells)


def materialize_relation(r: EPReal, bound: int) -> set[tuple[int, int]]:
    """All related pairs whose code index is below ``bound``."""
    return {unpair(k) for k in range(bound) if r[k]}


def parse_pairs(text: str) -> set[tuple[int, int]]:
    """Read ``0<1,1<2`` into a set of pairs; the empty string is the empty relation."""
    out = set()
    for chunk in text.replace(" ", "").split(","):
        if not chunk:
            continue
        left, sep, right = chunk.partition("<")
        if not sep or not left.isdigit() or not right.isdigit():
            raise ValueError(f"bad pair {chunk!r}; expected i<j")
        out.add((int(left), int(right)))
    return out

