"""Ordinals below w^w in Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)``
terms with strictly decreasing exponents and positive coefficients; the
empty tuple is zero.  These values serve as the stage clock of the
transfinite executor, so comparison and the handful of operations it needs
(successor, next limit, next multiple of a power of w) are kept cheap.
"""
from __future__ import annotations

import re
from functools import total_ordering
from typing import Iterable, Union

Term = tuple[int, int]
OrdinalLike = Union["Ordinal", int]

_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_DIGITS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")
_FROM_SUPERSCRIPT = re.compile("[⁰¹²³⁴⁵⁶⁷⁸⁹]+")


class OrdinalSyntaxError(ValueError):
    pass


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[Term] = ()):
        terms = tuple((int(e), int(c)) for e, c in terms)
        for i, (e, c) in enumerate(terms):
            if e < 0 or c < 1:
                raise ValueError(f"bad term w^{e}*{c}")
            if i and terms[i - 1][0] <= e:
                raise ValueError("exponents must strictly decrease")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", hash(terms))

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    def __reduce__(self):
        return (type(self), (self.terms,))

    # construction helpers
    @classmethod
    def of(cls, value: OrdinalLike) -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            if value < 0:
                raise ValueError("ordinals are non-negative")
            return cls(((0, value),)) if value else ZERO
        raise TypeError(f"cannot make an ordinal from {value!r}")

    @classmethod
    def omega_power(cls, exponent: int, coefficient: int = 1) -> "Ordinal":
        return cls(((exponent, coefficient),)) if coefficient else ZERO

    # comparison
    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return compare(self, other) < 0

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # arithmetic
    def __add__(self, other: OrdinalLike) -> "Ordinal":
        return add(self, Ordinal.of(other))

    def __radd__(self, other: OrdinalLike) -> "Ordinal":
        return add(Ordinal.of(other), self)

    def __mul__(self, other: OrdinalLike) -> "Ordinal":
        return mul(self, Ordinal.of(other))

    def __rmul__(self, other: OrdinalLike) -> "Ordinal":
        return mul(Ordinal.of(other), self)

    # structure
    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    @property
    def finite_part(self) -> int:
        """The trailing natural-number summand (0 for limits and zero)."""
        if self.terms and self.terms[-1][0] == 0:
            return self.terms[-1][1]
        return 0

    @property
    def leading_exponent(self) -> int:
        if not self.terms:
            raise ValueError("zero has no leading exponent")
        return self.terms[0][0]

    @property
    def low_exponent(self) -> int:
        """Exponent of the last CNF term: the largest e with w^e dividing self."""
        if not self.terms:
            raise ValueError("zero is divisible by every power of w")
        return self.terms[-1][0]

    def is_limit(self) -> bool:
        return is_limit(self)

    def successor(self) -> "Ordinal":
        return successor(self)

    def next_limit(self) -> "Ordinal":
        return next_limit(self)

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.finite_part

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self) -> str:
        return format_ordinal(self)


ZERO = Ordinal()
ONE = Ordinal(((0, 1),))
OMEGA = Ordinal(((1, 1),))


def compare(a: OrdinalLike, b: OrdinalLike) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    a, b = Ordinal.of(a), Ordinal.of(b)
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        if ea != eb:
            return 1 if ea > eb else -1
        if ca != cb:
            return 1 if ca > cb else -1
    if len(a.terms) == len(b.terms):
        return 0
    return 1 if len(a.terms) > len(b.terms) else -1


def add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = Ordinal.of(a), Ordinal.of(b)
    if not b.terms:
        return a
    lead, coef = b.terms[0]
    kept = [t for t in a.terms if t[0] > lead]
    same = [c for e, c in a.terms if e == lead]
    if same:
        coef += same[0]
    return Ordinal(kept + [(lead, coef)] + list(b.terms[1:]))


def mul(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = Ordinal.of(a), Ordinal.of(b)
    if not a.terms or not b.terms:
        return ZERO
    lead, lead_coef = a.terms[0]
    result = ZERO
    for e, c in b.terms:
        if e > 0:
            part = Ordinal(((lead + e, c),))
        else:
            part = Ordinal(((lead, lead_coef * c),) + a.terms[1:])
        result = add(result, part)
    return result


def successor(a: Ordinal) -> Ordinal:
    return add(a, ONE)


def is_limit(a: Ordinal) -> bool:
    return bool(a.terms) and a.terms[-1][0] > 0


def truncate(a: Ordinal, exponent: int) -> Ordinal:
    """Drop every term below ``w^exponent``."""
    return Ordinal(t for t in a.terms if t[0] >= exponent)


def next_multiple(a: Ordinal, exponent: int) -> Ordinal:
    """Least multiple of ``w^exponent`` strictly greater than ``a``."""
    return add(truncate(a, exponent), Ordinal(((exponent, 1),)))


def next_limit(a: Ordinal) -> Ordinal:
    return next_multiple(a, 1)


def subtract_prefix(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique d with ``a + d == b`` (requires ``a <= b``)."""
    if compare(a, b) > 0:
        raise ValueError(f"{a} exceeds {b}")
    i = 0
    while i < len(a.terms) and i < len(b.terms) and a.terms[i] == b.terms[i]:
        i += 1
    if i == len(b.terms):
        return ZERO
    e, c = b.terms[i]
    if i < len(a.terms) and a.terms[i][0] == e:
        c -= a.terms[i][1]
    return Ordinal(((e, c),) + b.terms[i + 1:])


# text form

def format_ordinal(a: Ordinal, unicode: bool = False) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e == 0:
            parts.append(str(c))
            continue
        w = "ω" if unicode else "w"
        if e > 1:
            w += str(e).translate(_SUPERSCRIPT) if unicode else f"^{e}"
        if c > 1:
            w += ("·" if unicode else "*") + str(c)
        parts.append(w)
    return "+".join(parts)


_TERM = re.compile(r"^(?:(?P<w>w|ω)(?:\^(?P<exp>\d+))?(?:\*(?P<coef>\d+))?|(?P<nat>\d+))$")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``w^k*c+...`` (with sugar ``w``, ``w^2``, ``w*3``, integers).

    Non-canonical sums such as ``1+w`` are accepted and normalised by
    ordinal addition.
    """
    cleaned = text.replace(" ", "").replace("·", "*")
    cleaned = _FROM_SUPERSCRIPT.sub(lambda m: "^" + m.group().translate(_DIGITS), cleaned)
    if not cleaned:
        raise OrdinalSyntaxError("empty ordinal")
    result = ZERO
    for piece in cleaned.split("+"):
        m = _TERM.match(piece)
        if not m:
            raise OrdinalSyntaxError(f"bad ordinal term {piece!r} in {text!r}")
        if m.group("nat") is not None:
            term = Ordinal.of(int(m.group("nat")))
        else:
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
            coef = int(m.group("coef")) if m.group("coef") is not None else 1
            term = Ordinal.omega_power(exp, coef)
        result = add(result, term)
    return result
