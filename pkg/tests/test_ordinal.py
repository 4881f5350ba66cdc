from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ittm.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    OrdinalSyntaxError,
    add,
    compare,
    format_ordinal,
    is_limit,
    mul,
    next_limit,
    next_multiple,
    parse_ordinal,
)
from oracles import FROZEN_ORDINALS, v_add, v_cmp, v_mul, vec

W = parse_ordinal


def as_vec(a: Ordinal) -> dict:
    return vec(a.terms)


ordinals = st.builds(
    lambda c2, c1, c0: W(f"w^2*{c2}+w*{c1}+{c0}") if c2 else W(f"w*{c1}+{c0}") if c1 else Ordinal.of(c0),
    st.integers(0, 4),
    st.integers(0, 4),
    st.integers(0, 6),
)


def test_compare_examples():
    assert compare(0, 0) == 0
    assert compare(OMEGA, W("w+1")) < 0
    assert compare(W("w*2+3"), W("w^2")) < 0


def test_frozen_values():
    got = {
        "add(w*2+5, w)": add(W("w*2+5"), OMEGA),
        "add(1, w)": add(1, OMEGA),
        "add(w, 1)": add(OMEGA, 1),
        "mul(w+1, w)": mul(W("w+1"), OMEGA),
        "mul(2, w)": mul(2, OMEGA),
        "mul(w, 2)": mul(OMEGA, 2),
        "next_limit(w+3)": next_limit(W("w+3")),
    }
    assert {k: format_ordinal(v) for k, v in got.items()} == FROZEN_ORDINALS


def test_limits():
    assert is_limit(W("w*2"))
    assert not is_limit(W("w+3"))
    assert not is_limit(ZERO)
    assert next_limit(ZERO) == OMEGA
    assert next_multiple(W("w^2+w*3"), 2) == W("w^2*2")
    assert W("w^2*3+w").low_exponent == 1


def test_parse_and_format():
    assert parse_ordinal("0") == ZERO
    assert parse_ordinal("w^2+w*3+2").terms == ((2, 1), (1, 3), (0, 2))
    assert format_ordinal(add(W("w"), W("w"))) == "w*2"
    assert parse_ordinal("ω²·3+ω+2") == W("w^2*3+w+2")
    assert format_ordinal(W("w^2*3+w+2"), unicode=True) == "ω²·3+ω+2"
    assert parse_ordinal("1+w") == OMEGA
    for bad in ["", "w^", "x", "w**2", "3+"]:
        with pytest.raises(OrdinalSyntaxError):
            parse_ordinal(bad)


def test_canonical_terms():
    with pytest.raises(ValueError):
        Ordinal(((1, 1), (2, 1)))
    with pytest.raises(ValueError):
        Ordinal(((1, 0),))
    assert Ordinal.of(0) == ZERO and Ordinal.of(1) == ONE


@given(ordinals, ordinals)
def test_add_and_compare_match_vector_oracle(a, b):
    assert as_vec(add(a, b)) == v_add(as_vec(a), as_vec(b))
    assert compare(a, b) == v_cmp(as_vec(a), as_vec(b))


@given(ordinals, ordinals)
def test_mul_matches_vector_oracle(a, b):
    assert as_vec(mul(a, b)) == v_mul(as_vec(a), as_vec(b))


@given(ordinals)
def test_format_round_trip(a):
    assert parse_ordinal(format_ordinal(a)) == a
    assert parse_ordinal(format_ordinal(a, unicode=True)) == a


@settings(max_examples=300)
@given(ordinals, ordinals, ordinals)
def test_arithmetic_laws(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    if compare(b, c) < 0:
        assert compare(add(a, b), add(a, c)) < 0
        assert compare(add(b, a), add(c, a)) <= 0
        if a:
            assert compare(mul(a, b), mul(a, c)) < 0


def test_compare_exhaustive_below_omega_cubed():
    every = [
        Ordinal(tuple((e, c) for e, c in ((2, a), (1, b), (0, k)) if c))
        for a in range(5)
        for b in range(5)
        for k in range(5)
    ]
    for x in every:
        for y in every:
            assert compare(x, y) == v_cmp(as_vec(x), as_vec(y))
