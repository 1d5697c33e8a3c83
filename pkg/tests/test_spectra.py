from __future__ import annotations

import random

import pytest

from h6spectrum.errors import NotExtremal
from h6spectrum.exact import compare, sqrt
from h6spectrum.spectra import (
    biseq_from_section,
    brute_force_markoff,
    lagrange,
    markoff,
    section_value,
    shift_5k,
)
from h6spectrum.words import Periodic, Section, Tail, TwoTailed, parse_biseq, star, two_tailed, vee

from oracles import float_markoff

S3 = sqrt(3)
B = (13 * S3 + 13 * sqrt(7) + sqrt(143)) / 26


def rand_period(rng, n=4):
    while True:
        w = "".join(rng.choice("12345") for _ in range(rng.randint(1, n)))
        if set(w) not in ({"1"}, {"5"}):
            return w


def rand_biseq(rng):
    if rng.random() < 0.4:
        return Periodic(rand_period(rng))
    center = "".join(rng.choice("12345") for _ in range(rng.randint(0, 3)))
    return two_tailed(rand_period(rng, 3), center, rand_period(rng, 3))


def test_section_value_examples():
    s = Periodic("43").section(0)
    assert section_value(s) == sqrt(143) / 5
    assert section_value(Periodic("51").section(0)) == sqrt(7)
    sec = Section(Tail("", "4224"), Tail("4", "23"))
    assert section_value(sec) == B


@pytest.mark.parametrize(
    "expr, value",
    [
        ("*(43)*", sqrt(143) / 5),
        ("*(4323243)*", 2 * sqrt(2803333) / 1405),
        ("*(3)*", 2),
        ("*(4224)4(23)*", B),
        ("*(51)*", sqrt(7)),
    ],
)
def test_markoff_examples(expr, value):
    r = markoff(parse_biseq(expr))
    assert r.value == value
    assert r.attained


def test_markoff_matches_float_scan():
    rng = random.Random(21)
    for _ in range(15):
        A = rand_biseq(rng)
        exact = float(markoff(A).value)
        assert abs(exact - float_markoff(A)) < 1e-9, str(A)


def test_discrete_part_short():
    vals = [markoff(Periodic("42" * k + "3")).value for k in range(1, 6)]
    for a, b in zip(vals, vals[1:]):
        assert compare(a, b) < 0
    assert all(compare(v, 4 / S3) < 0 for v in vals)


def test_lagrange_examples():
    assert lagrange(parse_biseq("*(43)*")).value == sqrt(143) / 5
    r = lagrange(parse_biseq("*(4224)4(23)*"))
    assert r.value == sqrt(7)
    assert not r.attained
    assert lagrange(parse_biseq("*(42)3(42)*")).value == sqrt(13) / S3


def test_lagrange_at_most_markoff():
    rng = random.Random(22)
    for _ in range(60):
        A = rand_biseq(rng)
        assert compare(lagrange(A).value, markoff(A).value) <= 0


def test_symmetry():
    rng = random.Random(23)
    for _ in range(60):
        A = rand_biseq(rng)
        m = markoff(A).value
        assert markoff(vee(A)).value == m
        assert markoff(star(A)).value == m
        assert markoff(vee(star(A))).value == m


def test_am_gm_lower_bound():
    rng = random.Random(24)
    for _ in range(40):
        A = rand_biseq(rng)
        for p in A.cuts():
            s = A.section(p)
            v = section_value(s)
            d = section_value(s.vee())
            assert compare(v, 2) >= 0 or compare(d, 2) >= 0


def test_shift_5k():
    A = Periodic("43")
    s = markoff(A).witness
    assert shift_5k(A, s, 1).value == sqrt(143) / 5 + S3
    assert shift_5k(A, s, 0).value == sqrt(143) / 5
    A4 = Periodic("4")
    assert shift_5k(A4, markoff(A4).witness, 2).value == sqrt(8) + 2 * S3


def test_shift_5k_rejects_non_extremal():
    A = Periodic("433")
    best = markoff(A).value
    for p in A.cuts():
        s = A.section(p)
        if section_value(s) != best:
            with pytest.raises(NotExtremal):
                shift_5k(A, s, 1)
            break
    else:  # pragma: no cover
        pytest.fail("expected a non-extremal cut")
    with pytest.raises(NotExtremal):
        shift_5k(A, Periodic("43").section(0), 1)


def test_biseq_from_section_insert():
    A = Periodic("43")
    s = A.section(0)
    assert biseq_from_section(s) == A
    B5 = biseq_from_section(s, "5")
    assert isinstance(B5, TwoTailed)
    assert B5.center == "5"


def test_brute_force_small_depth():
    A = Periodic("43")
    v4 = brute_force_markoff(A, 4)
    v6 = brute_force_markoff(A, 6)
    m = markoff(A).value
    assert compare(v4, v6) <= 0 <= compare(m, v6)
    # depth 1 already sees the identity element
    assert compare(brute_force_markoff(A, 1), section_value(A.section(0))) >= 0


def test_brute_force_depth_validation():
    with pytest.raises(ValueError):
        brute_force_markoff(Periodic("43"), 0)
