from __future__ import annotations

import itertools
import random

import pytest

from h6spectrum.errors import NoPeriodFound, ParabolicPoint, ParabolicWord
from h6spectrum.exact import INF, ONE, QS3, ZERO, compare, sqrt
from h6spectrum.expansion import (
    BOUNDARIES,
    IDENTITY,
    N,
    cylinder,
    discriminant,
    expand,
    expand_tail,
    identity_check_vee,
    is_hyperbolic,
    matrix_of,
    mobius,
    value_periodic,
    value_tail,
)
from h6spectrum.words import Tail, vee

S3 = sqrt(3)


def test_matrix_of():
    assert matrix_of("5") == N["5"]
    assert (matrix_of("5").a, matrix_of("5").b, matrix_of("5").c, matrix_of("5").d) == (
        QS3(1), QS3(0, 1), QS3(0), QS3(1))
    assert matrix_of("") == IDENTITY
    M = matrix_of("43")
    assert (M.a, M.b, M.c, M.d) == (QS3(0, 4), QS3(7), QS3(5), QS3(0, 3))


def test_matrix_product_independent():
    # plain float 2x2 product as a second route
    rng = random.Random(3)
    for _ in range(30):
        w = "".join(rng.choice("12345") for _ in range(rng.randint(1, 6)))
        acc = [[1.0, 0.0], [0.0, 1.0]]
        for d in w:
            a, b, c, e = N[d].floats()
            acc = [[acc[0][0] * a + acc[0][1] * c, acc[0][0] * b + acc[0][1] * e],
                   [acc[1][0] * a + acc[1][1] * c, acc[1][0] * b + acc[1][1] * e]]
        got = matrix_of(w).floats()
        want = (acc[0][0], acc[0][1], acc[1][0], acc[1][1])
        assert all(abs(g - h) <= 1e-9 * max(1.0, abs(h)) for g, h in zip(got, want))
        assert matrix_of(w).det() == QS3(1)


def test_value_periodic_examples():
    assert value_periodic("43") == (S3 + sqrt(143)) / 10
    assert value_periodic("2") == 1 / sqrt(2)
    assert value_periodic("4") == sqrt(2)
    assert value_periodic("3") == 1
    with pytest.raises(ParabolicWord):
        value_periodic("5")
    with pytest.raises(ParabolicWord):
        value_periodic("11")


def test_value_tail_examples():
    assert value_tail(Tail("5", "13")) == (sqrt(5) + 5) / (2 * S3)
    assert value_tail(Tail("", "31")) == (sqrt(5) + 1) / (2 * S3)
    assert value_tail(Tail("4", "2")) == (S3 / sqrt(2) + 2) / (1 / sqrt(2) + S3)


def test_cylinders():
    c1 = cylinder("1")
    assert (c1.low, c1.high) == (ZERO, 1 / S3)
    c5 = cylinder("5")
    assert c5.low == S3 and c5.high is INF
    c0 = cylinder("")
    assert c0.low == ZERO and c0.high is INF
    assert [cylinder(d).high for d in "1234"] == list(BOUNDARIES[1:5])


def test_cylinder_order_and_nesting():
    for k in (1, 2, 3):
        words = ["".join(p) for p in itertools.product("12345", repeat=k)]
        cyls = [cylinder(w) for w in words]
        for a, b in zip(cyls, cyls[1:]):
            assert compare(a.high, b.low) <= 0
        for w in words[:: 7]:
            parent = cylinder(w[:-1])
            child = cylinder(w)
            assert compare(parent.low, child.low) <= 0
            assert compare(child.high, parent.high) <= 0


def test_fixed_point_property():
    for k in range(1, 5):
        for p in itertools.product("12345", repeat=k):
            w = "".join(p)
            if not is_hyperbolic(w):
                continue
            x = value_periodic(w)
            assert mobius(matrix_of(w), x) == x
            assert cylinder(w).contains(x)


def test_parabolic_words_are_exactly_powers_of_1_and_5():
    for k in range(1, 5):
        for p in itertools.product("12345", repeat=k):
            w = "".join(p)
            if not is_hyperbolic(w):
                assert set(w) in ({"1"}, {"5"})
    assert discriminant("3") == 12


def test_expand_examples():
    assert expand(sqrt(2), 6) == "444444"
    assert expand((S3 + sqrt(143)) / 10, 6) == "434343"
    assert expand(S3 + sqrt(2), 3) == "544"


def test_expand_boundary():
    with pytest.raises(ParabolicPoint):
        expand(S3 / 2, 3)
    with pytest.raises(ParabolicPoint):
        expand(2 * S3, 3)  # second residual is sqrt(3)


def test_expand_tail_round_trip():
    rng = random.Random(7)
    for _ in range(40):
        pre = "".join(rng.choice("12345") for _ in range(rng.randint(0, 3)))
        per = "".join(rng.choice("234") for _ in range(rng.randint(1, 4)))
        t = Tail(pre, per)
        x = value_tail(t)
        assert expand_tail(x) == t
        assert value_tail(expand_tail(x)) == x


def test_expand_tail_no_period():
    with pytest.raises(NoPeriodFound):
        expand_tail(sqrt(2) + sqrt(3) + sqrt(5), max_steps=10)


def test_vee_identity_examples():
    assert identity_check_vee(Tail("", "4"))
    assert value_periodic("43") * value_periodic("23") == ONE
    assert identity_check_vee(Tail("5", "13"))
    assert vee(Tail("5", "13")) == Tail("1", "53")


def test_shift_by_5():
    rng = random.Random(8)
    for _ in range(50):
        t = Tail("".join(rng.choice("12345") for _ in range(rng.randint(0, 3))),
                 "".join(rng.choice("234") for _ in range(rng.randint(1, 3))))
        assert value_tail(t.prepend("5")) == value_tail(t) + S3
