from __future__ import annotations

import random
from fractions import Fraction
from functools import cmp_to_key

import mpmath
import pytest

from h6spectrum.dimension import (
    FOUR_OVER_SQRT3,
    BlockSystem,
    EPattern,
    block_dominance,
    block_system,
    choose_m,
    construction_value,
    dimension_lower_bound,
    dimension_report,
    ebound_lhs,
    ebound_limit,
    ifs_ratios,
    images_disjoint,
    maps_contain,
    moran_residual,
    random_pattern,
    solve_s,
    truncated_limsup,
)
from h6spectrum.exact import compare
from h6spectrum.expansion import value_tail
from h6spectrum.words import Tail, star

from oracles import _MAT

# roots of sum C_i^s = 1 from an mpmath findroot on float matrices
FROZEN_S = {1: 0.0493965000427185, 2: 0.0331215756672009, 3: 0.0249181482519645}


def mp_mat(word):
    s3 = mpmath.sqrt(3)
    M = mpmath.eye(2)
    for d in word:
        e = [s3 if v == "s" else mpmath.mpf(v) for v in _MAT[d]]
        M = M * mpmath.matrix([e[:2], e[2:]])
    return M


def mp_ratios(m):
    w, u = "42" * m + "3", "42" * (m + 1) + "3"
    P = mp_mat(w + u + u)
    beta = ((P[0, 0] - P[1, 1]) + mpmath.sqrt((P[0, 0] + P[1, 1]) ** 2 - 4)) / (2 * P[1, 0])
    out = []
    for word in (w + w + u, w + w + u + u, w + u, w + u + u):
        M = mp_mat(word)
        out.append(1 / (M[1, 0] * beta + M[1, 1]) ** 2)
    return out


def test_oracle_roots_frozen():
    with mpmath.workdps(40):
        for m, s in FROZEN_S.items():
            C = mp_ratios(m)
            root = mpmath.findroot(lambda t: sum(c**t for c in C) - 1, (0.01, 0.2), solver="anderson")
            assert abs(float(root) - s) < 1e-14


@pytest.mark.parametrize("eps, m", [(Fraction(1, 5), 1), ("0.05", 1), (Fraction(1, 100), 1),
                                    (Fraction(1, 1000), 2), (Fraction(1, 10**6), 3)])
def test_choose_m(eps, m):
    assert choose_m(eps) == m


def test_ebound_decreases_to_limit():
    assert ebound_limit() == FOUR_OVER_SQRT3
    vals = [ebound_lhs(m) for m in range(1, 6)]
    for x, y in zip(vals, vals[1:]):
        assert compare(x, y) > 0
    assert all(compare(v, FOUR_OVER_SQRT3) > 0 for v in vals)


def test_bad_inputs():
    with pytest.raises(ValueError):
        choose_m(0)
    with pytest.raises(ValueError):
        choose_m(-0.1)
    with pytest.raises(ValueError):
        BlockSystem(0)
    with pytest.raises(ValueError):
        EPattern(((1, 3),))
    with pytest.raises(ValueError):
        EPattern(())
    with pytest.raises(ValueError):
        dimension_report()
    with pytest.raises(ValueError):
        solve_s([Fraction(3, 2)])


def test_block_words():
    sys = block_system(2)
    assert sys.w == "42423" and sys.u == "4242423"
    assert sys.map_words[2] == sys.w + sys.u
    assert EPattern(((1, 2),)).prefix(sys, 2) == (sys.w + sys.u * 2) * 2


@pytest.mark.parametrize("m", [1, 2, 3])
def test_ratios_match_oracle(m):
    exact = ifs_ratios(block_system(m))
    for c, f in zip(exact, mp_ratios(m)):
        assert 0 < float(c) < 1
        assert abs(float(c) / float(f) - 1) < 1e-10


@pytest.mark.parametrize("m", [1, 2])
def test_lower_ratio_is_a_contraction_bound(m):
    sys = block_system(m)
    C = ifs_ratios(sys)
    rng = random.Random(60 + m)
    with mpmath.workdps(60):
        a, b = mpmath.mpf(float(sys.alpha)), mpmath.mpf(float(sys.beta))
        for i, word in enumerate(sys.map_words):
            M = mp_mat(word)
            f = lambda x: (M[0, 0] * x + M[0, 1]) / (M[1, 0] * x + M[1, 1])  # noqa: E731
            for _ in range(20):
                x, y = sorted(a + (b - a) * mpmath.mpf(rng.random()) for _ in range(2))
                # the derivative 1/(cx+d)^2 is smallest at beta
                assert (f(y) - f(x)) / (y - x) >= float(C[i]) * (1 - 1e-9)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_structure(m):
    sys = block_system(m)
    assert compare(sys.alpha, sys.beta) < 0
    assert images_disjoint(sys)
    assert maps_contain(sys)
    assert block_dominance(sys)


def test_block_dominance_samples():
    sys = block_system(1)
    rng = random.Random(61)
    for _ in range(20):
        Q = random_pattern(rng).tail(sys)
        R = random_pattern(rng).tail(sys)
        assert compare(value_tail(Q.prepend(sys.u)), value_tail(R.prepend(sys.w))) > 0
        lq = value_tail(Q.prepend(star(sys.u)))
        lr = value_tail(R.prepend(star(sys.w)))
        assert compare(lq, lr) < 0


def test_pattern_values_sandwiched_and_distinct():
    sys = block_system(1)
    rng = random.Random(62)
    seen = {}
    for _ in range(30):
        pat = random_pattern(rng)
        t = pat.tail(sys)
        v = value_tail(t)
        assert compare(sys.alpha, v) <= 0 <= compare(sys.beta, v)
        seen.setdefault(t, v)
    vals = sorted(seen.values(), key=cmp_to_key(compare))
    for x, y in zip(vals, vals[1:]):
        assert compare(x, y) < 0


def test_map_action_on_patterns():
    sys = block_system(1)
    pat = EPattern(((2, 1), (1, 2)))
    x = value_tail(pat.tail(sys))
    for i, word in enumerate(sys.map_words, 1):
        assert sys.apply(i, x) == value_tail(Tail(word, pat.block(sys)))


def test_solve_s_simple_cases():
    r = solve_s([Fraction(1, 4)] * 4)
    assert r.lower <= 1 <= r.upper and r.width <= Fraction(1, 10**8)
    r = solve_s([Fraction(1, 16)] * 4)
    assert r.lower <= Fraction(1, 2) <= r.upper
    r = solve_s([Fraction(1, 2), Fraction(1, 3)])
    assert r.lower <= 0.7878849110 <= r.upper


@pytest.mark.parametrize("m", [1, 2, 3])
def test_moran_root_bracket(m):
    rep = dimension_report(m=m)
    assert rep.root.lower <= FROZEN_S[m] <= rep.root.upper
    assert rep.root.width <= Fraction(1, 10**8)
    assert moran_residual(rep.ratios, rep.root.lower).a > 0
    assert moran_residual(rep.ratios, rep.root.upper).b < 0


def test_dimension_lower_bound():
    s = dimension_lower_bound(Fraction(1, 5))
    assert Fraction(49396, 10**6) < s < Fraction(49397, 10**6)
    assert dimension_lower_bound(0.05) == s
    assert dimension_lower_bound(Fraction(1, 1000)) < s


def test_construction_values():
    sys = block_system(1, Fraction(1, 5))
    rng = random.Random(63)
    for _ in range(5):
        pat = random_pattern(rng)
        v = construction_value(sys, pat)
        assert compare(v, FOUR_OVER_SQRT3 + Fraction(1, 5)) < 0
        assert abs(truncated_limsup(sys, pat) - float(v)) < 1e-6
    a = construction_value(sys, EPattern(((1, 1),)))
    b = construction_value(sys, EPattern(((2, 2),)))
    assert compare(a, b) != 0


def test_construction_value_rejects_small_eps():
    sys = block_system(1)
    with pytest.raises(AssertionError):
        construction_value(sys, EPattern(((1, 1),)), eps=Fraction(1, 10**6))

