from __future__ import annotations

import random

import pytest

from h6spectrum.errors import EmptyLanguage
from h6spectrum.exact import INF, compare, sqrt, to_decimal
from h6spectrum.expansion import value_tail
from h6spectrum.extremize import MAX, MIN, compile_spec, extremal_tail, greedy_tail, window_bounds, window_sum
from h6spectrum.gaps import images
from h6spectrum.words import Tail

S3 = sqrt(3)
DAGGER = ("444", "443", "344", "322", "223", "222")
NO_15 = compile_spec("234")


def closure(words):
    out = set()
    for w in words:
        out |= images(w)
    return sorted(out)


def test_compile_examples():
    spec = compile_spec("234", ["44"])
    s4 = spec.run("4")
    assert spec.step(s4, "4") == -1
    assert spec.step(s4, "2") >= 0 and spec.step(s4, "3") >= 0
    assert compile_spec("4", ["44"]).is_empty()
    spec = compile_spec("12345", ["55", "54", "45", "11", "12", "21"])
    assert not spec.is_empty()
    s5 = spec.run("5")
    assert {d for d in "12345" if spec.step(s5, d) in spec.live} == {"1", "2", "3"}


def test_minimal_forbidden_words():
    spec = compile_spec("12345", ["44", "443", "2"])
    assert spec.forbidden == ("2", "44")
    assert compile_spec("23", []).forbidden == ("1", "4", "5")


def test_max_tails_avoiding_22_and_44():
    spec = compile_spec("234", ["44", "22"])
    r = extremal_tail("3", spec, MAX)
    assert r.tail == Tail("", "34")
    assert r.value == (sqrt(143) - S3) / 10
    r = extremal_tail("4", compile_spec("234", ["44"]), MAX)
    assert r.tail == Tail("4", "34") == Tail("", "43")
    assert r.value == (S3 + sqrt(143)) / 10


def test_min_tail_after_4_doubled():
    v = extremal_tail("4", NO_15, MIN).value
    assert v == (S3 / sqrt(2) + 2) / (1 / sqrt(2) + S3)
    assert to_decimal(2 * v, 7) == "2.644146"
    assert compare(2 * v, sqrt(143) / 5) > 0


def test_bounds_once_1_and_5_are_isolated():
    spec = compile_spec("12345", ["55", "54", "45", "11", "12", "21"])
    r = extremal_tail("5", spec, MIN)
    assert r.tail == Tail("5", "13")
    assert r.value == (sqrt(5) + 5) / (2 * S3)
    assert extremal_tail("3", spec, MIN).value == (sqrt(5) + 1) / (2 * S3)
    threshold = r.value + 1 / sqrt(2)
    assert to_decimal(threshold, 15) == "2.79597967852851"
    assert (sqrt(5) + 5) / (2 * S3) + (sqrt(5) + 1) / (2 * S3) == S3 + sqrt(15) / 3
    assert compare(S3 + sqrt(15) / 3, threshold) > 0
    assert compare(S3 + 2 / S3, threshold) > 0


def test_bounds_for_443_and_444():
    lv, rv = window_bounds("4", "43", NO_15, MIN)
    assert lv == (S3 + 2 * sqrt(2)) / (sqrt(6) + 1)
    assert rv == (7 * sqrt(2) + 4 * S3) / (3 * sqrt(6) + 5)
    assert to_decimal(lv + rv, 12).startswith("2.68480")
    lv, rv = window_bounds("4", "44", NO_15, MIN)
    assert rv == (5 * sqrt(2) + 8 * S3) / (2 * (sqrt(6) + 5))
    assert to_decimal(lv + rv, 12).startswith("2.72669")


def test_bounds_for_4423_and_4424():
    spec = compile_spec("234", DAGGER)
    lv, rv = window_bounds("4", "423", spec, MIN)
    first = (7 * sqrt(299) + 69 * S3) / (3 * sqrt(897) + 92)
    assert lv == first == value_tail(Tail("42", "242"))
    assert rv == 2 * (sqrt(143) + 6 * S3) / (sqrt(429) + 13) == value_tail(Tail("4", "23"))
    assert to_decimal(lv + rv, 15) == "2.64876844390582"
    lv, rv = window_bounds("4", "424", spec, MIN)
    assert rv == (76 * sqrt(299) + 759 * S3) / (33 * sqrt(897) + 989) == value_tail(Tail("4242", "242"))
    assert to_decimal(lv + rv, 15) == "2.65226159739540"


def test_prefix_42_minimizer_depends_on_forbidden_images():
    base = DAGGER + ("4424",)
    lang = compile_spec("234", base)
    assert extremal_tail("42", lang, MIN).tail == Tail("", "422")
    lang = compile_spec("234", closure(base))
    assert extremal_tail("42", lang, MIN).tail == Tail("4224", "32")
    # (4224)^inf only appears once the images of 4423 are banned too
    lang = compile_spec("234", closure(base + ("4423",)))
    assert extremal_tail("42", lang, MIN).tail == Tail("", "4224")
    assert extremal_tail("423", compile_spec("234", closure(base)), MIN).tail == Tail("4", "23")
    assert compare(value_tail(Tail("4224", "32")), value_tail(Tail("", "4224"))) < 0


def test_unattained_and_empty():
    r = extremal_tail("", compile_spec(), MAX)
    assert r.kind == "unattained"
    assert r.value is INF
    r = extremal_tail("", compile_spec(), MIN)
    assert r.kind == "unattained" and r.value == 0
    assert extremal_tail("44", compile_spec("234", ["44"]), MIN).empty
    assert extremal_tail("", compile_spec("4", ["44"]), MAX).empty
    with pytest.raises(EmptyLanguage):
        window_bounds("4", "4", compile_spec("234", ["44"]), MIN)
    assert window_sum("5", "5", compile_spec(), MAX) is INF


def random_spec(rng):
    alphabet = "".join(sorted(rng.sample("12345", rng.randint(2, 5))))
    forb = ["".join(rng.choice(alphabet) for _ in range(rng.randint(2, 3))) for _ in range(rng.randint(0, 5))]
    return compile_spec(alphabet, forb)


def random_admissible_tail(rng, spec, prefix=""):
    state = spec.run(prefix)
    digits = list(prefix)
    seen = {}
    while state not in seen:
        seen[state] = len(digits)
        choices = [d for d in spec.alphabet if spec.step(state, d) in spec.live]
        d = rng.choice(choices)
        digits.append(d)
        state = spec.step(state, d)
        if rng.random() < 0.3:
            seen.clear()  # wander a bit longer before closing the cycle
    j = seen[state]
    return Tail("".join(digits[:j]), "".join(digits[j:]))


def test_soundness_sampling():
    rng = random.Random(31)
    checked = 0
    while checked < 1000:
        spec = random_spec(rng)
        if spec.is_empty():
            continue
        prefix = rng.choice(spec.alphabet)
        lo = extremal_tail(prefix, spec, MIN)
        hi = extremal_tail(prefix, spec, MAX)
        if lo.empty:
            continue
        for _ in range(20):
            t = random_admissible_tail(rng, spec, prefix)
            if t.period in ("1", "5"):
                continue
            v = value_tail(t)
            assert compare(lo.value, v) <= 0 <= compare(hi.value, v)
            checked += 1


def test_greedy_perturbation_worsens():
    rng = random.Random(32)
    done = 0
    while done < 5:
        spec = random_spec(rng)
        if spec.is_empty():
            continue
        for direction in (MIN, MAX):
            t = greedy_tail("", spec, direction)
            first = t.prefix(1)
            others = [d for d in spec.alphabet if d != first and spec.admits(d)]
            for d in others:
                alt = extremal_tail(d, spec, direction)
                best = extremal_tail("", spec, direction)
                c = compare(alt.value, best.value)
                assert (c > 0) if direction == MIN else (c < 0)
        done += 1


def test_refinement_is_monotone():
    rng = random.Random(33)
    for _ in range(30):
        spec = random_spec(rng)
        extra = "".join(rng.choice(spec.alphabet) for _ in range(3))
        finer = compile_spec(spec.alphabet, spec.forbidden + (extra,))
        for prefix in spec.alphabet:
            a, b = extremal_tail(prefix, spec, MAX), extremal_tail(prefix, finer, MAX)
            if not b.empty:
                assert compare(b.value, a.value) <= 0
            a, b = extremal_tail(prefix, spec, MIN), extremal_tail(prefix, finer, MIN)
            if not b.empty:
                assert compare(b.value, a.value) >= 0


def test_cycle_within_state_count():
    rng = random.Random(34)
    for _ in range(30):
        spec = random_spec(rng)
        if spec.is_empty():
            continue
        t = greedy_tail("", spec, MAX)
        assert len(t.preperiod) + len(t.period) <= len(spec.delta)
