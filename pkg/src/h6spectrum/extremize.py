"""Extreme values of [P] over tails that avoid a list of forbidden words.

Because every digit map is increasing and the digit cylinders are ordered
1 < 2 < ... < 5, comparing two tails is comparing their digit strings
lexicographically.  The largest (smallest) admissible tail is therefore
the greedy one: always take the largest (smallest) digit from which an
infinite admissible continuation still exists.  Running the greedy choice
on a finite pattern automaton must revisit a state, and from there on it
repeats, so the extremizer is eventually periodic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .errors import EmptyLanguage
from .expansion import Extended, closure_value
from .words import DIGITS, Tail, check_word, star

MIN, MAX = "min", "max"


@dataclass(frozen=True)
class SubshiftSpec:
    """Alphabet plus forbidden factors, compiled to an Aho-Corasick automaton.

    State 0 is the root.  ``delta[s][d]`` is the next state or -1 when the
    step would complete a forbidden word.  ``live`` holds the states with
    at least one infinite admissible continuation.
    """

    alphabet: str
    forbidden: tuple[str, ...]
    prefixes: tuple[str, ...] = field(repr=False)
    delta: tuple[dict, ...] = field(repr=False)
    live: frozenset = field(repr=False)

    def step(self, state: int, digit: str) -> int:
        return self.delta[state].get(digit, -1)

    def run(self, word: str, state: int = 0) -> int:
        """State after reading word, or -1 if a forbidden factor appears."""
        for d in word:
            if state < 0:
                return -1
            state = self.step(state, d)
        return state

    def admits(self, word: str) -> bool:
        """word has no forbidden factor and extends to an infinite tail."""
        s = self.run(word)
        return s >= 0 and s in self.live

    def is_empty(self) -> bool:
        return 0 not in self.live

    def reversed(self) -> "SubshiftSpec":
        return compile_spec(self.alphabet, (star(f) for f in self.forbidden))


def compile_spec(alphabet: Iterable[str] | str = DIGITS, forbidden: Iterable[str] = ()) -> SubshiftSpec:
    alpha = "".join(sorted(set(alphabet)))
    check_word(alpha)
    words = tuple(sorted({check_word(f) for f in forbidden if f}))
    return _compile(alpha, words)


@lru_cache(maxsize=4096)
def _compile(alpha: str, words: tuple[str, ...]) -> SubshiftSpec:
    # digits outside the alphabet are forbidden factors of length one
    banned = set(words) | {d for d in DIGITS if d not in alpha}
    # a word with a shorter forbidden factor is redundant
    minimal = sorted(w for w in banned if not any(v != w and v in w for v in banned))

    goto: list[dict] = [{}]
    prefixes = [""]
    terminal = [False]
    for w in minimal:
        s = 0
        for d in w:
            nxt = goto[s].get(d)
            if nxt is None:
                nxt = len(goto)
                goto[s][d] = nxt
                goto.append({})
                prefixes.append(prefixes[s] + d)
                terminal.append(False)
            s = nxt
        terminal[s] = True

    fail = [0] * len(goto)
    delta: list[dict] = [dict() for _ in goto]
    order = deque()
    for d in DIGITS:
        t = goto[0].get(d)
        if t is None:
            delta[0][d] = 0
        else:
            delta[0][d] = t
            fail[t] = 0
            order.append(t)
    while order:
        s = order.popleft()
        terminal[s] = terminal[s] or terminal[fail[s]]
        for d in DIGITS:
            t = goto[s].get(d)
            if t is None:
                delta[s][d] = delta[fail[s]][d]
            else:
                fail[t] = delta[fail[s]][d]
                delta[s][d] = t
                order.append(t)

    # dead steps are those that complete a forbidden word
    table = []
    for s, row in enumerate(delta):
        table.append({d: (t if not terminal[t] else -1) for d, t in row.items()} if not terminal[s] else {})

    live = {s for s in range(len(table)) if not terminal[s]}
    changed = True
    while changed:
        changed = False
        for s in list(live):
            if not any(t in live for t in table[s].values() if t >= 0):
                live.discard(s)
                changed = True
    return SubshiftSpec(alpha, tuple(minimal), tuple(prefixes), tuple(table), frozenset(live))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremalResult:
    """Outcome of an extremization.

    kind is "attained" (tail is the extremizer), "unattained" (the
    greedy tail ends in 1s or 5s, so the bound is a cylinder endpoint that
    no admissible tail reaches) or "empty".
    """

    kind: str
    tail: Optional[Tail] = None
    value: Optional[Extended] = None

    @property
    def attained(self) -> bool:
        return self.kind == "attained"

    @property
    def empty(self) -> bool:
        return self.kind == "empty"


EMPTY = ExtremalResult("empty")


def greedy_tail(prefix: str, spec: SubshiftSpec, direction: str) -> Optional[Tail]:
    """The lexicographically extreme admissible tail starting with prefix."""
    if direction not in (MIN, MAX):
        raise ValueError(f"direction must be {MIN!r} or {MAX!r}")
    state = spec.run(check_word(prefix))
    if state < 0 or state not in spec.live:
        return None
    order = spec.alphabet[::-1] if direction == MAX else spec.alphabet
    seen: dict[int, int] = {}
    digits: list[str] = []
    while state not in seen:
        seen[state] = len(digits)
        for d in order:
            t = spec.step(state, d)
            if t >= 0 and t in spec.live:
                digits.append(d)
                state = t
                break
        else:  # pragma: no cover - live states always have a live successor
            raise AssertionError("live state without live successor")
    j = seen[state]
    return Tail(prefix + "".join(digits[:j]), "".join(digits[j:]))


def extremal_tail(prefix: str, spec: SubshiftSpec, direction: str) -> ExtremalResult:
    tail = greedy_tail(prefix, spec, direction)
    if tail is None:
        return EMPTY
    if tail.period in ("1", "5"):
        return ExtremalResult("unattained", tail, closure_value(tail))
    return ExtremalResult("attained", tail, closure_value(tail))


def window_bounds(
    left_context: str, right_context: str, spec: SubshiftSpec, direction: str
) -> tuple[Extended, Extended]:
    """Extreme [P] and [Q] over sections P*|Q whose window reads left|right.

    left_context is written as it sits on the line, so the left tail P
    starts with its reversal.  The two sides are optimized separately
    (the left one against the reversed language), which can only widen
    the range; the result is a valid lower (min) or upper (max) bound on
    the section value [P] + [Q].
    """
    if not spec.admits(left_context + right_context):
        raise EmptyLanguage(f"{left_context}|{right_context} is not admissible")
    left = extremal_tail(star(left_context), spec.reversed(), direction)
    right = extremal_tail(right_context, spec, direction)
    if left.empty or right.empty:
        raise EmptyLanguage(f"{left_context}|{right_context} has no admissible completion")
    return left.value, right.value


def window_sum(left_context: str, right_context: str, spec: SubshiftSpec, direction: str) -> Extended:
    from .exact import INF

    lv, rv = window_bounds(left_context, right_context, spec, direction)
    if lv is INF or rv is INF:
        return INF
    return lv + rv
