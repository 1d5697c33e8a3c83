"""Digit words, eventually periodic tails and bi-infinite sequences.

Words are plain ``str`` objects over the digits ``'1'..'5'``.  A
:class:`Tail` is a one-sided eventually periodic sequence; a
:class:`BiSeq` is a two-sided one up to shift, either purely periodic or
with distinct periodic ends.

Text grammar (no whitespace)::

    word   := digit+
    tail   := word? '(' word ')' '*'
    biseq  := '*(' word ')' word? '(' word ')*'   two tails around a center
            | '*(' word ')*'                     purely periodic

In ``*(L)C(R)*`` the left end is written as it is displayed, ``...LLL``.
Internally the left end is kept *outward-reading*, i.e. as the sequence
met when walking leftwards from the center; that word is ``star(L)``.
A ``|`` inside the center is accepted and ignored.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError

DIGITS = "12345"
_VEE = str.maketrans("12345", "54321")


def check_word(w: str) -> str:
    if not isinstance(w, str):
        raise TypeError(f"word must be str, got {type(w).__name__}")
    for i, ch in enumerate(w):
        if ch not in DIGITS:
            raise ParseError(f"bad digit {ch!r}", w, i)
    return w


def star(x):
    """Reversal of a word or of a bi-infinite sequence."""
    if isinstance(x, str):
        return x[::-1]
    if isinstance(x, (Periodic, TwoTailed)):
        return x.star()
    raise TypeError(f"star is undefined for {type(x).__name__}")


def vee(x):
    """Digitwise d -> 6 - d."""
    if isinstance(x, str):
        return x.translate(_VEE)
    if isinstance(x, (Tail, Periodic, TwoTailed, Section)):
        return x.vee()
    raise TypeError(f"vee is undefined for {type(x).__name__}")


def primitive_root(w: str) -> str:
    """Shortest v with w = v^k."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


def rotate(w: str, k: int) -> str:
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def least_rotation(w: str) -> str:
    return min(rotate(w, i) for i in range(len(w))) if w else w


def prefix_of_power(w: str, n: int) -> str:
    """First n digits of w^infinity."""
    if n <= 0:
        return ""
    reps = -(-n // len(w))
    return (w * reps)[:n]


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tail:
    """preperiod followed by period repeated forever, in normal form."""

    preperiod: str
    period: str

    def __post_init__(self) -> None:
        pre = check_word(self.preperiod)
        per = check_word(self.period)
        if not per:
            raise ValueError("tail period must be nonempty")
        per = primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def vee(self) -> "Tail":
        return Tail(vee(self.preperiod), vee(self.period))

    def prefix(self, n: int) -> str:
        """First n digits."""
        if n <= len(self.preperiod):
            return self.preperiod[:n]
        return self.preperiod + prefix_of_power(self.period, n - len(self.preperiod))

    def prepend(self, word: str) -> "Tail":
        return Tail(word + self.preperiod, self.period)

    def drop(self, n: int) -> "Tail":
        """The tail with its first n digits removed."""
        if n <= len(self.preperiod):
            return Tail(self.preperiod[n:], self.period)
        return Tail("", rotate(self.period, n - len(self.preperiod)))

    def __str__(self) -> str:
        return f"{self.preperiod}({self.period})*"


@dataclass(frozen=True)
class Section:
    """A cut P*|Q; ``left`` is P read outward from the bar, ``right`` is Q."""

    left: Tail
    right: Tail

    def vee(self) -> "Section":
        return Section(self.left.vee(), self.right.vee())

    def star(self) -> "Section":
        return Section(self.right, self.left)

    def __str__(self) -> str:
        # display the left side as it sits on the line, with the bar
        return f"{display_left(self.left)}|{self.right}"


def display_left(t: Tail) -> str:
    """Show an outward-reading tail as it sits to the left of a cut."""
    return f"*({star(t.period)}){star(t.preperiod)}"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Periodic:
    """The bi-infinite sequence ...www... (stored as least rotation)."""

    period: str

    def __post_init__(self) -> None:
        w = check_word(self.period)
        if not w:
            raise ValueError("period must be nonempty")
        object.__setattr__(self, "period", least_rotation(primitive_root(w)))

    def star(self) -> "Periodic":
        return Periodic(star(self.period))

    def vee(self) -> "Periodic":
        return Periodic(vee(self.period))

    def cuts(self) -> range:
        return range(len(self.period))

    def section(self, p: int) -> Section:
        r = rotate(self.period, p)
        return Section(Tail("", star(r)), Tail("", r))

    def __str__(self) -> str:
        return f"*({self.period})*"


@dataclass(frozen=True)
class TwoTailed:
    """...LLL C RRR... with the left end stored outward-reading.

    Build instances with :func:`two_tailed`, which canonicalizes and may
    return a :class:`Periodic` when both ends coincide.
    """

    left: str
    center: str
    right: str

    @property
    def left_display(self) -> str:
        return star(self.left)

    def star(self) -> "BiSeq":
        return two_tailed(self.right, star(self.center), self.left, left_outward=True)

    def vee(self) -> "BiSeq":
        return two_tailed(vee(self.left), vee(self.center), vee(self.right), left_outward=True)

    def cuts(self) -> range:
        """Cut positions whose sections cover one full phase of each end."""
        return range(-(len(self.left) - 1), len(self.center) + len(self.right))

    def section(self, p: int) -> Section:
        """Section at cut p; p = 0 sits just left of the center."""
        L, C, R = self.left, self.center, self.right
        if p < 0:
            k = -p
            right = Tail(star(prefix_of_power(L, k)) + C, R)
            left = Tail("", rotate(L, k))
        elif p <= len(C):
            right = Tail(C[p:], R)
            left = Tail(star(C[:p]), L)
        else:
            q = p - len(C)
            right = Tail("", rotate(R, q))
            left = Tail(star(prefix_of_power(R, q)) + star(C), L)
        return Section(left, right)

    def end_periodics(self) -> tuple["Periodic", "Periodic"]:
        return Periodic(self.left_display), Periodic(self.right)

    def __str__(self) -> str:
        return f"*({self.left_display}){self.center}({self.right})*"


BiSeq = Union[Periodic, TwoTailed]


def two_tailed(left: str, center: str, right: str, *, left_outward: bool = False) -> BiSeq:
    """Canonical bi-infinite sequence ...LLL C RRR....

    ``left`` is the display period unless ``left_outward`` is set.
    Canonical form: the left periodic region is extended as far right as
    it goes, then the right region as far left as it goes.
    """
    for w in (left, center, right):
        check_word(w)
    if not left or not right:
        raise ValueError("periods must be nonempty")
    L = primitive_root(star(left) if left_outward else left)
    C = center
    R = primitive_root(right)
    while C and C[0] == L[0]:
        L = rotate(L, 1)
        C = C[1:]
    if not C:
        steps = 0
        limit = math.lcm(len(L), len(R))
        while L[0] == R[0] and steps < limit:
            L = rotate(L, 1)
            R = rotate(R, 1)
            steps += 1
        if steps == limit:
            return Periodic(L)
    while C and C[-1] == R[-1]:
        R = rotate(R, -1)
        C = C[:-1]
    return TwoTailed(star(L), C, R)


# ---------------------------------------------------------------------------
# parsing and formatting
# ---------------------------------------------------------------------------

_RE_WORD = re.compile(r"[1-5]*")
_RE_TAIL = re.compile(r"([1-5]*)\(([1-5]+)\)\*")
_RE_PERIODIC = re.compile(r"\*\(([1-5]+)\)\*")
_RE_TWO = re.compile(r"\*\(([1-5]+)\)([1-5|]*)\(([1-5]+)\)\*")


def _first_bad(text: str) -> int:
    for i, ch in enumerate(text):
        if ch not in "12345()*|":
            return i
    return len(text)


def parse(text: str):
    """Parse a word, tail or bi-infinite sequence expression."""
    if not isinstance(text, str):
        raise TypeError("expression must be a string")
    if _RE_WORD.fullmatch(text) and text:
        return text
    m = _RE_PERIODIC.fullmatch(text)
    if m:
        return Periodic(m.group(1))
    m = _RE_TWO.fullmatch(text)
    if m:
        return two_tailed(m.group(1), m.group(2).replace("|", ""), m.group(3))
    m = _RE_TAIL.fullmatch(text)
    if m:
        return Tail(m.group(1), m.group(2))
    if not text:
        raise ParseError("empty expression", text, 0)
    raise ParseError("malformed sequence expression", text, _first_bad(text))


def parse_biseq(text: str) -> BiSeq:
    obj = parse(text)
    if not isinstance(obj, (Periodic, TwoTailed)):
        raise ParseError("expected a bi-infinite sequence like *(43)*", text, 0)
    return obj


def parse_tail(text: str) -> Tail:
    obj = parse(text)
    if not isinstance(obj, Tail):
        raise ParseError("expected a tail like 5(13)*", text, 0)
    return obj


def format_obj(obj) -> str:
    if isinstance(obj, str):
        return obj
    return str(obj)
