"""Lower bound for the dimension of the Lagrange spectrum just above 4/sqrt(3).

Two blocks ``w = (42)^m 3`` and ``u = (42)^(m+1) 3`` are concatenated
freely with exponents in {1, 2}.  The resulting tail values form a Cantor
set F generated by four increasing maps, and the similarity dimension of
their lower contraction ratios bounds dim F from below.  Shifting F by a
fixed bi-Lipschitz map lands it inside the Lagrange spectrum below
4/sqrt(3) + eps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, cmp_to_key
from typing import Optional, Sequence

import mpmath

from .exact import INF, ZERO, AlgebraicReal, compare, make, sqrt
from .expansion import DigitMatrix, matrix_of, mobius, value_periodic, value_tail
from .words import Tail, star

FOUR_OVER_SQRT3 = 4 / sqrt(3)


def _eps(eps) -> AlgebraicReal:
    e = make(Fraction(str(eps)) if isinstance(eps, (float, str)) else eps)
    if compare(e, ZERO) <= 0:
        raise ValueError("eps must be positive")
    return e


def ebound_lhs(m: int) -> AlgebraicReal:
    """Right cylinder endpoints N_{3(24)^m}.inf + N_{(42)^(m+1)}.inf."""
    return mobius(matrix_of("3" + "24" * m), INF) + mobius(matrix_of("42" * (m + 1)), INF)


def ebound_limit() -> AlgebraicReal:
    """[3(24)^inf] + [(42)^inf]; equals 4/sqrt(3)."""
    return value_tail(Tail("3", "24")) + value_periodic("42")


def choose_m(eps) -> int:
    """Smallest m >= 1 whose block endpoints sum below 4/sqrt(3) + eps."""
    target = FOUR_OVER_SQRT3 + _eps(eps)
    m = 1
    while compare(ebound_lhs(m), target) >= 0:
        m += 1
    return m


@dataclass(frozen=True)
class BlockSystem:
    m: int
    eps: Optional[AlgebraicReal] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be >= 1")

    @property
    def w(self) -> str:
        return "42" * self.m + "3"

    @property
    def u(self) -> str:
        return "42" * (self.m + 1) + "3"

    @property
    def map_words(self) -> tuple[str, str, str, str]:
        w, u = self.w, self.u
        return (w + w + u, w + w + u + u, w + u, w + u + u)

    @property
    def matrices(self) -> tuple[DigitMatrix, ...]:
        return tuple(matrix_of(x) for x in self.map_words)

    @cached_property
    def alpha(self) -> AlgebraicReal:
        return value_periodic(self.w + self.w + self.u)

    @cached_property
    def beta(self) -> AlgebraicReal:
        return value_periodic(self.w + self.u + self.u)

    def apply(self, i: int, x) -> AlgebraicReal:
        """f_i(x) for i in 1..4."""
        return mobius(self.matrices[i - 1], x)


def block_system(m: int, eps=None) -> BlockSystem:
    return BlockSystem(m, None if eps is None else _eps(eps))


def ifs_ratios(sys: BlockSystem) -> tuple[AlgebraicReal, ...]:
    out = []
    for M in sys.matrices:
        c, d = M.c.to_algebraic(), M.d.to_algebraic()
        out.append(1 / (c * sys.beta + d) ** 2)
    return tuple(out)


# ---------------------------------------------------------------------------
# structural checks


def image_cylinders(sys: BlockSystem):
    """Exact cylinders of the four map words, each followed by w.

    Every P in E starts with w, so f_i(F) sits inside the cylinder of
    word_i + w.  Without the trailing w two of the cylinders nest.
    """
    out = []
    for x in sys.map_words:
        M = matrix_of(x + sys.w)
        out.append((mobius(M, ZERO), mobius(M, INF)))
    return out


def images_disjoint(sys: BlockSystem) -> bool:
    cyl = sorted(image_cylinders(sys), key=cmp_to_key(lambda x, y: compare(x[0], y[0])))
    return all(compare(cyl[k][1], cyl[k + 1][0]) <= 0 for k in range(len(cyl) - 1))


def maps_contain(sys: BlockSystem) -> bool:
    """f_i([alpha, beta]) inside [alpha, beta]; the maps are increasing."""
    a, b = sys.alpha, sys.beta
    for i in range(1, 5):
        if compare(sys.apply(i, a), a) < 0 or compare(sys.apply(i, b), b) > 0:
            return False
    return True


def block_dominance(sys: BlockSystem) -> bool:
    """[uQ] > [wR] for all tails, and [u*Q] < [w*R] when R starts with 3 or 4.

    The second comparison fails for R starting with 2, since u* begins
    with w* 2; in the construction R always starts a block.
    """
    mu, mw = matrix_of(sys.u), matrix_of(sys.w)
    first = compare(mobius(mu, ZERO), mobius(mw, INF)) >= 0
    mus, mws3 = matrix_of(star(sys.u)), matrix_of(star(sys.w) + "3")
    second = compare(mobius(mus, INF), mobius(mws3, ZERO)) <= 0
    return first and second


# ---------------------------------------------------------------------------
# Moran equation


@dataclass(frozen=True)
class MoranRoot:
    """Dyadic bracket lower <= s <= upper of the root of sum C_i^s = 1."""

    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


def _iv_enclosure(x, bits: int):
    """Interval around x > 0 with relative width below 2**-bits."""
    x = make(x)
    k = bits
    while True:
        lo, hi = x.interval(k)
        if lo > 0 and (hi - lo) << bits <= lo:
            break
        k *= 2
    # iv.mpf rounds the integer endpoints outward at the current precision
    return mpmath.iv.ldexp(mpmath.iv.mpf([lo, hi]), -k)


def moran_residual(ratios, s: Fraction, bits: int = 128):
    """Interval enclosure of sum C_i^s - 1."""
    iv = mpmath.iv
    saved = iv.prec
    iv.prec = bits
    try:
        sv = iv.mpf(s.numerator) / s.denominator
        total = iv.mpf(0)
        for c in ratios:
            total += iv.exp(sv * iv.log(_iv_enclosure(c, bits)))
        return total - 1
    finally:
        iv.prec = saved


def _side(ratios, s: Fraction) -> int:
    """+1 if the residual is certainly positive, -1 if negative, 0 if unsure."""
    for bits in (128, 256, 512):
        r = moran_residual(ratios, s, bits)
        if r.a > 0:
            return 1
        if r.b < 0:
            return -1
    return 0


def solve_s(ratios: Sequence, tol: Fraction = Fraction(1, 10**8)) -> MoranRoot:
    if not ratios:
        raise ValueError("need at least one ratio")
    for c in ratios:
        c = make(c)
        if compare(c, ZERO) <= 0 or compare(c, 1) >= 0:
            raise ValueError("ratios must lie in (0, 1)")
    lo, hi = Fraction(0), Fraction(1)
    while _side(ratios, hi) >= 0:
        lo, hi = hi, 2 * hi
    while hi - lo > tol:
        mid = (lo + hi) / 2
        side = _side(ratios, mid)
        if side > 0:
            lo = mid
        elif side < 0:
            hi = mid
        else:
            # mid sits on the root to working precision; bracket it tightly
            delta = Fraction(1, 2**28)
            if _side(ratios, mid - delta) > 0 and _side(ratios, mid + delta) < 0:
                return MoranRoot(mid - delta, mid + delta)
            raise ArithmeticError("could not separate the Moran root")  # pragma: no cover
    return MoranRoot(lo, hi)


# ---------------------------------------------------------------------------
# patterns and the construction


@dataclass(frozen=True)
class EPattern:
    """Exponent pairs (m_i, n_i) in {1, 2}, repeated forever."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        if not pairs:
            raise ValueError("pattern needs at least one pair")
        if any(x not in (1, 2) for p in pairs for x in p):
            raise ValueError("exponents must be 1 or 2")
        object.__setattr__(self, "pairs", pairs)

    def block(self, sys: BlockSystem) -> str:
        return "".join(sys.w * a + sys.u * b for a, b in self.pairs)

    def tail(self, sys: BlockSystem) -> Tail:
        return Tail("", self.block(sys))

    def exponent(self, i: int) -> tuple[int, int]:
        """(m_i, n_i) for i >= 1."""
        return self.pairs[(i - 1) % len(self.pairs)]

    def prefix(self, sys: BlockSystem, k: int) -> str:
        """v_k = w^{m_1} u^{n_1} ... w^{m_k} u^{n_k}."""
        out = []
        for i in range(1, k + 1):
            a, b = self.exponent(i)
            out.append(sys.w * a + sys.u * b)
        return "".join(out)


def random_pattern(rng: random.Random, max_len: int = 3) -> EPattern:
    n = rng.randint(1, max_len)
    return EPattern(tuple((rng.randint(1, 2), rng.randint(1, 2)) for _ in range(n)))


def construction_value(sys: BlockSystem, pat: EPattern, eps=None) -> AlgebraicReal:
    """[(w*)^inf] + [u^3 w P], the Lagrange value of A_P."""
    value = value_periodic(star(sys.w)) + value_tail(pat.tail(sys).prepend(sys.u * 3 + sys.w))
    bound = sys.eps if eps is None else _eps(eps)
    if bound is not None and compare(value, FOUR_OVER_SQRT3 + bound) >= 0:
        raise AssertionError("construction value is not below 4/sqrt(3) + eps")
    return value


_FLOAT_N = {d: matrix_of(d).floats() for d in "12345"}


def _float_value(digits: str, start: int, depth: int) -> float:
    """[digits[start:start+depth] ...] evaluated backwards from 1."""
    x = 1.0
    for d in reversed(digits[start : start + depth]):
        a, b, c, e = _FLOAT_N[d]
        x = (a * x + b) / (c * x + e)
    return x


def truncated_sequence(sys: BlockSystem, pat: EPattern, levels: int) -> tuple[str, list[int]]:
    """A finite piece of A_P and the cut positions w^k | u^3 w v_k.

    The left infinite run of w is represented by levels copies.
    """
    w, u = sys.w, sys.u
    parts = [w * levels]
    pos = len(parts[0])
    marks = []
    for k in range(1, levels + 1):
        # the leading run already supplies the single w of level 1
        chunk_left = w * k if k > 1 else ""
        parts.append(chunk_left)
        pos += len(chunk_left)
        marks.append(pos)
        tail = u * 3 + w + pat.prefix(sys, k)
        parts.append(tail)
        pos += len(tail)
    return "".join(parts), marks


def truncated_limsup(sys: BlockSystem, pat: EPattern, levels: int = 24, depth: int = 200) -> float:
    """Largest float section value over the late part of a truncated A_P.

    Sections of A_P and of its dual are both scanned.  Only cuts whose
    left and right contexts lie inside the truncation are used.
    """
    seq, marks = truncated_sequence(sys, pat, levels)
    rev = seq[::-1]
    n = len(seq)
    lo = marks[levels // 2]
    hi = marks[-1]
    best = 0.0
    for p in range(lo, hi + 1):
        if p < depth or n - p < depth:
            continue
        right = _float_value(seq, p, depth)
        left = _float_value(rev, n - p, depth)
        best = max(best, left + right, 1 / left + 1 / right)
    return best


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionReport:
    m: int
    system: BlockSystem
    ratios: tuple[AlgebraicReal, ...]
    root: MoranRoot

    @property
    def s(self) -> Fraction:
        return self.root.lower


def dimension_report(eps=None, m: Optional[int] = None) -> DimensionReport:
    if (eps is None) == (m is None):
        raise ValueError("give exactly one of eps and m")
    if m is None:
        m = choose_m(eps)
    sys = block_system(m, eps)
    ratios = ifs_ratios(sys)
    return DimensionReport(m, sys, ratios, solve_s(ratios))


def dimension_lower_bound(eps) -> Fraction:
    """Certified s > 0 with dim_H(L cap [0, 4/sqrt(3) + eps)) >= s."""
    s = dimension_report(eps=eps).s
    assert s > 0
    return s
