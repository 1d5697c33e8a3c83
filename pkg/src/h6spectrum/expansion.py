"""The five digit maps of H6 and what they do to real numbers.

Digit d acts by the Mobius map of N_d.  Every N_d has nonnegative
entries and unit determinant, so each map is increasing on (0, inf) and
sends it onto the cylinder of d.  The cylinders of 1..5 tile (0, inf) in
that order, which is why values compare like digit strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import NoPeriodFound, ParabolicPoint, ParabolicWord
from .exact import INF, ONE, QS3, ZERO, AlgebraicReal, Infinity, compare, make, sign, sqrt
from .words import Tail, check_word, vee

Extended = Union[AlgebraicReal, Infinity]


@dataclass(frozen=True)
class DigitMatrix:
    a: QS3
    b: QS3
    c: QS3
    d: QS3

    def __matmul__(self, other: "DigitMatrix") -> "DigitMatrix":
        return DigitMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> QS3:
        return self.a * self.d - self.b * self.c

    def trace(self) -> QS3:
        return self.a + self.d

    def inverse(self) -> "DigitMatrix":
        return DigitMatrix(self.d, -self.b, -self.c, self.a)

    def entries(self) -> tuple[QS3, QS3, QS3, QS3]:
        return (self.a, self.b, self.c, self.d)

    def floats(self) -> tuple[float, float, float, float]:
        return tuple(float(e) for e in self.entries())

    def __str__(self) -> str:
        return f"({self.a}, {self.b}; {self.c}, {self.d})"


def _m(a, b, c, d) -> DigitMatrix:
    return DigitMatrix(QS3(*a), QS3(*b), QS3(*c), QS3(*d))


IDENTITY = _m((1, 0), (0, 0), (0, 0), (1, 0))
S = _m((0, 0), (-1, 0), (1, 0), (0, 0))
N = {
    "1": _m((1, 0), (0, 0), (0, 1), (1, 0)),
    "2": _m((0, 1), (1, 0), (2, 0), (0, 1)),
    "3": _m((2, 0), (0, 1), (0, 1), (2, 0)),
    "4": _m((0, 1), (2, 0), (1, 0), (0, 1)),
    "5": _m((1, 0), (0, 1), (0, 0), (1, 0)),
}

# cylinder boundaries of the single digits, 0 < ... < inf
_S3 = sqrt(3)
BOUNDARIES: tuple = (ZERO, 1 / _S3, _S3 / 2, 2 / _S3, _S3, INF)


def _check_nonnegative() -> None:
    for d, M in N.items():
        assert all(e.sign() >= 0 for e in M.entries()), f"N_{d} has a negative entry"
        assert M.det() == QS3(1, 0), f"N_{d} is not unimodular"


_check_nonnegative()


@lru_cache(maxsize=1 << 16)
def matrix_of(w: str) -> DigitMatrix:
    """Ordered product N_{w[0]} ... N_{w[-1]}."""
    check_word(w)
    if not w:
        return IDENTITY
    if len(w) == 1:
        return N[w]
    h = len(w) // 2
    return matrix_of(w[:h]) @ matrix_of(w[h:])


def mobius(M: DigitMatrix, x) -> Extended:
    """(a x + b) / (c x + d), with INF handled as the extended point."""
    a, b, c, d = (e.to_algebraic() for e in M.entries())
    if x is INF:
        return INF if c.is_zero() else a / c
    x = make(x)
    den = c * x + d
    if den.is_zero():
        return INF
    return (a * x + b) / den


def discriminant(w: str) -> int:
    """Tr(N_w)^2 - 4, always an integer."""
    t = matrix_of(w).trace()
    sq = t * t
    assert sq.b == 0
    return int(sq.a) - 4


def is_hyperbolic(w: str) -> bool:
    return bool(w) and not matrix_of(w).c.is_zero() and discriminant(w) > 0


@lru_cache(maxsize=1 << 14)
def value_periodic(w: str) -> AlgebraicReal:
    """The attracting fixed point [w^inf] of N_w."""
    check_word(w)
    if not w:
        raise ValueError("empty period")
    M = matrix_of(w)
    if M.c.is_zero():
        raise ParabolicWord(f"N_{w} has c = 0; its fixed point is infinity")
    delta = discriminant(w)
    if delta == 0:
        raise ParabolicWord(f"N_{w} is parabolic (trace^2 = 4)")
    a, c, d = M.a.to_algebraic(), M.c.to_algebraic(), M.d.to_algebraic()
    return (a - d + sqrt(delta)) / (2 * c)


@lru_cache(maxsize=1 << 16)
def value_tail(t: Tail) -> AlgebraicReal:
    """[preperiod period period ...]."""
    return mobius(matrix_of(t.preperiod), value_periodic(t.period))


def closure_value(t: Tail) -> Extended:
    """Like value_tail, but a parabolic period contributes its fixed point.

    1^inf tends to 0 and 5^inf to infinity; the result is then a cylinder
    endpoint rather than the value of an admissible sequence.
    """
    per = t.period
    if per == "5":
        return mobius(matrix_of(t.preperiod), INF)
    if per == "1":
        return mobius(matrix_of(t.preperiod), ZERO)
    return value_tail(t)


@dataclass(frozen=True)
class CylinderInterval:
    low: AlgebraicReal
    high: Extended
    word: str

    def contains(self, x) -> bool:
        return compare(self.low, x) < 0 and compare(x, self.high) < 0


def cylinder(w: str) -> CylinderInterval:
    M = matrix_of(w)
    return CylinderInterval(mobius(M, ZERO), mobius(M, INF), w)


def _leading_digit(x: AlgebraicReal) -> str:
    # binary search over the four interior boundaries
    lo, hi = 0, 5
    while hi - lo > 1:
        mid = (lo + hi) // 2
        s = compare(x, BOUNDARIES[mid])
        if s == 0:
            raise ParabolicPoint(f"{x} is a cylinder endpoint")
        if s < 0:
            hi = mid
        else:
            lo = mid
    return "12345"[lo]


def _step(x: AlgebraicReal, d: str) -> AlgebraicReal:
    return mobius(N[d].inverse(), x)


def expand(x, n: int) -> str:
    """First n digits of the expansion of x > 0."""
    x = make(x)
    if sign(x) <= 0:
        raise ValueError("expand needs x > 0")
    out = []
    for _ in range(n):
        d = _leading_digit(x)
        out.append(d)
        x = _step(x, d)
    return "".join(out)


def expand_tail(x, max_steps: int | None = None) -> Tail:
    """Eventually periodic expansion of a quadratic x, found by residual repetition."""
    x = make(x)
    if sign(x) <= 0:
        raise ValueError("expand needs x > 0")
    cap = max_steps if max_steps is not None else max(64, 10 * x.height())
    seen: dict[AlgebraicReal, int] = {}
    digits = []
    for i in range(cap + 1):
        j = seen.get(x)
        if j is not None:
            return Tail("".join(digits[:j]), "".join(digits[j:]))
        seen[x] = i
        d = _leading_digit(x)
        digits.append(d)
        x = _step(x, d)
    raise NoPeriodFound(f"no repeated residual within {cap} steps")


def identity_check_vee(t: Tail) -> bool:
    """[t^vee] * [t] == 1, exactly."""
    return value_tail(vee(t)) * value_tail(t) == ONE
