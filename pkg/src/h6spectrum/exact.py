"""Exact real arithmetic for the numbers met in H6 expansions.

Every value is stored in the normal form

    x = sum_m q_m * sqrt(m)        (q_m rational, m squarefree, m >= 1)

i.e. as an element of a multiquadratic field Q(sqrt(p1), ..., sqrt(pk)).
Square roots of distinct squarefree integers are linearly independent
over Q, so the representation is unique and ``x == 0`` is a syntactic
test.  Signs of nonzero values are found from dyadic enclosures whose
precision doubles on demand; past a ceiling the exact recursive test

    sign(a + b*sqrt(p)) from sign(a), sign(b) and sign(a^2 - p*b^2)

takes over, so sign determination never fails.

Matrix entries live in the small subfield Q(sqrt 3) and have their own
lightweight type, :class:`QS3`.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import lru_cache
from itertools import product
from numbers import Rational
from typing import Iterable, Union

import sympy

__all__ = [
    "AlgebraicReal",
    "QS3",
    "INF",
    "Infinity",
    "ONE",
    "ZERO",
    "SQRT3",
    "approx",
    "compare",
    "enclose",
    "from_sexpr",
    "make",
    "sign",
    "sqrt",
    "to_decimal",
    "to_sexpr",
]

DEFAULT_START_BITS = 64
DEFAULT_CEILING_BITS = 4096


def precision_ceiling() -> int:
    """Bits of interval refinement allowed before the symbolic sign test."""
    raw = os.environ.get("H6_PRECISION_CEILING")
    if raw:
        try:
            return max(DEFAULT_START_BITS, int(raw))
        except ValueError:
            pass
    return DEFAULT_CEILING_BITS


# ---------------------------------------------------------------------------
# squarefree radicands and their prime supports
# ---------------------------------------------------------------------------

_PRIMES: dict[int, tuple[int, ...]] = {1: ()}


def _register(m: int, primes: Iterable[int]) -> None:
    if m not in _PRIMES:
        _PRIMES[m] = tuple(sorted(primes))


def _primes_of(m: int) -> tuple[int, ...]:
    ps = _PRIMES.get(m)
    if ps is None:
        f = sympy.factorint(m)
        ps = tuple(sorted(int(p) for p in f))
        _PRIMES[m] = ps
    return ps


@lru_cache(maxsize=4096)
def _split_square(n: int) -> tuple[int, int]:
    """Write n > 0 as s^2 * m with m squarefree; returns (s, m)."""
    s, m = 1, 1
    primes = []
    for p, e in sympy.factorint(n).items():
        p = int(p)
        s *= p ** (e // 2)
        if e % 2:
            m *= p
            primes.append(p)
    _register(m, primes)
    return s, m


def _radicand_product(m: int, n: int) -> tuple[int, int]:
    """sqrt(m)*sqrt(n) = k*sqrt(r) for squarefree m, n; returns (k, r)."""
    if m == 1:
        return 1, n
    if n == 1:
        return 1, m
    g = math.gcd(m, n)
    r = (m // g) * (n // g)
    if r not in _PRIMES:
        pm, pn = _PRIMES.get(m), _PRIMES.get(n)
        if pm is not None and pn is not None:
            _register(r, set(pm) ^ set(pn))
    return g, r


@lru_cache(maxsize=65536)
def _sqrt_bounds(m: int, bits: int) -> tuple[int, int]:
    """floor and ceil of sqrt(m) * 2**bits."""
    t = m << (2 * bits)
    lo = math.isqrt(t)
    return lo, (lo if lo * lo == t else lo + 1)


# ---------------------------------------------------------------------------
# extended-real sentinel
# ---------------------------------------------------------------------------


class Infinity:
    """The point at infinity of the extended real line (positive end)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self) -> int:
        return hash("h6-infinity")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __float__(self) -> float:
        return math.inf


INF = Infinity()


# ---------------------------------------------------------------------------
# the field Q(sqrt 3) for matrix entries
# ---------------------------------------------------------------------------


class QS3:
    """a + b*sqrt(3) with rational (usually integer) a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0) -> None:
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        return f"QS3({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        rad = "√3" if self.b == 1 else f"{self.b}√3"
        return rad if self.a == 0 else f"{self.a}+{rad}"

    def __eq__(self, other) -> bool:
        if isinstance(other, QS3):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __add__(self, other: "QS3") -> "QS3":
        return QS3(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QS3") -> "QS3":
        return QS3(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QS3":
        return QS3(-self.a, -self.b)

    def __mul__(self, other: "QS3") -> "QS3":
        return QS3(self.a * other.a + 3 * self.b * other.b, self.a * other.b + self.b * other.a)

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        d = self.a * self.a - 3 * self.b * self.b
        return sa * ((d > 0) - (d < 0))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_algebraic(self) -> "AlgebraicReal":
        terms = {}
        if self.a:
            terms[1] = Fraction(self.a)
        if self.b:
            terms[3] = Fraction(self.b)
        return AlgebraicReal._from_dict(terms)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(3.0)


_PRIMES[3] = (3,)


# ---------------------------------------------------------------------------
# AlgebraicReal
# ---------------------------------------------------------------------------

Number = Union["AlgebraicReal", int, Fraction]


class AlgebraicReal:
    """Immutable exact real number in multiquadratic normal form."""

    __slots__ = ("_terms", "_hash", "_iv")

    def __init__(self, value: Union[int, Fraction, "AlgebraicReal", QS3] = 0) -> None:
        if isinstance(value, AlgebraicReal):
            self._terms = value._terms
        elif isinstance(value, QS3):
            self._terms = value.to_algebraic()._terms
        elif isinstance(value, (int, Rational)):
            q = Fraction(value)
            self._terms = ((1, q),) if q else ()
        else:
            raise TypeError(f"cannot build AlgebraicReal from {type(value).__name__}")
        self._hash = None
        self._iv = {}

    @classmethod
    def _from_dict(cls, terms: dict) -> "AlgebraicReal":
        obj = object.__new__(cls)
        obj._terms = tuple(sorted((m, q) for m, q in terms.items() if q))
        obj._hash = None
        obj._iv = {}
        return obj

    # -- structure -----------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        """(radicand, coefficient) pairs, radicands squarefree and increasing."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == 1)

    @property
    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms[0][1] if self._terms else Fraction(0)

    def radicands(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self._terms if m != 1)

    def primes(self) -> tuple[int, ...]:
        ps = set()
        for m, _ in self._terms:
            ps.update(_primes_of(m))
        return tuple(sorted(ps))

    def height(self) -> int:
        """Total bit size of the normal form (used to cap searches)."""
        return sum(
            m.bit_length() + abs(q.numerator).bit_length() + q.denominator.bit_length()
            for m, q in self._terms
        )

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "AlgebraicReal":
        if isinstance(other, AlgebraicReal):
            return other
        if isinstance(other, QS3):
            return other.to_algebraic()
        if isinstance(other, (int, Rational)):
            return AlgebraicReal(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for m, q in other._terms:
            terms[m] = terms.get(m, 0) + q
        return AlgebraicReal._from_dict(terms)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraicReal":
        return AlgebraicReal._from_dict({m: -q for m, q in self._terms})

    def __pos__(self) -> "AlgebraicReal":
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[int, Fraction] = {}
        for m, q in self._terms:
            for n, r in other._terms:
                k, s = _radicand_product(m, n)
                terms[s] = terms.get(s, 0) + q * r * k
        return AlgebraicReal._from_dict(terms)

    __rmul__ = __mul__

    def _conjugate_at(self, p: int) -> "AlgebraicReal":
        return AlgebraicReal._from_dict({m: (-q if m % p == 0 else q) for m, q in self._terms})

    def inverse(self) -> "AlgebraicReal":
        if not self._terms:
            raise ZeroDivisionError("division by exact zero")
        num = ONE
        den = self
        while not den.is_rational():
            p = den.primes()[-1]
            conj = den._conjugate_at(p)
            num = num * conj
            den = den * conj
        return num * (1 / den.rational)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            r = other.rational
            if not r:
                raise ZeroDivisionError("division by exact zero")
            return AlgebraicReal._from_dict({m: q / r for m, q in self._terms})
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "AlgebraicReal":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (ONE / self) ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self) -> "AlgebraicReal":
        return -self if sign(self) < 0 else self

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if other is INF:
            return False
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms) if not self.is_rational() else hash(self.rational)
        return self._hash

    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __le__(self, other) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other) -> bool:
        return compare(self, other) >= 0

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- enclosures ----------------------------------------------------------

    def interval(self, bits: int) -> tuple[int, int]:
        """Integers (lo, hi) with lo/2**bits <= self <= hi/2**bits.

        Enclosures at more bits are nested inside those at fewer bits.
        """
        hit = self._iv.get(bits)
        if hit is not None:
            return hit
        lo = Fraction(0)
        hi = Fraction(0)
        for m, q in self._terms:
            if m == 1:
                s_lo = s_hi = 1 << bits
            else:
                s_lo, s_hi = _sqrt_bounds(m, bits)
            if q > 0:
                lo += q * s_lo
                hi += q * s_hi
            else:
                lo += q * s_hi
                hi += q * s_lo
        out = (math.floor(lo), math.ceil(hi))
        self._iv[bits] = out
        return out

    def __float__(self) -> float:
        if self.is_zero():
            return 0.0
        # refine until the enclosure is tight relative to the value, since
        # large cancelling coefficients can leave tiny values unresolved
        bits = 80
        while True:
            lo, hi = self.interval(bits)
            if (lo > 0 or hi < 0) and (hi - lo) << 60 <= min(abs(lo), abs(hi)):
                return float(Fraction(lo + hi, 2 << bits))
            bits *= 2

    # -- presentation --------------------------------------------------------

    def __repr__(self) -> str:
        return f"AlgebraicReal({to_sexpr(self)!r})"

    def __str__(self) -> str:
        return pretty(self)

    def minimal_polynomial(self, max_degree: int = 16) -> list[int]:
        """Primitive integer coefficients (highest degree first).

        The roots are the distinct Galois conjugates, obtained by flipping
        the sign of each prime square root.
        """
        ps = self.primes()
        conj = []
        seen = set()
        for signs in product((1, -1), repeat=len(ps)):
            flip = {p for p, e in zip(ps, signs) if e < 0}
            terms = {}
            for m, q in self._terms:
                odd = sum(1 for p in _primes_of(m) if p in flip) % 2
                terms[m] = -q if odd else q
            c = AlgebraicReal._from_dict(terms)
            if c._terms not in seen:
                seen.add(c._terms)
                conj.append(c)
            if len(conj) > max_degree:
                raise ValueError(f"degree exceeds {max_degree}")
        poly = [ONE]
        for c in conj:
            nxt = [ZERO] * (len(poly) + 1)
            for i, coef in enumerate(poly):
                nxt[i] = nxt[i] + coef
                nxt[i + 1] = nxt[i + 1] - coef * c
            poly = nxt
        coeffs = [c.rational for c in poly]
        den = math.lcm(*(q.denominator for q in coeffs))
        ints = [int(q * den) for q in coeffs]
        g = math.gcd(*ints)
        return [i // g for i in ints]


ZERO = AlgebraicReal(0)
ONE = AlgebraicReal(1)


def make(value) -> AlgebraicReal:
    """Coerce int, Fraction, QS3 or AlgebraicReal to AlgebraicReal."""
    if isinstance(value, AlgebraicReal):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction")
    return AlgebraicReal(value)


def sqrt(value) -> AlgebraicReal:
    """Exact square root of a nonnegative rational."""
    x = make(value)
    if not x.is_rational():
        raise ValueError(f"sqrt is only supported for rational operands, got {to_sexpr(x)}")
    q = x.rational
    if q < 0:
        raise ValueError("sqrt of a negative number")
    if q == 0:
        return ZERO
    # sqrt(n/d) = sqrt(n*d)/d
    s, m = _split_square(q.numerator * q.denominator)
    return AlgebraicReal._from_dict({m: Fraction(s, q.denominator)})


SQRT3 = sqrt(3)


# ---------------------------------------------------------------------------
# sign, comparison, approximation
# ---------------------------------------------------------------------------


def _symbolic_sign(x: AlgebraicReal) -> int:
    if x.is_rational():
        q = x.rational
        return (q > 0) - (q < 0)
    p = x.primes()[-1]
    a = AlgebraicReal._from_dict({m: q for m, q in x._terms if m % p})
    b = AlgebraicReal._from_dict({m // p: q for m, q in x._terms if m % p == 0})
    sa = _symbolic_sign(a)
    sb = _symbolic_sign(b)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    return sa * _symbolic_sign(a * a - b * b * p)


def sign(x, *, ceiling: int | None = None) -> int:
    """Exact sign of x: -1, 0 or +1."""
    if x is INF:
        return 1
    x = make(x)
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.rational > 0 else -1
    limit = precision_ceiling() if ceiling is None else ceiling
    bits = DEFAULT_START_BITS
    while bits <= limit:
        lo, hi = x.interval(bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    return _symbolic_sign(x)


def compare(x, y) -> int:
    """-1, 0, +1 as x <, ==, > y.  Either side may be INF."""
    if x is INF or y is INF:
        if x is y:
            return 0
        return 1 if x is INF else -1
    return sign(make(x) - make(y))


def approx(x, eps) -> tuple[Fraction, Fraction]:
    """Dyadic interval [lo, hi] containing x with hi - lo <= eps."""
    x = make(x)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if x.is_zero():
        return Fraction(0), Fraction(0)
    bits = DEFAULT_START_BITS
    while True:
        lo, hi = x.interval(bits)
        if Fraction(hi - lo, 1 << bits) <= eps:
            return Fraction(lo, 1 << bits), Fraction(hi, 1 << bits)
        bits *= 2


def enclose(x, bits: int = 64) -> tuple[float, float]:
    """Float interval guaranteed to contain x (INF maps to (inf, inf))."""
    if x is INF:
        return math.inf, math.inf
    x = make(x)
    if x.is_zero():
        return 0.0, 0.0
    lo, hi = x.interval(bits)
    flo = float(Fraction(lo, 1 << bits))
    fhi = float(Fraction(hi, 1 << bits))
    return math.nextafter(flo, -math.inf), math.nextafter(fhi, math.inf)


def to_decimal(x, digits: int = 12) -> str:
    """x correctly rounded (half-even) to the given number of significant digits."""
    from decimal import Context, ROUND_HALF_EVEN, Decimal

    if x is INF:
        return "inf"
    x = make(x)
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)

    def rnd(q: Fraction) -> Decimal:
        return ctx.divide(Decimal(q.numerator), Decimal(q.denominator))

    if x.is_rational():
        return _fmt_decimal(rnd(x.rational))
    bits = DEFAULT_START_BITS
    while True:
        lo, hi = x.interval(bits)
        a = rnd(Fraction(lo, 1 << bits))
        b = rnd(Fraction(hi, 1 << bits))
        if a == b:
            return _fmt_decimal(a)
        bits *= 2


def _fmt_decimal(d) -> str:
    s = format(d, "f")
    return "0" if s in ("-0", "0E-0") else s


# ---------------------------------------------------------------------------
# s-expressions
# ---------------------------------------------------------------------------


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_sexpr(x) -> str:
    """Canonical s-expression over rationals, sqrt, + and *."""
    if x is INF:
        return "inf"
    x = make(x)
    if x.is_zero():
        return "0"
    parts = []
    for m, q in x.terms:
        if m == 1:
            parts.append(_fmt_q(q))
        elif q == 1:
            parts.append(f"(sqrt {m})")
        else:
            parts.append(f"(* {_fmt_q(q)} (sqrt {m}))")
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def pretty(x) -> str:
    if x is INF:
        return "∞"
    x = make(x)
    if x.is_zero():
        return "0"
    out = []
    for m, q in x.terms:
        if m == 1:
            term = _fmt_q(abs(q))
        else:
            num, den = abs(q.numerator), q.denominator
            term = ("" if num == 1 else str(num)) + f"√{m}" + ("" if den == 1 else f"/{den}")
        if not out:
            out.append(("-" if q < 0 else "") + term)
        else:
            out.append((" - " if q < 0 else " + ") + term)
    return "".join(out)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def from_sexpr(text: str):
    """Parse an s-expression over {rationals, sqrt, +, -, *, /}; 'inf' allowed."""
    from .errors import ParseError

    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression", text, 0)
    pos = 0

    def atom(tok: str, at: int):
        if tok == "inf":
            return INF
        try:
            if "." in tok or "e" in tok.lower():
                from decimal import Decimal

                return AlgebraicReal(Fraction(Decimal(tok)))
            return AlgebraicReal(Fraction(tok))
        except (ValueError, ArithmeticError):
            raise ParseError(f"bad number {tok!r}", text, at) from None

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end", text, len(text))
        tok, at = tokens[pos]
        if tok == ")":
            raise ParseError("unexpected ')'", text, at)
        if tok != "(":
            pos += 1
            return atom(tok, at)
        pos += 1
        if pos >= len(tokens):
            raise ParseError("unexpected end", text, len(text))
        op, op_at = tokens[pos]
        pos += 1
        args = []
        while pos < len(tokens) and tokens[pos][0] != ")":
            args.append(expr())
        if pos >= len(tokens):
            raise ParseError("missing ')'", text, len(text))
        pos += 1
        if any(a is INF for a in args):
            raise ParseError("inf cannot be an operand", text, op_at)
        try:
            if op == "sqrt" and len(args) == 1:
                return sqrt(args[0])
            if op == "+" and args:
                return sum(args[1:], args[0])
            if op == "-" and len(args) == 1:
                return -args[0]
            if op == "-" and len(args) >= 2:
                out = args[0]
                for a in args[1:]:
                    out = out - a
                return out
            if op == "*" and args:
                out = args[0]
                for a in args[1:]:
                    out = out * a
                return out
            if op == "/" and len(args) >= 2:
                out = args[0]
                for a in args[1:]:
                    out = out / a
                return out
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), text, op_at) from None
        raise ParseError(f"bad operator or arity {op!r}", text, op_at)

    value = expr()
    if pos != len(tokens):
        raise ParseError("trailing input", text, tokens[pos][1])
    return value
