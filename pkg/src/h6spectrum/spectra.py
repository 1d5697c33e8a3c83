"""Section values, Markoff and Lagrange numbers of eventually periodic sequences."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import NotExtremal
from .exact import AlgebraicReal, QS3, compare
from .expansion import N, S, DigitMatrix, matrix_of, value_tail
from .words import BiSeq, Periodic, Section, TwoTailed, star, two_tailed, vee


@dataclass(frozen=True)
class SpectrumValue:
    value: AlgebraicReal
    witness: Section
    attained: bool
    dual: bool = False  # witness is a section of vee(A)


def section_value(s: Section) -> AlgebraicReal:
    return value_tail(s.left) + value_tail(s.right)


def _best(cands: list[tuple[AlgebraicReal, Section, bool, bool]]) -> SpectrumValue:
    best = None
    for value, sec, attained, dual in cands:
        if best is None:
            best = (value, sec, attained, dual)
            continue
        c = compare(value, best[0])
        if c > 0 or (c == 0 and attained and not best[2]):
            best = (value, sec, attained, dual)
    return SpectrumValue(*best)


def _candidates(A: BiSeq, dual: bool):
    out = []
    for p in A.cuts():
        sec = A.section(p)
        out.append((section_value(sec), sec, True, dual))
    if isinstance(A, TwoTailed):
        # cuts sliding into either end approach the periodic sections
        # monotonically, so the limits are the only other candidates
        for end in A.end_periodics():
            for p in end.cuts():
                sec = end.section(p)
                out.append((section_value(sec), sec, False, dual))
    return out


@lru_cache(maxsize=4096)
def markoff(A: BiSeq) -> SpectrumValue:
    """Supremum of section values over A and its dual."""
    return _best(_candidates(A, False) + _candidates(vee(A), True))


@lru_cache(maxsize=4096)
def lagrange(A: BiSeq) -> SpectrumValue:
    if isinstance(A, Periodic):
        return markoff(A)
    left, right = A.end_periodics()
    ml, mr = markoff(left), markoff(right)
    best = ml if compare(ml.value, mr.value) >= 0 else mr
    return SpectrumValue(best.value, best.witness, False, best.dual)


def biseq_from_section(s: Section, insert: str = "") -> BiSeq:
    """The bi-infinite sequence P* insert Q for the section P*|Q."""
    left, right = s.left, s.right
    center = star(left.preperiod) + insert + right.preperiod
    return two_tailed(left.period, center, right.period, left_outward=True)


def shift_5k(A: BiSeq, s: Section, k: int) -> SpectrumValue:
    """Markoff value of A with 5^k inserted at an extremal section s."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if biseq_from_section(s) != A:
        raise NotExtremal(f"{s} is not a section of {A}")
    if section_value(s) != markoff(A).value:
        raise NotExtremal(f"{s} does not attain the Markoff value of {A}")
    return markoff(biseq_from_section(s, "5" * k))


# ---------------------------------------------------------------------------
# brute force over group elements
# ---------------------------------------------------------------------------

_GENS = [N[d] for d in "12345"] + [S]


def _key(M: DigitMatrix) -> tuple:
    flat = []
    for e in M.entries():
        flat += [e.a, e.b]
    for x in flat:
        if x:
            if x < 0:
                flat = [-y for y in flat]
            break
    return tuple(flat)


def _col_key(a: QS3, c: QS3) -> tuple:
    flat = [a.a, a.b, c.a, c.b]
    for x in flat:
        if x:
            if x < 0:
                flat = [-y for y in flat]
            break
    return tuple(flat)


@lru_cache(maxsize=32)
def _elements(depth: int) -> tuple[DigitMatrix, ...]:
    """Projectively distinct products of at most depth generators."""
    seen = {_key(matrix_of("")): matrix_of("")}
    frontier = list(seen.values())
    for _ in range(depth):
        nxt = []
        for M in frontier:
            for G in _GENS:
                P = M @ G
                k = _key(P)
                if k not in seen:
                    seen[k] = P
                    nxt.append(P)
        frontier = nxt
    return tuple(seen.values())


@lru_cache(maxsize=32)
def _columns(depth: int) -> tuple[tuple[QS3, QS3], ...]:
    """First columns (up to sign) of products of at most depth generators."""
    seen: dict[tuple, tuple[QS3, QS3]] = {}
    start = (QS3(1, 0), QS3(0, 0))
    seen[_col_key(*start)] = start
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for a, c in frontier:
            for G in _GENS:
                v = (G.a * a + G.b * c, G.c * a + G.d * c)
                k = _col_key(*v)
                if k not in seen:
                    seen[k] = v
                    nxt.append(v)
        frontier = nxt
    return tuple(seen.values())


def _mp(q: QS3) -> mpmath.mpf:
    return mpmath.mpf(q.a) + mpmath.mpf(q.b) * mpmath.sqrt(3)


def _exact_quality(a: QS3, c: QS3, p: AlgebraicReal, q: AlgebraicReal) -> AlgebraicReal:
    a_, c_ = a.to_algebraic(), c.to_algebraic()
    return (p + q) / abs((a_ + p * c_) * (a_ - q * c_))


def brute_force_markoff(A: BiSeq, depth: int, *, chunk: int = 64, top: int = 12) -> AlgebraicReal:
    """max of sqrt(Delta(f)) / |f(g)| over products g of at most depth generators.

    f is the form (x + [P]y)(x - [Q]y) of the section at cut 0.  The group
    element is split as g = G H with |G| <= ceil(depth/2); the inner factor
    only matters through its first column, so the search is a dense grid of
    (G, column) pairs evaluated in floating point.  The few best grid
    points are then rescored exactly and the exact maximum is returned.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    sec = A.section(0)
    P, Q = value_tail(sec.left), value_tail(sec.right)
    outer = _elements((depth + 1) // 2)
    cols = _columns(depth // 2)

    xs = np.empty(len(outer))
    ys = np.empty(len(outer))
    with mpmath.workdps(50):
        xi = _mp_value(Q)
        eta = -_mp_value(P)
        for i, G in enumerate(outer):
            al, be, ga, de = (_mp(e) for e in G.entries())
            # G^{-1} applied to the two roots of the form
            dx = al - ga * xi
            dy = al - ga * eta
            xs[i] = float((de * xi - be) / dx) if dx else np.inf
            ys[i] = float((de * eta - be) / dy) if dy else np.inf
    ca = np.array([float(a) for a, _ in cols])
    cc = np.array([float(c) for _, c in cols])

    # per outer element, the best column in floating point
    row_score = np.full(len(outer), -1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for s in range(0, len(outer), chunk):
            x = xs[s : s + chunk, None]
            y = ys[s : s + chunk, None]
            prod = (ca - x * cc) * (ca - y * cc)
            np.abs(prod, out=prod)
            score = np.abs(x[:, 0] - y[:, 0]) / prod.min(axis=1)
            row_score[s : s + chunk] = np.nan_to_num(score, nan=-1.0, posinf=-1.0)

    # rescore a handful of the best (row, column) pairs exactly; float
    # ranking is only used to shortlist, never to decide the answer
    exact_best = None
    seen = set()
    for i in np.argsort(-row_score, kind="stable")[:top]:
        if row_score[i] <= 0:
            break
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            vals = np.abs(xs[i] - ys[i]) / np.abs((ca - xs[i] * cc) * (ca - ys[i] * cc))
        vals = np.nan_to_num(vals, nan=-1.0, posinf=-1.0)
        G = outer[int(i)]
        for j in np.argsort(-vals, kind="stable")[:top]:
            a0, c0 = cols[int(j)]
            a = G.a * a0 + G.b * c0
            c = G.c * a0 + G.d * c0
            k = _col_key(a, c)
            if k in seen:
                continue
            seen.add(k)
            v = _exact_quality(a, c, P, Q)
            if exact_best is None or compare(v, exact_best) > 0:
                exact_best = v
    return exact_best


def _mp_value(x: AlgebraicReal) -> mpmath.mpf:
    lo, hi = x.interval(200)
    return mpmath.mpf(lo + hi) / mpmath.mpf(2) ** 201
