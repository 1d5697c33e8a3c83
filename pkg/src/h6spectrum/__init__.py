"""Markoff and Lagrange spectra of the Hecke group H6, in exact arithmetic."""

from __future__ import annotations

from .errors import (
    EmptyLanguage,
    H6Error,
    InvalidClaim,
    NoPeriodFound,
    NotExtremal,
    ParabolicPoint,
    ParabolicWord,
    ParseError,
)
from .exact import INF, QS3, AlgebraicReal, approx, compare, from_sexpr, make, pretty, sign, sqrt, to_decimal, to_sexpr
from .expansion import DigitMatrix, cylinder, expand, expand_tail, matrix_of, mobius, value_periodic, value_tail
from .extremize import MAX, MIN, ExtremalResult, SubshiftSpec, compile_spec, extremal_tail, window_bounds
from .spectra import SpectrumValue, brute_force_markoff, lagrange, markoff, section_value, shift_5k
from .words import Periodic, Section, Tail, TwoTailed, parse, parse_biseq, parse_tail, star, two_tailed, vee
from .gaps import GapCertificate, GapClaim, Inconclusive, certify_gap, replay_certificate
from .dimension import (
    BlockSystem,
    EPattern,
    choose_m,
    construction_value,
    dimension_lower_bound,
    ifs_ratios,
    solve_s,
)

__version__ = "0.1.0"
