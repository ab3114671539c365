"""Hurwitz-type (h,q)-zeta and (h,q)-zeta functions.

    zeta_q(s, x | h) = sum_{n>=0} q**(h n + x) / [x+n]_q**s
                       + (h-1)(1-q)/(s-1) sum_{n>=0} q**((h-1) n) / [x+n]_q**(s-1)

    zeta_q(s | h)    = the same two sums taken from n = 1 with q**(h n) and
                       q**((h-1) n), equal to q**(h-1) zeta_q(s, 1 | h)

Both series converge for every s != 1 once h >= 1, because [x+n]_q tends to
1/(1-q).  At h = 1 the second term is the limit (1-q)**s / ((s-1) ln(1/q)),
which keeps the simple pole at s = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .bernoulli import beta_closed_form
from .errors import DomainError, PoleError
from .qkernel import (
    DEFAULT_MAX_TERMS,
    DEFAULT_TOL,
    POLE_GUARD,
    QFamily,
    QParams,
    SeriesResult,
    q_series,
)


@dataclass(frozen=True)
class ZetaQuery:
    s: complex
    params: QParams
    x: Optional[float] = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        check_s(self.s)
        if self.x is not None:
            object.__setattr__(self, "x", check_shift(self.x))


def check_s(s: complex) -> None:
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError(f"s must be finite, got {s!r}")
    if abs(s - 1) < POLE_GUARD:
        raise PoleError(f"s = {s!r} lies within {POLE_GUARD:g} of the pole at s = 1")


def check_shift(x: float) -> float:
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"shift x must be finite and > 0, got {x!r}")
    return x


def _second_coeff(q, h, s, ops):
    return (h - 1) * (1 - q) / (s - 1)


def _h_one_limit(q, h, s, ops):
    return ops.cpow(1 - q, s) / ((s - 1) * -ops.log(q))


def zeta_families(params: QParams, s: complex, b1: float, b2: float) -> tuple[list, object]:
    """Families and h = 1 constant shared by every zeta/L series."""
    params.require_series()
    families = [QFamily(lambda q, h, s, ops: 1, params.h, b1, s)]
    if params.h_is_one:
        return families, _h_one_limit
    families.append(QFamily(_second_coeff, params.h - 1.0, b2, s - 1))
    return families, None


def hurwitz_zeta_q(
    query: ZetaQuery, max_terms: int = DEFAULT_MAX_TERMS
) -> SeriesResult:
    if query.x is None:
        raise DomainError("hurwitz_zeta_q needs a shift x")
    families, constant = zeta_families(query.params, query.s, query.x, 0.0)
    return q_series(
        query.params, query.x, families, s=query.s, constant=constant, tol=query.tol, max_terms=max_terms
    )


def zeta_q(
    s: complex, params: QParams, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS
) -> SeriesResult:
    s = complex(s)
    check_s(s)
    families, constant = zeta_families(params, s, 0.0, 0.0)
    return q_series(
        params, 0.0, families, s=s, constant=constant, tol=tol, max_terms=max_terms, from_one=True
    )


def special_value(k: int, params: QParams, x: Optional[float] = None) -> complex:
    """zeta_q(1-k, x | h) = -beta_k(x)/k, or zeta_q(1-k | h) = -q**(h-1) beta_k(1)/k."""
    if not isinstance(k, int) or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    if x is not None:
        return complex(-beta_closed_form(k, check_shift(x), params).value / k)
    return complex(-(params.q ** (params.h - 1)) * beta_closed_form(k, 1.0, params).value / k)
