"""(h,q)-Bernoulli numbers and polynomials.

Three evaluation routes for beta_{n,q}^h(x):

* closed form   (1-q)**-n sum_l C(n,l) (-1)**l q**(l x) (l+h-1)/[l+h-1]_q
* convolution   sum_l C(n,l) q**(l x) beta_l [x]_q**(n-l)
* series        -n sum_m q**(h m + x) [x+m]_q**(n-1)
                + (h-1)(1-q) sum_m q**((h-1) m) [x+m]_q**n

The alternating closed form loses about n*log2(1/(1-q)) bits to cancellation,
so the finite routes run in MPFR at a precision sized to that loss and round
once at the end.  At h = 1 the weight (l+h-1)/[l+h-1]_q is 0/0 for l = 0 and
is replaced by its limit (1-q)/ln(1/q); the series route uses the matching
h -> 1 limit of its second family, (1-q)**(1-n)/ln(1/q).
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import gmpy2

from .errors import CapError, DomainError
from .qkernel import DEFAULT_MAX_TERMS, DEFAULT_TOL, QFamily, QParams, SeriesResult, q_series

MAX_DEGREE = 60


class Route(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    CONVOLUTION = "convolution"
    SERIES = "series"
    DISTRIBUTION = "distribution"


@dataclass(frozen=True)
class BetaValue:
    n: int
    x: float
    params: QParams
    value: float
    route: Route
    tail_bound: float = 0.0
    series: Optional[SeriesResult] = None


def _check_degree(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    if n > MAX_DEGREE:
        raise CapError(f"degree {n} exceeds the cap {MAX_DEGREE}")


def _check_x(x: float) -> float:
    x = float(x)
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"x must be finite and >= 0, got {x!r}")
    return x


def closed_form_precision(n: int, q: float, h: float, f: int = 1) -> int:
    """MPFR bits for the alternating closed-form sums of degree n."""
    loss = n * (math.log2(1.0 / (1.0 - q)) + 1.0 + math.log2(f)) + math.log2(n + abs(h) + 2.0)
    return 96 + int(math.ceil(loss))


def q_weight_mp(y, q, f: int = 1):
    """y / [f y]_q in the current MPFR context; (1-q)/(f ln(1/q)) at y = 0."""
    if y == 0:
        return (1 - q) / (f * -gmpy2.log(q))
    return y * (1 - q) / -gmpy2.expm1(f * y * gmpy2.log(q))


def beta_closed_mp(n: int, x, q, h):
    """beta_{n,q}^h(x) as an MPFR value in the current context."""
    total = gmpy2.mpfr(0)
    for l in range(n + 1):
        t = math.comb(n, l) * q ** (l * x) * q_weight_mp(h + (l - 1), q)
        total = total - t if l % 2 else total + t
    return total / (1 - q) ** n


def beta_closed_form(n: int, x: float, params: QParams) -> BetaValue:
    _check_degree(n)
    x = _check_x(x)
    with gmpy2.context(precision=closed_form_precision(n, params.q, params.h)):
        v = beta_closed_mp(n, gmpy2.mpfr(x), gmpy2.mpfr(params.q), gmpy2.mpfr(params.h))
        value = float(v)
    return BetaValue(n, x, params, value, Route.CLOSED_FORM)


class BetaNumberCache:
    """Thread-safe store of MPFR beta numbers keyed by (q, h, degree).

    Scope one instance to an evaluation context (a sweep, a verify run); it
    is never shared implicitly.
    """

    def __init__(self):
        self._store: dict[tuple[float, float, int], tuple[int, object]] = {}
        self._lock = threading.Lock()

    def get(self, l: int, params: QParams, precision: int):
        key = (params.q, params.h, l)
        with self._lock:
            hit = self._store.get(key)
        if hit is not None and hit[0] >= precision:
            return hit[1]
        with gmpy2.context(precision=precision):
            v = beta_closed_mp(l, gmpy2.mpfr(0), gmpy2.mpfr(params.q), gmpy2.mpfr(params.h))
        with self._lock:
            self._store[key] = (precision, v)
        return v

    def __len__(self):
        return len(self._store)


def beta_convolution(
    n: int, x: float, params: QParams, cache: Optional[BetaNumberCache] = None
) -> BetaValue:
    _check_degree(n)
    x = _check_x(x)
    cache = cache if cache is not None else BetaNumberCache()
    prec = closed_form_precision(n, params.q, params.h) + 64
    numbers = [cache.get(l, params, prec) for l in range(n + 1)]
    with gmpy2.context(precision=prec):
        q, mx = gmpy2.mpfr(params.q), gmpy2.mpfr(x)
        qx = q**mx
        base = -gmpy2.expm1(mx * gmpy2.log(q)) / (1 - q)
        total = gmpy2.mpfr(0)
        for l in range(n + 1):
            total += math.comb(n, l) * qx**l * numbers[l] * base ** (n - l)
        value = float(total)
    return BetaValue(n, x, params, value, Route.CONVOLUTION)


def beta_series(
    k: int,
    x: float,
    params: QParams,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> BetaValue:
    _check_degree(k)
    x = _check_x(x)
    params.require_series()
    families = [QFamily(lambda q, h, s, ops: -k, params.h, x, complex(1 - k))]
    constant = None
    if params.h_is_one:
        constant = lambda q, h, s, ops: (1 - q) ** (1 - k) / -ops.log(q)
    else:
        families.append(QFamily(lambda q, h, s, ops: (h - 1) * (1 - q), params.h - 1.0, 0.0, complex(-k)))
    res = q_series(params, x, families, constant=constant, tol=tol, max_terms=max_terms)
    return BetaValue(k, x, params, res.value.real, Route.SERIES, res.tail_bound, res)


def difference_identity_sides(m: int, n_steps: int, params: QParams) -> tuple[float, float, float]:
    """Both sides of the n-step difference equation and their MPFR residual.

    lhs = q**((h-1) n) beta_m(n) - beta_m
    rhs = m sum_{l<n} q**(h l) [l]_q**(m-1) - (h-1)(1-q) sum_{l<n} q**((h-1) l) [l]_q**m
    with [0]_q**0 = 1 and the first sum dropped when m = 0.
    """
    _check_degree(m)
    if not isinstance(n_steps, int) or n_steps < 1:
        raise DomainError(f"n_steps must be a positive integer, got {n_steps!r}")
    prec = closed_form_precision(m, params.q, params.h) + 16 + int(m * math.log2(n_steps + 1))
    with gmpy2.context(precision=prec):
        q, h = gmpy2.mpfr(params.q), gmpy2.mpfr(params.h)
        lhs = q ** ((h - 1) * n_steps) * beta_closed_mp(m, gmpy2.mpfr(n_steps), q, h) - beta_closed_mp(
            m, gmpy2.mpfr(0), q, h
        )
        first = gmpy2.mpfr(0)
        second = gmpy2.mpfr(0)
        for l in range(n_steps):
            ql = (1 - q**l) / (1 - q)
            if m > 0 and (l > 0 or m == 1):
                first += q ** (h * l) * (ql ** (m - 1) if l > 0 else 1)
            if l > 0 or m == 0:
                second += q ** ((h - 1) * l) * (ql**m if l > 0 else 1)
        rhs = m * first - (h - 1) * (1 - q) * second
        return float(lhs), float(rhs), float(abs(lhs - rhs))


def difference_identity_residual(m: int, n_steps: int, params: QParams) -> float:
    return difference_identity_sides(m, n_steps, params)[2]


def kronecker_sides(n: int, params: QParams) -> tuple[float, float, float]:
    """(q**(h-1) beta_n(1) - beta_n, delta_{1n}, residual), residual from MPFR."""
    _check_degree(n)
    with gmpy2.context(precision=closed_form_precision(n, params.q, params.h) + 16):
        q, h = gmpy2.mpfr(params.q), gmpy2.mpfr(params.h)
        lhs = q ** (h - 1) * beta_closed_mp(n, gmpy2.mpfr(1), q, h) - beta_closed_mp(n, gmpy2.mpfr(0), q, h)
        delta = 1 if n == 1 else 0
        return float(lhs), float(delta), float(abs(lhs - delta))


@lru_cache(maxsize=None)
def classical_bernoulli_number(n: int) -> Fraction:
    """B_n from sum_{k<=n} C(n+1, k) B_k = 0, B_0 = 1 (so B_1 = -1/2)."""
    _check_degree(n)
    if n == 0:
        return Fraction(1)
    acc = sum(math.comb(n + 1, k) * classical_bernoulli_number(k) for k in range(n))
    return -acc / (n + 1)


def classical_bernoulli_poly(n: int, x: float) -> float:
    """B_n(x) = sum_k C(n,k) B_k x**(n-k), evaluated exactly then rounded."""
    _check_degree(n)
    fx = Fraction(x)
    return float(sum(math.comb(n, k) * classical_bernoulli_number(k) * fx ** (n - k) for k in range(n + 1)))
