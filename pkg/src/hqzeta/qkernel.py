"""q-numbers, principal-branch powers and tail-bounded series summation.

All infinite series used by the library are linear combinations of q-power
families

    F(a, b, w) = sum_{n >= 0} chi(n) q**(a*n + b) [x + n]_q**(-w)

sharing the same shift ``x`` and character ``chi``.  :func:`q_series` sums such
a combination with an a-priori geometric tail bound.  Terms are first summed
in binary64 (see :mod:`hqzeta._kernels`); when the first-order rounding
estimate of that pass exceeds a fraction of the requested tolerance, the
combination is re-summed in MPFR at a precision sized to the cancellation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import gmpy2
import numpy as np

from . import _kernels
from .errors import ConvergenceDomainError, DomainError, HQError, SingularTermError

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 10**6
POLE_GUARD = 1e-8
# Beyond this many terms an MPFR re-summation is too slow to be worth it; the
# binary64 value is returned with its rounding estimate instead.
MPFR_TERM_CAP = 200_000
_EPS = 2.0**-53


def _check_q(q: float) -> None:
    if not (isinstance(q, (int, float)) and 0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q!r}")


@dataclass(frozen=True)
class QParams:
    """Deformation pair (q, h) with 0 < q < 1 and finite real h."""

    q: float
    h: float

    def __post_init__(self):
        _check_q(self.q)
        if not math.isfinite(self.h):
            raise DomainError(f"h must be finite, got {self.h!r}")
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "h", float(self.h))

    @property
    def lnq(self) -> float:
        return math.log(self.q)

    @property
    def h_is_one(self) -> bool:
        return self.h == 1.0

    @property
    def first_family_converges(self) -> bool:
        """The q**(h n) family decays geometrically."""
        return self.h > 0.0

    @property
    def second_family_converges(self) -> bool:
        """The q**((h-1) n) family decays, or h = 1 where its limit is used."""
        return self.h >= 1.0

    @property
    def series_ok(self) -> bool:
        return self.first_family_converges and self.second_family_converges

    def require_series(self) -> None:
        if not self.series_ok:
            raise ConvergenceDomainError(
                f"series route needs h >= 1 (h = {self.h!r}); q**((h-1)n) does not decay"
            )


@dataclass(frozen=True)
class SeriesResult:
    """Truncated series value with its a-priori tail bound.

    ``rounding_bound`` is a first-order estimate of floating-point error and
    ``precision`` the working precision in bits (53 for the binary64 pass).
    """

    value: complex
    tail_bound: float
    terms_used: int
    converged: bool
    rounding_bound: float = 0.0
    precision: int = 53

    @property
    def error_bound(self) -> float:
        return self.tail_bound + self.rounding_bound


def q_number(x: float, q: float) -> float:
    """[x]_q = (1 - q**x) / (1 - q)."""
    _check_q(q)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    t = x * math.log(q)
    if abs(t) < math.log(2.0):
        return -math.expm1(t) / (1.0 - q)
    return (1.0 - q**x) / (1.0 - q)


def _cexpm1(z: complex) -> complex:
    er = math.expm1(z.real)
    s = math.sin(0.5 * z.imag)
    # exp(z) - 1 = expm1(r) cos t - 2 sin(t/2)**2 + i exp(r) sin t
    return complex(er * math.cos(z.imag) - 2.0 * s * s, (er + 1.0) * math.sin(z.imag))


def q_number_complex(x: complex, q: float) -> complex:
    """[x]_q for complex x, using the real logarithm of q."""
    _check_q(q)
    return -_cexpm1(complex(x) * math.log(q)) / (1.0 - q)


def complex_pow(base: float, exponent: complex) -> complex:
    """Principal value base**exponent = exp(exponent * ln base) for base > 0."""
    if not base > 0.0:
        raise DomainError(f"complex_pow needs a positive base, got {base!r}")
    exponent = complex(exponent)
    try:
        out = cmath.exp(exponent * math.log(base))
    except OverflowError as exc:
        raise DomainError(f"{base!r}**{exponent!r} overflows") from exc
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise DomainError(f"{base!r}**{exponent!r} is not finite")
    return out


def terms_needed(
    coeff_bound_fn: Callable[[int], float],
    ratio_bound: float,
    tol: float,
    max_terms: int,
    start: int = 0,
) -> tuple[int, float, bool]:
    """Smallest N >= start with coeff_bound_fn(N) * r**N / (1 - r) <= tol.

    Requires the bound to be non-increasing from ``start`` on, so the tail
    estimate is monotone and a bisection suffices.  Returns ``(N, tail, ok)``;
    when even ``max_terms`` is insufficient, ``N = max_terms`` and ``ok`` is
    False.
    """
    if not tol > 0.0:
        raise HQError(f"tol must be positive, got {tol!r}")
    if not 0.0 < ratio_bound < 1.0:
        raise HQError(f"ratio_bound must lie in (0, 1), got {ratio_bound!r}")
    if max_terms < 1:
        raise HQError(f"max_terms must be positive, got {max_terms!r}")

    def tail(n: int) -> float:
        c = coeff_bound_fn(n)
        if c == 0.0:
            return 0.0
        return c * ratio_bound**n / (1.0 - ratio_bound)

    start = min(start, max_terms)
    if tail(start) <= tol:
        return start, tail(start), True
    if tail(max_terms) > tol:
        return max_terms, tail(max_terms), False
    lo, hi = start, max_terms
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi, tail(hi), True


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, v: float) -> None:
        t = self.s + v
        if abs(self.s) >= abs(v):
            self.c += (self.s - t) + v
        else:
            self.c += (v - t) + self.s
        self.s = t

    @property
    def total(self) -> float:
        return self.s + self.c


def sum_geometric_tail(
    term_fn: Callable[[int], complex],
    ratio_bound: float,
    coeff_bound_fn: Callable[[int], float],
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    monotone_from: int = 0,
) -> SeriesResult:
    """Sum ``term_fn(n)`` for n >= 0 given |term_fn(n)| <= coeff_bound_fn(n) r**n.

    ``coeff_bound_fn`` must be non-increasing from ``monotone_from`` on.
    Terms are accumulated with Neumaier compensation.
    """
    n_terms, tail, ok = terms_needed(coeff_bound_fn, ratio_bound, tol, max_terms, monotone_from)
    re, im = _Neumaier(), _Neumaier()
    for n in range(n_terms):
        t = complex(term_fn(n))
        re.add(t.real)
        im.add(t.imag)
    value = complex(re.total, im.total)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError("series sum is not finite")
    return SeriesResult(value, tail, n_terms, ok)


# --- q-power family combinations -------------------------------------------


@dataclass(frozen=True)
class QFamily:
    """One family sum_n chi(n) q**(a n + b) [x+n]_q**(-w), weighted by ``coeff``.

    ``coeff(q, h, s, ops)`` must use plain arithmetic plus ``ops.log`` /
    ``ops.cpow`` so it evaluates both in binary64 and in MPFR.
    """

    coeff: Callable
    a: float
    b: float
    w: complex


class _FloatOps:
    log = staticmethod(math.log)
    cpow = staticmethod(complex_pow)


class _MpOps:
    log = staticmethod(gmpy2.log)

    @staticmethod
    def cpow(base, exponent):
        return gmpy2.exp(exponent * gmpy2.log(base))


FLOAT_OPS = _FloatOps()
MP_OPS = _MpOps()


@dataclass
class _Pass:
    fam: QFamily
    coeff: complex
    start: int
    stop: int
    tail: float
    converged: bool
    head: bool = False
    partial: complex = 0j
    abs_sum: float = 0.0
    err_sum: float = 0.0


def _coeff_bound(q: float, x: float, fam: QFamily) -> Callable[[int], float]:
    scale = q**fam.b
    wr = fam.w.real
    if wr >= 0.0:
        return lambda n: scale * q_number(x + n, q) ** (-wr)
    cap = scale * (1.0 - q) ** wr
    return lambda n: cap


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def q_series(
    params: QParams,
    x: float,
    families: Sequence[QFamily],
    *,
    s: Optional[complex] = None,
    chi: Optional[Sequence[complex]] = None,
    constant: Optional[Callable] = None,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    from_one: bool = False,
) -> SeriesResult:
    """Sum ``constant * mean(chi) + sum_i coeff_i * F_i`` with a tail bound <= tol.

    ``x >= 0``; for ``x = 0`` the n = 0 term [0]_q**(-w) is taken as 1 for
    w = 0, as 0 for re(w) < 0, and raises :class:`SingularTermError` otherwise;
    ``from_one`` drops that term instead (sums start at n = 1).
    ``chi`` lists character values over one period (default: constant 1).
    ``constant`` has the same signature as a family coefficient and is spread
    evenly over the residue classes, i.e. it is weighted by the mean of chi.
    """
    if not tol > 0.0:
        raise HQError(f"tol must be positive, got {tol!r}")
    if x < 0.0 or not math.isfinite(x):
        raise DomainError(f"shift x must be >= 0, got {x!r}")
    if from_one and x != 0.0:
        raise HQError("from_one requires x = 0")
    q, h = params.q, params.h
    chi = [complex(c) for c in (chi if chi is not None else (1.0,))]
    f = len(chi)
    skip = {j for j, c in enumerate(chi) if c == 0}
    chi_re = np.array([c.real for c in chi])
    chi_im = np.array([c.imag for c in chi])
    chi_mean = sum(chi) / f
    lnq = math.log(q)

    passes = []
    for fam in families:
        c = complex(fam.coeff(q, h, s, FLOAT_OPS))
        if c == 0:
            continue
        if not fam.a > 0.0:
            raise ConvergenceDomainError(f"q**({fam.a!r} n) does not decay")
        start = 0 if x > 0.0 else 1
        head = False
        if x == 0.0 and 0 not in skip and not from_one:
            if fam.w == 0:
                head = True
            elif fam.w.real >= 0.0:
                raise SingularTermError("term [0]_q**(-w) with re(w) >= 0 is undefined")
        passes.append(_Pass(fam, c, start, start, 0.0, True, head))

    share = tol / max(len(passes), 1)
    for p in passes:
        bound = _coeff_bound(q, x, p.fam)
        p.stop, p.tail, p.converged = terms_needed(
            bound, q**p.fam.a, share / abs(p.coeff), max_terms, p.start
        )
        w = p.fam.w
        re, im, p.abs_sum, p.err_sum = _kernels.block_float(
            lnq, 1.0 - q, p.fam.a, p.fam.b, x, w.real, w.imag, chi_re, chi_im, p.start, p.stop
        )
        p.partial = complex(re, im)
        if p.head:
            hv = q**p.fam.b
            p.partial += chi[0] * hv
            p.abs_sum += abs(hv)
            p.err_sum += abs(hv) * 8.0

    const = complex(constant(q, h, s, FLOAT_OPS)) if constant is not None else 0j
    value = const * chi_mean + sum(p.coeff * p.partial for p in passes)
    tail = sum(abs(p.coeff) * p.tail for p in passes)
    converged = all(p.converged for p in passes)
    terms = max((p.stop for p in passes), default=0)
    budget = sum(abs(p.coeff) * (p.err_sum + 4.0 * p.abs_sum) for p in passes) + 4.0 * abs(const)
    rounding = _EPS * budget

    precision = 53
    if (
        rounding > tol / 16.0
        and converged
        and sum(p.stop - p.start for p in passes) <= MPFR_TERM_CAP
    ):
        precision = int(math.ceil(math.log2(budget * 1024.0 / tol))) + 16
        value, final = _resum_mpfr(params, x, passes, s, chi, skip, constant, precision)
        rounding = budget * 2.0**-precision + final

    if not _finite(value):
        raise DomainError("series value is not finite")
    return SeriesResult(value, tail, terms, converged, rounding, precision)


def _resum_mpfr(params, x, passes, s, chi, skip, constant, precision):
    f = len(chi)
    with gmpy2.context(precision=precision):
        mq, mh = gmpy2.mpfr(params.q), gmpy2.mpfr(params.h)
        ms = gmpy2.mpc(s) if s is not None else None
        totals = [gmpy2.mpc(0) for _ in range(f)]
        if constant is not None:
            share = constant(mq, mh, ms, MP_OPS) / f
            totals = [t + share for t in totals]
        for p in passes:
            c = p.fam.coeff(mq, mh, ms, MP_OPS)
            acc_re, acc_im = _kernels.block_mpfr(
                params.q, p.fam.a, p.fam.b, x, p.fam.w, f, skip, p.start, p.stop
            )
            if p.head:
                acc_re[0] += mq ** gmpy2.mpfr(p.fam.b)
            for j in range(f):
                if j not in skip:
                    totals[j] += c * gmpy2.mpc(acc_re[j], acc_im[j])
        rounded = [complex(t) for t in totals]
    value = sum(chi[j] * rounded[j] for j in range(f) if j not in skip)
    final = 4.0 * _EPS * sum(abs(r) for r in rounded)
    return value, final
