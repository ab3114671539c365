"""Generalized (h,q)-Bernoulli values attached to a character and (h,q)-L-functions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import gmpy2

from .bernoulli import Route, _check_degree, _check_x, beta_closed_mp, closed_form_precision, q_weight_mp
from .bernoulli import classical_bernoulli_poly
from .dirichlet import CharacterTable, evaluate, is_principal
from .errors import DomainError, PrincipalCharacterError
from .qkernel import DEFAULT_MAX_TERMS, DEFAULT_TOL, QFamily, QParams, SeriesResult, q_series
from .zeta import check_s, check_shift, zeta_families


@dataclass(frozen=True)
class ChiBetaValue:
    n: int
    x: float
    chi: CharacterTable
    params: QParams
    value: complex
    route: Route
    tail_bound: float = 0.0
    series: Optional[SeriesResult] = None


def _combine(chi: CharacterTable, parts: dict[int, float]) -> complex:
    return sum((evaluate(chi, a) * v for a, v in parts.items()), 0j)


def chi_beta_distribution(n: int, x: float, chi: CharacterTable, params: QParams) -> ChiBetaValue:
    """[f]_q**(n-1) sum_a chi(a) q**((h-1) a) beta_{n, q**f}^h((x+a)/f)."""
    _check_degree(n)
    x = _check_x(x)
    f = chi.modulus
    QParams(params.q**f, params.h)
    parts = {}
    with gmpy2.context(precision=closed_form_precision(n, params.q, params.h, f)):
        q, h = gmpy2.mpfr(params.q), gmpy2.mpfr(params.h)
        qf = q**f
        scale = ((1 - qf) / (1 - q)) ** (n - 1)
        for a in range(f):
            if chi.values[a] is None:
                continue
            inner = beta_closed_mp(n, (x + gmpy2.mpfr(a)) / f, qf, h)
            parts[a] = float(scale * q ** ((h - 1) * a) * inner)
    return ChiBetaValue(n, x, chi, params, _combine(chi, parts), Route.DISTRIBUTION)


def chi_beta_closed(n: int, x: float, chi: CharacterTable, params: QParams) -> ChiBetaValue:
    """sum_a chi(a) q**((h-1) a) (1-q)**-n sum_l C(n,l) (-1)**l q**(l(x+a)) (l+h-1)/[f(l+h-1)]_q."""
    _check_degree(n)
    x = _check_x(x)
    f = chi.modulus
    parts = {}
    with gmpy2.context(precision=closed_form_precision(n, params.q, params.h, f)):
        q, h, mx = gmpy2.mpfr(params.q), gmpy2.mpfr(params.h), gmpy2.mpfr(x)
        weights = [math.comb(n, l) * q_weight_mp(h + (l - 1), q, f) for l in range(n + 1)]
        for a in range(f):
            if chi.values[a] is None:
                continue
            qa = q ** (mx + a)
            inner = gmpy2.mpfr(0)
            for l in range(n + 1):
                t = qa**l * weights[l]
                inner = inner - t if l % 2 else inner + t
            parts[a] = float(q ** ((h - 1) * a) * inner / (1 - q) ** n)
    return ChiBetaValue(n, x, chi, params, _combine(chi, parts), Route.CLOSED_FORM)


def chi_beta_series(
    n: int,
    x: float,
    chi: CharacterTable,
    params: QParams,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ChiBetaValue:
    """(h-1)(1-q) sum_m q**((h-1)m) chi(m) [x+m]_q**n - n sum_m q**(hm+x) chi(m) [x+m]_q**(n-1)."""
    _check_degree(n)
    x = _check_x(x)
    params.require_series()
    families = [QFamily(lambda q, h, s, ops: -n, params.h, x, complex(1 - n))]
    constant = None
    if params.h_is_one:
        constant = lambda q, h, s, ops: (1 - q) ** (1 - n) / -ops.log(q)
    else:
        families.append(QFamily(lambda q, h, s, ops: (h - 1) * (1 - q), params.h - 1.0, 0.0, complex(-n)))
    res = q_series(
        params, x, families, chi=chi.period_values(), constant=constant, tol=tol, max_terms=max_terms
    )
    return ChiBetaValue(n, x, chi, params, res.value, Route.SERIES, res.tail_bound, res)


def l_function_hurwitz(
    s: complex,
    x: float,
    chi: CharacterTable,
    params: QParams,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesResult:
    s = complex(s)
    check_s(s)
    x = check_shift(x)
    families, constant = zeta_families(params, s, x, 0.0)
    return q_series(
        params, x, families, s=s, chi=chi.period_values(), constant=constant, tol=tol, max_terms=max_terms
    )


def l_function(
    s: complex,
    chi: CharacterTable,
    params: QParams,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    allow_principal: bool = False,
) -> SeriesResult:
    """Dirichlet-type L-function with sums from m = 1; chi must be non-principal."""
    s = complex(s)
    check_s(s)
    if is_principal(chi) and not allow_principal:
        raise PrincipalCharacterError("l_function needs a non-principal character")
    families, constant = zeta_families(params, s, 0.0, 0.0)
    return q_series(
        params,
        0.0,
        families,
        s=s,
        chi=chi.period_values(),
        constant=constant,
        tol=tol,
        max_terms=max_terms,
        from_one=True,
    )


def classical_generalized_bernoulli(n: int, x: float, chi: CharacterTable) -> complex:
    """B_{n,chi}(x) = f**(n-1) sum_a chi(a) B_n((x+a)/f)."""
    f = chi.modulus
    total = sum((evaluate(chi, a) * classical_bernoulli_poly(n, (x + a) / f) for a in range(f)), 0j)
    return total * float(f) ** (n - 1)


def special_value_l(k: int, chi: CharacterTable, params: QParams, x: Optional[float] = None) -> complex:
    """-beta_{k,chi}(x)/k (Hurwitz form) or -beta_{k,chi}/k (Dirichlet form)."""
    if not isinstance(k, int) or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    return -chi_beta_closed(k, 0.0 if x is None else check_shift(x), chi, params).value / k
