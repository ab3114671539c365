"""Identity-verification suites over the configured grid.

Each suite yields :class:`VerifyReport` records in a fixed order.  Series
based checks use the tolerance max(floor, 10 * tail_bound); exact and
MPFR-backed checks use the configured floor alone.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .bernoulli import (
    BetaNumberCache,
    beta_closed_form,
    beta_convolution,
    beta_series,
    classical_bernoulli_poly,
    difference_identity_sides,
    kronecker_sides,
)
from .config import Config
from .dirichlet import characters_mod, euler_phi, evaluate, is_principal
from .lfunction import (
    chi_beta_closed,
    chi_beta_distribution,
    chi_beta_series,
    classical_generalized_bernoulli,
    l_function,
    l_function_hurwitz,
    special_value_l,
)
from .qkernel import QParams
from .zeta import ZetaQuery, hurwitz_zeta_q, special_value, zeta_q


@dataclass(frozen=True)
class VerifyReport:
    identity_id: str
    instance: dict
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    passed: bool

    @classmethod
    def make(cls, identity_id, instance, lhs, rhs, tolerance, residual=None):
        lhs, rhs = complex(lhs), complex(rhs)
        if residual is None:
            residual = abs(lhs - rhs)
        residual = float(residual)
        return cls(identity_id, dict(instance), lhs, rhs, residual, float(tolerance), residual <= tolerance)


Suite = Callable[[Config, Optional[float]], Iterator[VerifyReport]]


def _floor(cfg_value: float, override: Optional[float]) -> float:
    return cfg_value if override is None else override


def _grid(cfg: Config):
    for q, h in itertools.product(cfg.q, cfg.h):
        yield q, h, QParams(q, h)


def _relative(a: float, b: float) -> float:
    return abs(a - b) / (1.0 + abs(a))


def suite_difference(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    floor = _floor(cfg.identity_abs, tol)
    for q, h, p in _grid(cfg):
        for m in range(cfg.n_max + 1):
            for steps in range(1, cfg.steps_max + 1):
                lhs, rhs, res = difference_identity_sides(m, steps, p)
                yield VerifyReport.make("difference", dict(q=q, h=h, m=m, n_steps=steps), lhs, rhs, floor, res)


def suite_kronecker(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    floor = _floor(cfg.kronecker_abs, tol)
    for q, h, p in _grid(cfg):
        for n in range(1, cfg.kronecker_max + 1):
            lhs, rhs, res = kronecker_sides(n, p)
            yield VerifyReport.make("kronecker", dict(q=q, h=h, n=n), lhs, rhs, floor, res)


def suite_hurwitz_zeta_special(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    floor = _floor(cfg.series_abs, tol)
    for q, h, p in _grid(cfg):
        for k in range(1, cfg.k_max + 1):
            for x in cfg.zeta_x:
                r = hurwitz_zeta_q(ZetaQuery(1 - k, p, x, cfg.series_tol), cfg.max_terms)
                yield VerifyReport.make(
                    "hurwitz-zeta-special",
                    dict(q=q, h=h, k=k, x=x),
                    r.value,
                    special_value(k, p, x),
                    max(floor, 10 * r.tail_bound),
                )


def suite_zeta_special(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    """Special values of the non-shifted zeta.

    ``zeta-special`` checks zeta(1-k|h) = -q**(h-1) beta_k(1)/k for every k.
    ``zeta-special-short`` checks the shorter form -beta_k/k, valid for k >= 2.
    At k = 1 the shorter form is off by exactly one, and
    ``zeta-special-short-erratum`` passes when that offset of -1 between
    zeta(0|h) and -beta_1 is reproduced.
    """
    floor = _floor(cfg.series_abs, tol)
    for q, h, p in _grid(cfg):
        for k in range(1, cfg.k_max + 1):
            r = zeta_q(1 - k, p, cfg.series_tol, cfg.max_terms)
            t = max(floor, 10 * r.tail_bound)
            inst = dict(q=q, h=h, k=k)
            yield VerifyReport.make("zeta-special", inst, r.value, special_value(k, p), t)
            short = -beta_closed_form(k, 0.0, p).value / k
            if k >= 2:
                yield VerifyReport.make("zeta-special-short", inst, r.value, short, t)
            else:
                yield VerifyReport.make("zeta-special-short-erratum", inst, r.value - short, -1.0, t)


def suite_route_agreement(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    rel = _floor(cfg.route_rel, tol)
    floor = _floor(cfg.series_abs, tol)
    for q, h, p in _grid(cfg):
        cache = BetaNumberCache()
        for x in cfg.x:
            for n in range(cfg.n_max + 1):
                inst = dict(q=q, h=h, n=n, x=x)
                closed = beta_closed_form(n, x, p).value
                conv = beta_convolution(n, x, p, cache).value
                yield VerifyReport.make("route-convolution", inst, closed, conv, rel, _relative(closed, conv))
                ser = beta_series(n, x, p, cfg.series_tol, cfg.max_terms)
                yield VerifyReport.make("route-series", inst, closed, ser.value, max(floor, 10 * ser.tail_bound))


def _characters(cfg: Config):
    for f in cfg.moduli:
        for chi in characters_mod(f):
            yield f, chi


def suite_chi_route_agreement(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    rel = _floor(cfg.route_rel, tol)
    floor = _floor(cfg.series_abs, tol)
    for q, h, p in _grid(cfg):
        for f, chi in _characters(cfg):
            for x in cfg.x:
                for n in range(cfg.n_max + 1):
                    inst = dict(q=q, h=h, modulus=f, char=chi.label, n=n, x=x)
                    dist = chi_beta_distribution(n, x, chi, p).value
                    closed = chi_beta_closed(n, x, chi, p).value
                    res = abs(dist - closed) / (1.0 + abs(dist))
                    yield VerifyReport.make("chi-route-closed", inst, dist, closed, rel, res)
                    ser = chi_beta_series(n, x, chi, p, cfg.series_tol, cfg.max_terms)
                    yield VerifyReport.make(
                        "chi-route-series", inst, closed, ser.value, max(floor, 10 * ser.tail_bound)
                    )


def suite_hurwitz_l_special(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    floor = _floor(cfg.series_abs, tol)
    for q, h, p in _grid(cfg):
        for f, chi in _characters(cfg):
            for k in range(1, cfg.l_k_max + 1):
                for x in cfg.zeta_x:
                    r = l_function_hurwitz(1 - k, x, chi, p, cfg.series_tol, cfg.max_terms)
                    yield VerifyReport.make(
                        "hurwitz-l-special",
                        dict(q=q, h=h, modulus=f, char=chi.label, k=k, x=x),
                        r.value,
                        special_value_l(k, chi, p, x),
                        max(floor, 10 * r.tail_bound),
                    )


def suite_l_special(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    floor = _floor(cfg.series_abs, tol)
    for q, h, p in _grid(cfg):
        for f, chi in _characters(cfg):
            if is_principal(chi):
                continue
            for k in range(1, cfg.l_k_max + 1):
                r = l_function(1 - k, chi, p, cfg.series_tol, cfg.max_terms)
                yield VerifyReport.make(
                    "l-special",
                    dict(q=q, h=h, modulus=f, char=chi.label, k=k),
                    r.value,
                    special_value_l(k, chi, p),
                    max(floor, 10 * r.tail_bound),
                )


def _monotone(identity_id, inst, devs, eps, slack):
    for (e0, d0), (e1, d1) in zip(zip(eps, devs), zip(eps[1:], devs[1:])):
        yield VerifyReport.make(
            identity_id, dict(inst, eps_from=e0, eps_to=e1), d1, d0, slack, max(0.0, d1 - d0)
        )


def suite_classical_limit(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    """q -> 1 limits.  Thresholds here are approximation bounds, so --tol does not override them."""
    eps = sorted(cfg.classical_eps_sweep, reverse=True)
    slack = cfg.monotone_slack
    q0 = 1.0 - cfg.classical_eps
    for h in cfg.classical_h:
        for x in cfg.classical_x:
            for n in range(cfg.classical_n_max + 1):
                inst = dict(h=h, n=n, x=x)
                exact = classical_bernoulli_poly(n, x)
                v = beta_closed_form(n, x, QParams(q0, h)).value
                yield VerifyReport.make("classical-beta", dict(inst, q=q0), v, exact, cfg.classical_abs)
                devs = [abs(beta_closed_form(n, x, QParams(1.0 - e, h)).value - exact) for e in eps]
                yield from _monotone("classical-beta-monotone", inst, devs, eps, slack)
    for f in cfg.classical_chi_moduli:
        for chi in characters_mod(f):
            for n in range(cfg.classical_chi_monotone_n_max + 1):
                inst = dict(modulus=f, char=chi.label, n=n, h=1.0, x=0.0)
                exact = classical_generalized_bernoulli(n, 0.0, chi)
                if n <= cfg.classical_chi_n_max:
                    v = chi_beta_closed(n, 0.0, chi, QParams(q0, 1.0)).value
                    yield VerifyReport.make("classical-chi-beta", dict(inst, q=q0), v, exact, cfg.classical_abs)
                # the gap grows like eps * f**n, so higher degrees only get the trend check
                devs = [abs(chi_beta_closed(n, 0.0, chi, QParams(1.0 - e, 1.0)).value - exact) for e in eps]
                yield from _monotone("classical-chi-beta-monotone", inst, devs, eps, slack)
    for k, exact in ((2, math.pi**2 / 6), (4, math.pi**4 / 90)):
        inst = dict(s=k, h=1.0)
        devs = []
        for e in eps:
            r = zeta_q(k, QParams(1.0 - e, 1.0), cfg.classical_zeta_tol, cfg.classical_zeta_max_terms)
            devs.append(abs(r.value - exact))
            if e == cfg.classical_eps:
                yield VerifyReport.make("classical-zeta", dict(inst, q=1.0 - e), r.value, exact, cfg.classical_zeta_abs)
        yield from _monotone("classical-zeta-monotone", inst, devs, eps, slack)


def suite_orthogonality(cfg: Config, tol: Optional[float]) -> Iterator[VerifyReport]:
    floor = _floor(cfg.orthogonality_abs, tol)
    for f in range(1, cfg.orthogonality_max + 1):
        chars = characters_mod(f)
        phi = euler_phi(f)
        yield VerifyReport.make("character-count", dict(modulus=f), len(chars), phi, 0.0)
        for chi in chars:
            total = sum((evaluate(chi, a) for a in range(f)), 0j)
            expected = phi if is_principal(chi) else 0
            yield VerifyReport.make("orthogonality-rows", dict(modulus=f, char=chi.label), total, expected, floor)
        for a in range(f):
            if math.gcd(a, f) != 1:
                continue
            total = sum((evaluate(chi, a) for chi in chars), 0j)
            expected = phi if a % f == 1 % f else 0
            yield VerifyReport.make("orthogonality-columns", dict(modulus=f, a=a), total, expected, floor)


SUITES: dict[str, Suite] = {
    "difference": suite_difference,
    "kronecker": suite_kronecker,
    "hurwitz-zeta-special": suite_hurwitz_zeta_special,
    "zeta-special": suite_zeta_special,
    "route-agreement": suite_route_agreement,
    "chi-route-agreement": suite_chi_route_agreement,
    "hurwitz-l-special": suite_hurwitz_l_special,
    "l-special": suite_l_special,
    "classical-limit": suite_classical_limit,
    "orthogonality": suite_orthogonality,
}


def run(names: list[str], cfg: Config, tol: Optional[float] = None) -> Iterator[VerifyReport]:
    """Run suites in the given order; ``all`` expands to every suite."""
    selected = []
    for name in names:
        if name == "all":
            selected.extend(SUITES)
        elif name in SUITES:
            selected.append(name)
        else:
            raise KeyError(name)
    for name in dict.fromkeys(selected):
        yield from SUITES[name](cfg, tol)
