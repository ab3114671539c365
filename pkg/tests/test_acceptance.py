"""Acceptance criteria.

Each test evaluates one criterion over its full grid, prints a single
``criterion N [PASS|FAIL] ...`` line and then asserts.  Running this file as
a script prints the same lines and exits non-zero if any criterion fails.
"""
from __future__ import annotations

import contextlib
import io
import math
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

import pytest

from hqzeta import (
    BetaNumberCache,
    QParams,
    beta_closed_form,
    beta_convolution,
    beta_series,
    characters_mod,
    chi_beta_closed,
    chi_beta_distribution,
    chi_beta_series,
    classical_bernoulli_poly,
    classical_generalized_bernoulli,
    difference_identity_sides,
    euler_phi,
    evaluate,
    hurwitz_zeta_q,
    is_principal,
    kronecker_sides,
    l_function,
    l_function_hurwitz,
    special_value,
    special_value_l,
    zeta_q,
)
from hqzeta.cli import main as cli_main
from hqzeta.zeta import ZetaQuery

Q_GRID = (0.3, 0.5, 0.9)
H_GRID = (1.0, 2.0, 3.5)
X_GRID = (0.0, 0.5, 1.0, 2.7)
SHIFTS = (0.5, 1.0, 2.0, 2.7)
MODULI = (1, 3, 4, 5, 8)
GOLDEN = Path(__file__).resolve().parent.parent / "docs" / "golden"


@dataclass
class Tally:
    """Counts checks and keeps the worst residual/tolerance ratio."""

    checks: int = 0
    failures: list = field(default_factory=list)
    worst: float = 0.0

    def check(self, residual: float, tol: float, label) -> None:
        self.checks += 1
        ratio = residual / tol if tol > 0 else (0.0 if residual == 0 else math.inf)
        self.worst = max(self.worst, ratio)
        if not residual <= tol:
            self.failures.append((label, residual, tol))

    def require(self, ok: bool, label) -> None:
        self.checks += 1
        if not ok:
            self.failures.append((label, None, None))

    @property
    def ok(self) -> bool:
        return not self.failures and self.checks > 0

    def summary(self) -> str:
        text = f"{self.checks - len(self.failures)}/{self.checks} checks, worst residual/tol {self.worst:.3g}"
        if self.failures:
            text += f"; first failure {self.failures[0]}"
        return text


def _grid():
    for q in Q_GRID:
        for h in H_GRID:
            yield QParams(q, h)


def _all_characters(moduli=MODULI):
    for f in moduli:
        yield from characters_mod(f)


def criterion_1() -> Tally:
    t = Tally()
    for p in _grid():
        cache = BetaNumberCache()
        for x in X_GRID:
            for n in range(21):
                closed = beta_closed_form(n, x, p).value
                conv = beta_convolution(n, x, p, cache).value
                t.check(abs(closed - conv) / (1 + abs(closed)), 1e-10, ("convolution", p, n, x))
                ser = beta_series(n, x, p)
                t.check(abs(closed - ser.value), max(1e-9, 10 * ser.tail_bound), ("series", p, n, x))
    return t


def criterion_2() -> Tally:
    t = Tally()
    for p in _grid():
        for m in range(11):
            for steps in range(1, 9):
                t.check(difference_identity_sides(m, steps, p)[2], 1e-10, ("difference", p, m, steps))
        for n in range(1, 16):
            lhs, rhs, res = kronecker_sides(n, p)
            t.require(rhs == (1.0 if n == 1 else 0.0), ("delta", n))
            t.check(res, 1e-11, ("kronecker", p, n))
    return t


def criterion_3() -> Tally:
    t = Tally()
    for p in _grid():
        for k in range(1, 7):
            for x in SHIFTS:
                r = hurwitz_zeta_q(ZetaQuery(1 - k, p, x))
                t.check(abs(r.value - special_value(k, p, x)), max(1e-9, 10 * r.tail_bound), (p, k, x))
    r = hurwitz_zeta_q(ZetaQuery(0, QParams(0.5, 2.0), 1.0))
    t.check(abs(r.value + 2 / 3), max(1e-9, 10 * r.tail_bound), "instance -2/3")
    return t


def criterion_4() -> Tally:
    t = Tally()
    for p in _grid():
        for k in range(1, 11):
            r = zeta_q(1 - k, p)
            beta_k = beta_closed_form(k, 0.0, p).value
            if k >= 2:
                t.check(abs(r.value + beta_k / k), 1e-9, ("short form", p, k))
            else:
                t.check(abs(r.value - special_value(1, p)), 1e-9, ("shifted form", p))
                t.check(abs(r.value + (beta_k + 1)), 1e-9, ("beta_1 + 1", p))
                # the literal short form must be off by one
                t.require(abs(r.value + beta_k) > 0.5, ("literal short form fails", p))
    p = QParams(0.5, 2.0)
    r = zeta_q(0, p)
    t.check(abs(r.value + 1 / 3), 1e-9, "instance -1/3")
    t.check(abs(-beta_closed_form(1, 0.0, p).value - 2 / 3), 1e-12, "literal instance +2/3")
    return t


def criterion_5() -> Tally:
    t = Tally()
    for p in _grid():
        for chi in _all_characters():
            for k in range(1, 6):
                for x in SHIFTS:
                    r = l_function_hurwitz(1 - k, x, chi, p)
                    t.check(abs(r.value - special_value_l(k, chi, p, x)), max(1e-9, 10 * r.tail_bound), (p, chi.modulus, chi.label, k, x))
                if not is_principal(chi):
                    r = l_function(1 - k, chi, p)
                    t.check(abs(r.value - special_value_l(k, chi, p)), max(1e-9, 10 * r.tail_bound), (p, chi.modulus, chi.label, k))
    return t


def criterion_6() -> Tally:
    t = Tally()
    for p in _grid():
        for chi in _all_characters():
            for x in X_GRID:
                for n in range(13):
                    a = chi_beta_distribution(n, x, chi, p).value
                    b = chi_beta_closed(n, x, chi, p).value
                    t.check(abs(a - b) / (1 + abs(a)), 1e-10, ("closed", p, chi.modulus, chi.label, n, x))
                    r = chi_beta_series(n, x, chi, p)
                    t.check(abs(r.value - b), max(1e-9, 10 * r.tail_bound), ("series", p, chi.modulus, chi.label, n, x))
    return t


def criterion_7() -> Tally:
    t = Tally()
    eps_sweep = (1e-3, 1e-4, 1e-5)
    q = 1 - 1e-4
    for h in (1.0, 2.0, 5.0):
        for x in (0.0, 0.5, 1.0):
            for n in range(9):
                exact = classical_bernoulli_poly(n, x)
                t.check(abs(beta_closed_form(n, x, QParams(q, h)).value - exact), 1e-2, ("beta", h, x, n))
                devs = [abs(beta_closed_form(n, x, QParams(1 - e, h)).value - exact) for e in eps_sweep]
                t.require(devs[1] <= devs[0] + 1e-14 and devs[2] <= devs[1] + 1e-14, ("beta monotone", h, x, n, devs))
        chi4 = characters_mod(4)[1]
        exact = classical_generalized_bernoulli(1, 0.0, chi4)
        t.check(abs(exact + 0.5), 1e-15, "classical B_1,chi4")
        t.check(abs(chi_beta_distribution(1, 0.0, chi4, QParams(q, h)).value + 0.5), 1e-2, ("chi4", h))
        devs = [abs(chi_beta_distribution(1, 0.0, chi4, QParams(1 - e, h)).value + 0.5) for e in eps_sweep]
        t.require(devs[1] <= devs[0] and devs[2] <= devs[1], ("chi4 monotone", h, devs))
    for s, exact in ((2, math.pi**2 / 6), (4, math.pi**4 / 90)):
        devs = []
        for e in eps_sweep:
            r = zeta_q(s, QParams(1 - e, 1.0), tol=1e-10, max_terms=10**7)
            t.require(r.converged, ("zeta converged", s, e))
            devs.append(abs(r.value - exact))
        t.check(devs[1], 2e-3, ("zeta", s))
        t.require(devs[1] <= devs[0] and devs[2] <= devs[1], ("zeta monotone", s, devs))
    return t


def criterion_8() -> Tally:
    t = Tally()
    for f in range(1, 201):
        phi = sum(1 for a in range(1, f + 1) if math.gcd(a, f) == 1)
        t.require(len(characters_mod(f)) == phi == euler_phi(f), ("count", f))
    rng = random.Random(8)
    for f in range(1, 51):
        chars = characters_mod(f)
        for chi in chars:
            total = sum(evaluate(chi, a) for a in range(f))
            t.check(abs(total - (euler_phi(f) if is_principal(chi) else 0)), 1e-12, ("orthogonality", f, chi.label))
            worst = 0.0
            for _ in range(1000):
                a, b = rng.randrange(4 * f), rng.randrange(4 * f)
                worst = max(worst, abs(evaluate(chi, a * b) - evaluate(chi, a) * evaluate(chi, b)))
            t.check(worst, 1e-13, ("multiplicativity", f, chi.label))
    return t


def _random_series(rng: random.Random):
    q = rng.uniform(0.2, 0.95)
    h = 1.0 if rng.random() < 0.3 else rng.uniform(1.0, 4.0)
    p = QParams(q, h)
    x = rng.uniform(0.1, 3.0)
    s = complex(rng.uniform(-3.0, 4.0), rng.choice((0.0, rng.uniform(-2.0, 2.0))))
    if abs(s - 1) < 0.1:
        s += 0.5
    chi = rng.choice([c for c in _all_characters((3, 4, 5, 8)) if not is_principal(c)])
    n = rng.randrange(0, 9)
    kind = rng.randrange(6)
    if kind == 0:
        return "beta", lambda tol: beta_series(n, x, p, tol).series
    if kind == 1:
        return "chi-beta", lambda tol: chi_beta_series(n, x, chi, p, tol).series
    if kind == 2:
        return "zeta", lambda tol: zeta_q(s, p, tol)
    if kind == 3:
        return "hurwitz-zeta", lambda tol: hurwitz_zeta_q(ZetaQuery(s, p, x, tol))
    if kind == 4:
        return "L", lambda tol: l_function(s, chi, p, tol)
    return "hurwitz-L", lambda tol: l_function_hurwitz(s, x, chi, p, tol)


def criterion_9() -> Tally:
    t = Tally()
    rng = random.Random(9)
    for i in range(100):
        kind, fn = _random_series(rng)
        tol = rng.choice((1e-6, 1e-8, 1e-10))
        coarse = fn(tol)
        fine = fn(tol / 100)
        change = abs(coarse.value - fine.value)
        t.require(coarse.converged and fine.converged, (i, kind, "converged"))
        t.require(change < coarse.tail_bound or change == 0.0, (i, kind, change, coarse.tail_bound))
    return t


def _run_cli(args):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = cli_main(args)
    return code, out.getvalue()


def criterion_10() -> Tally:
    t = Tally()
    for line in (GOLDEN / "commands.txt").read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        name, args = line.split("\t")
        code, out = _run_cli(args.split())
        t.require(code == 0, (name, "exit code", code))
        t.require(out == (GOLDEN / name).read_text(), (name, "golden mismatch"))
    code, out = _run_cli(["verify", "all", "--no-header"])
    last = out.rstrip().splitlines()[-1]
    passed, total = last.split("=")[1].split("/")
    t.require(code == 0, ("verify all exit code", code))
    t.require(passed == total and int(total) > 0, ("verify all summary", last))
    return t


CRITERIA = {
    1: ("route agreement (beta)", criterion_1),
    2: ("difference identity and Kronecker check", criterion_2),
    3: ("Hurwitz zeta special values", criterion_3),
    4: ("zeta special values and k = 1 discrepancy", criterion_4),
    5: ("L-function special values", criterion_5),
    6: ("character-twisted route agreement", criterion_6),
    7: ("classical limits", criterion_7),
    8: ("character algebra", criterion_8),
    9: ("tail-bound soundness", criterion_9),
    10: ("CLI contract", criterion_10),
}


def _line(number: int, tally: Tally) -> str:
    title = CRITERIA[number][0]
    return f"criterion {number:>2} [{'PASS' if tally.ok else 'FAIL'}] {title}: {tally.summary()}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    tally = CRITERIA[number][1]()
    with capsys.disabled():
        print("\n" + _line(number, tally))
    assert tally.ok, tally.summary()


if __name__ == "__main__":
    failed = 0
    for number, (_, fn) in sorted(CRITERIA.items()):
        tally = fn()
        failed += not tally.ok
        print(_line(number, tally), flush=True)
    sys.exit(1 if failed else 0)
