"""Dirichlet characters modulo f with exact root-of-unity values.

(Z/fZ)* is split by CRT into prime-power factors: odd p**e is cyclic with a
primitive root, 4 is generated by -1, and 2**e (e >= 3) is <-1> x <5>.  A
character is a tuple of exponents j_i, one per generator of order o_i, with
chi(g_i) = exp(2 pi i j_i / o_i).  Values are stored as reduced fractions k/m
of a full turn, so multiplicativity and orthogonality are exact in exponent
arithmetic and floats only appear in :func:`evaluate`.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import CapError, DomainError

MAX_MODULUS = 10_000

Value = Optional[tuple[int, int]]


@dataclass(frozen=True)
class CharacterTable:
    """Character mod ``modulus``: ``values[a]`` is None off the units, else (k, m)."""

    modulus: int
    values: tuple[Value, ...]
    label: int = 0

    def __post_init__(self):
        if len(self.values) != self.modulus:
            raise DomainError("character table length must equal its modulus")

    @property
    def order(self) -> int:
        return math.lcm(*(v[1] for v in self.values if v is not None))

    def __call__(self, a: int) -> complex:
        return evaluate(self, a)

    def period_values(self) -> tuple[complex, ...]:
        return tuple(evaluate(self, a) for a in range(self.modulus))


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def _primitive_root(p: int, e: int) -> int:
    prime_factors = [r for r, _ in factorize(p - 1)]
    g = next(g for g in range(2, p) if all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors)) if p > 2 else 1
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _generators(f: int) -> list[tuple[int, int]]:
    """(generator mod f, order) pairs whose product decomposition covers (Z/f)*."""
    gens = []
    for p, e in factorize(f):
        pe = p**e
        rest = f // pe
        local = []
        if p == 2:
            if e == 2:
                local = [(3, 2)]
            elif e >= 3:
                local = [(pe - 1, 2), (5, 2 ** (e - 2))]
        else:
            local = [(_primitive_root(p, e), (p - 1) * p ** (e - 1))]
        for g, order in local:
            # lift: g mod p**e, 1 mod the cofactor
            lifted = g if rest == 1 else (g * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % f
            gens.append((lifted, order))
    return gens


@lru_cache(maxsize=64)
def _log_table(f: int) -> tuple[tuple[tuple[int, int], ...], dict[int, tuple[int, ...]]]:
    gens = _generators(f)
    logs: dict[int, tuple[int, ...]] = {}
    for exps in itertools.product(*(range(o) for _, o in gens)):
        a = 1 % f
        for (g, _), k in zip(gens, exps):
            a = a * pow(g, k, f) % f
        logs[a] = exps
    return tuple(gens), logs


def characters_mod(f: int) -> list[CharacterTable]:
    """All phi(f) characters mod f, principal first, then by exponent tuple."""
    if not isinstance(f, int) or f < 1:
        raise DomainError(f"modulus must be a positive integer, got {f!r}")
    if f > MAX_MODULUS:
        raise CapError(f"modulus {f} exceeds the enumeration cap {MAX_MODULUS}")
    gens, logs = _log_table(f)
    orders = [o for _, o in gens]
    big = math.lcm(*orders) if orders else 1
    weights = [big // o for o in orders]
    units = sorted(logs)
    out = []
    for label, js in enumerate(itertools.product(*(range(o) for o in orders))):
        values: list[Value] = [None] * f
        for a in units:
            k = sum(j * e * w for j, e, w in zip(js, logs[a], weights)) % big
            g = math.gcd(k, big)
            values[a] = (k // g, big // g)
        out.append(CharacterTable(f, tuple(values), label))
    return out


def character(f: int, index: int) -> CharacterTable:
    chars = characters_mod(f)
    if not 0 <= index < len(chars):
        raise DomainError(f"character index {index} out of range for modulus {f} ({len(chars)} characters)")
    return chars[index]


_EXACT = {(0, 1): 1 + 0j, (1, 2): -1 + 0j, (1, 4): 1j, (3, 4): -1j}


def evaluate(chi: CharacterTable, a: int) -> complex:
    v = chi.values[a % chi.modulus]
    if v is None:
        return 0j
    exact = _EXACT.get(v)
    if exact is not None:
        return exact
    return cmath.exp(2j * math.pi * v[0] / v[1])


def is_principal(chi: CharacterTable) -> bool:
    return all(v is None or v[0] == 0 for v in chi.values)


def conductor(chi: CharacterTable) -> int:
    """Smallest d | f such that chi is trivial on units congruent to 1 mod d."""
    f = chi.modulus
    for d in range(1, f + 1):
        if f % d:
            continue
        if all(v is None or v[0] == 0 for a, v in enumerate(chi.values) if a % d == 1 % d):
            return d
    return f


def to_canonical(chi: CharacterTable) -> dict:
    return {
        "modulus": chi.modulus,
        "index": chi.label,
        "values": [[a, v[0], v[1]] for a, v in enumerate(chi.values) if v is not None],
    }


def from_canonical(data: dict) -> CharacterTable:
    f = int(data["modulus"])
    values: list[Value] = [None] * f
    for a, k, m in data["values"]:
        values[a] = (k, m)
    return CharacterTable(f, tuple(values), int(data.get("index", 0)))
