"""Loading of the versioned grid/tolerance config (INI syntax)."""
from __future__ import annotations

import configparser
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import HQError


def parse_complex(text: str) -> complex:
    """Parse ``3``, ``-2.5``, ``0.5+1.3i`` or ``1.3i``."""
    t = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    try:
        return complex(t.replace("i", "j")) if "i" in t else complex(float(t))
    except ValueError as exc:
        raise HQError(f"cannot parse complex number {text!r}") from exc


def parse_list(text: str, kind=float) -> list:
    items = [p.strip() for p in text.split(",") if p.strip()]
    if not items:
        raise HQError("empty list")
    try:
        return [kind(p) for p in items]
    except ValueError as exc:
        raise HQError(f"cannot parse list {text!r}") from exc


@dataclass(frozen=True)
class Config:
    version: int
    series_tol: float
    max_terms: int
    q: list
    h: list
    x: list
    zeta_x: list
    s: list
    n_max: int
    k_max: int
    l_k_max: int
    steps_max: int
    kronecker_max: int
    moduli: list
    route_rel: float
    series_abs: float
    identity_abs: float
    kronecker_abs: float
    orthogonality_abs: float
    classical_abs: float
    classical_zeta_abs: float
    monotone_slack: float
    classical_eps: float
    classical_eps_sweep: list
    classical_h: list
    classical_x: list
    classical_n_max: int
    classical_chi_n_max: int
    classical_chi_monotone_n_max: int
    classical_chi_moduli: list
    classical_zeta_tol: float
    classical_zeta_max_terms: int
    orthogonality_max: int


def load_config(path: Optional[Path] = None) -> Config:
    cp = configparser.ConfigParser()
    cp.read_string(resources.files("hqzeta").joinpath("data/default.cfg").read_text())
    if path is not None:
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise HQError(f"cannot read config {path}: {exc}") from exc
    g, t, c = cp["grid"], cp["tolerance"], cp["classical"]
    try:
        return Config(
            version=cp.getint("meta", "version"),
            series_tol=cp.getfloat("series", "tol"),
            max_terms=cp.getint("series", "max_terms"),
            q=parse_list(g["q"]),
            h=parse_list(g["h"]),
            x=parse_list(g["x"]),
            zeta_x=parse_list(g["zeta_x"]),
            s=parse_list(g["s"], parse_complex),
            n_max=g.getint("n_max"),
            k_max=g.getint("k_max"),
            l_k_max=g.getint("l_k_max"),
            steps_max=g.getint("steps_max"),
            kronecker_max=g.getint("kronecker_max"),
            moduli=parse_list(g["moduli"], int),
            route_rel=t.getfloat("route_rel"),
            series_abs=t.getfloat("series_abs"),
            identity_abs=t.getfloat("identity_abs"),
            kronecker_abs=t.getfloat("kronecker_abs"),
            orthogonality_abs=t.getfloat("orthogonality_abs"),
            classical_abs=t.getfloat("classical_abs"),
            classical_zeta_abs=t.getfloat("classical_zeta_abs"),
            monotone_slack=t.getfloat("monotone_slack"),
            classical_eps=c.getfloat("eps"),
            classical_eps_sweep=parse_list(c["eps_sweep"]),
            classical_h=parse_list(c["h"]),
            classical_x=parse_list(c["x"]),
            classical_n_max=c.getint("n_max"),
            classical_chi_n_max=c.getint("chi_n_max"),
            classical_chi_monotone_n_max=c.getint("chi_monotone_n_max"),
            classical_chi_moduli=parse_list(c["chi_moduli"], int),
            classical_zeta_tol=c.getfloat("zeta_tol"),
            classical_zeta_max_terms=c.getint("zeta_max_terms"),
            orthogonality_max=cp.getint("characters", "orthogonality_max"),
        )
    except (KeyError, ValueError, configparser.Error) as exc:
        raise HQError(f"invalid config: {exc}") from exc
