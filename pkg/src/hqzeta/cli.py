"""Command-line front end: eval, table, chars and verify."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .bernoulli import Route, beta_closed_form, beta_convolution, beta_series
from .config import Config, load_config, parse_complex
from .dirichlet import character, characters_mod, conductor, euler_phi, is_principal, to_canonical
from .errors import HQError
from .lfunction import (
    chi_beta_closed,
    chi_beta_distribution,
    chi_beta_series,
    l_function,
    l_function_hurwitz,
    special_value_l,
)
from .qkernel import QParams, SeriesResult
from .verify import SUITES, run
from .zeta import ZetaQuery, hurwitz_zeta_q, special_value, zeta_q

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NOT_CONVERGED, EXIT_PARTIAL = 0, 1, 2, 3, 4

TARGETS = ("beta", "chi-beta", "zeta", "hurwitz-zeta", "L", "hurwitz-L")
SERIES_TARGETS = ("zeta", "hurwitz-zeta", "L", "hurwitz-L")
BETA_ROUTES = {"beta": ("closed-form", "convolution", "series"), "chi-beta": ("closed-form", "distribution", "series")}
OUTPUTS = ("value_re", "value_im", "tail_bound", "terms_used", "status")


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError("empty list")
    return out


def _list_type(kind):
    def parse(text):
        try:
            if kind is int:
                return _int_list(text)
            if kind is complex:
                return [parse_complex(p) for p in text.split(",") if p.strip()]
            return [float(p) for p in text.split(",") if p.strip()]
        except (ValueError, HQError) as exc:
            raise argparse.ArgumentTypeError(f"cannot parse {text!r}: {exc}")

    parse.__name__ = f"{kind.__name__}-list"
    return parse


def _char_list(text: str):
    return "all" if text.strip() == "all" else _list_type(int)(text)


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except HQError as exc:
        raise argparse.ArgumentTypeError(str(exc))


# evaluation of a single grid point -------------------------------------------------


def _series_out(res: SeriesResult) -> dict:
    return {
        "value_re": res.value.real,
        "value_im": res.value.imag,
        "tail_bound": res.tail_bound,
        "terms_used": res.terms_used,
        "status": "ok" if res.converged else "not-converged",
    }


def _finite_out(value: complex) -> dict:
    value = complex(value)
    return {"value_re": value.real, "value_im": value.imag, "tail_bound": 0.0, "terms_used": 0, "status": "ok"}


def evaluate_point(target: str, point: dict, route: Optional[str], tol: float, max_terms: int) -> dict:
    """Outputs for one parameter record; raises HQError on invalid input."""
    params = QParams(point["q"], point["h"])
    if target == "beta":
        n, x = point["n"], point["x"]
        if route == "series":
            v = beta_series(n, x, params, tol, max_terms)
            return _series_out(v.series)
        fn = beta_convolution if route == "convolution" else beta_closed_form
        return _finite_out(fn(n, x, params).value)
    if target == "chi-beta":
        chi = character(point["modulus"], point["char"])
        n, x = point["n"], point["x"]
        if route == "series":
            return _series_out(chi_beta_series(n, x, chi, params, tol, max_terms).series)
        fn = chi_beta_distribution if route == "distribution" else chi_beta_closed
        return _finite_out(fn(n, x, chi, params).value)

    k = point.get("k")
    s = complex(1 - k) if k is not None else point["s"]
    extra = {}
    if target == "zeta":
        res = zeta_q(s, params, tol, max_terms)
        if k is not None:
            extra["special"] = special_value(k, params)
            extra["short_special"] = -beta_closed_form(k, 0.0, params).value / k
    elif target == "hurwitz-zeta":
        res = hurwitz_zeta_q(ZetaQuery(s, params, point["x"], tol), max_terms)
        if k is not None:
            extra["special"] = special_value(k, params, point["x"])
    else:
        chi = character(point["modulus"], point["char"])
        if target == "L":
            res = l_function(s, chi, params, tol, max_terms)
            if k is not None:
                extra["special"] = special_value_l(k, chi, params)
        else:
            res = l_function_hurwitz(s, point["x"], chi, params, tol, max_terms)
            if k is not None:
                extra["special"] = special_value_l(k, chi, params, point["x"])
    out = _series_out(res)
    for name, val in extra.items():
        val = complex(val)
        out[f"{name}_re"] = val.real
        out[f"{name}_im"] = val.imag
        out[f"{name.replace('special', 'residual')}"] = abs(res.value - val)
    return out


def _comparison_columns(target: str) -> tuple[str, ...]:
    cols = ("special_re", "special_im", "residual")
    if target == "zeta":
        cols += ("short_special_re", "short_special_im", "short_residual")
    return cols


def _axes(target: str, use_k: bool) -> tuple[str, ...]:
    head = ("n",) if target in BETA_ROUTES else (("k",) if use_k else ("s",))
    mid = ()
    if target in ("beta", "chi-beta", "hurwitz-zeta", "hurwitz-L"):
        mid += ("x",)
    if target in ("chi-beta", "L", "hurwitz-L"):
        mid += ("modulus", "char")
    return head + mid + ("q", "h")


def _points(axes: tuple[str, ...], grids: dict):
    """Lexicographic product in axis order; char 'all' expands per modulus."""

    def rec(i, acc):
        if i == len(axes):
            yield dict(acc)
            return
        name = axes[i]
        values = grids[name]
        if name == "char" and values == "all":
            values = range(euler_phi(acc["modulus"]))
        for v in values:
            acc[name] = v
            yield from rec(i + 1, acc)
        acc.pop(name, None)

    yield from rec(0, {})


# output -----------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    if isinstance(v, complex):
        return "%.17g%+.17gi" % (v.real, v.imag)
    return str(v)


def _json_value(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


class Writer:
    def __init__(self, fmt: str, header: bool, meta: dict, stream=None):
        self.fmt, self.header, self.meta = fmt, header, meta
        self.stream = stream or sys.stdout

    def emit(self, columns: list[str], rows: list[dict], summary: Optional[dict] = None) -> None:
        out = self.stream
        if self.fmt == "json":
            doc = {}
            if self.header:
                doc["meta"] = self.meta
            doc["rows"] = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
            if summary is not None:
                doc["summary"] = summary
            out.write(json.dumps(doc) + "\n")
            return
        if self.header:
            out.write("# " + " ".join(f"{k}={v}" for k, v in self.meta.items()) + "\n")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in columns])
        out.write(buf.getvalue())
        if summary is not None:
            out.write("# " + " ".join(f"{k}={v}" for k, v in summary.items()) + "\n")


def _meta(command: str, **extra) -> dict:
    meta = {"program": "hqzeta", "version": __version__, "command": command}
    meta.update(extra)
    return meta


def _fail(reason: str, status: str = "invalid") -> int:
    print(f"error: status={status} reason={reason}", file=sys.stderr)
    return EXIT_USAGE


# commands ---------------------------------------------------------------------------


def _check_route(target: str, route: Optional[str]) -> Optional[str]:
    if target in BETA_ROUTES:
        route = route or "closed-form"
        if route not in BETA_ROUTES[target]:
            raise HQError(f"route {route!r} is not available for {target}")
        return route
    if route not in (None, "series"):
        raise HQError(f"{target} is only evaluated by series")
    return "series"


def _collect_grids(args, target: str, as_list: bool) -> tuple[tuple[str, ...], dict]:
    use_k = target in SERIES_TARGETS and args.k is not None
    if target in SERIES_TARGETS and (args.k is None) == (args.s is None):
        raise HQError(f"{target} needs exactly one of --s or --k")
    axes = _axes(target, use_k)
    grids = {}
    for name in axes:
        v = getattr(args, name)
        if v is None:
            raise HQError(f"{target} needs --{name}")
        if not as_list:
            v = [v]
        elif v != "all" and len(v) == 0:
            raise HQError(f"--{name} grid is empty")
        grids[name] = v
    return axes, grids


def _row(target, point, route, tol, max_terms) -> dict:
    row = dict(point)
    if "s" in row:
        s = row.pop("s")
        row["s_re"], row["s_im"] = s.real, s.imag
    try:
        row.update(evaluate_point(target, point, route, tol, max_terms))
    except HQError as exc:
        row["status"] = exc.status
        row["reason"] = str(exc)
    return row


def _columns(axes, target, route, compare) -> list[str]:
    cols = []
    for a in axes:
        cols.extend(("s_re", "s_im") if a == "s" else (a,))
    cols.append("route")
    cols.extend(OUTPUTS)
    if compare:
        cols.extend(_comparison_columns(target))
    return cols


def cmd_eval(args, cfg: Config) -> int:
    route = _check_route(args.target, args.route)
    axes, grids = _collect_grids(args, args.target, as_list=False)
    point = next(_points(axes, grids))
    tol, max_terms = _series_settings(args, cfg)
    row = _row(args.target, point, route, tol, max_terms)
    row["route"] = route
    status = row["status"]
    if status not in ("ok", "not-converged"):
        return _fail(row["reason"], status)
    meta = _meta("eval", target=args.target, tol=tol, max_terms=max_terms)
    compare = "k" in axes
    Writer(args.format, args.header, meta).emit(_columns(axes, args.target, route, compare), [row])
    return EXIT_OK if status == "ok" else EXIT_NOT_CONVERGED


def cmd_table(args, cfg: Config) -> int:
    route = _check_route(args.target, args.route)
    axes, grids = _collect_grids(args, args.target, as_list=True)
    tol, max_terms = _series_settings(args, cfg)
    rows = []
    for point in _points(axes, grids):
        row = _row(args.target, point, route, tol, max_terms)
        row["route"] = route
        rows.append(row)
    cols = _columns(axes, args.target, route, "k" in axes)
    if any(r["status"] != "ok" for r in rows):
        cols.append("reason")
    meta = _meta("table", target=args.target, tol=tol, max_terms=max_terms)
    ok = sum(r["status"] == "ok" for r in rows)
    Writer(args.format, args.header, meta).emit(cols, rows, {"ok": ok, "total": len(rows)})
    return EXIT_OK if ok == len(rows) else EXIT_PARTIAL


def cmd_chars(args, cfg: Config) -> int:
    chars = characters_mod(args.modulus)
    rows = []
    for chi in chars:
        canon = to_canonical(chi)
        rows.append(
            {
                "modulus": canon["modulus"],
                "index": canon["index"],
                "principal": is_principal(chi),
                "conductor": conductor(chi),
                "order": chi.order,
                "values": canon["values"],
            }
        )
    cols = ["modulus", "index", "principal", "conductor", "order", "values"]
    if args.format == "csv":
        for r in rows:
            r["values"] = " ".join(f"{a}:{k}/{m}" for a, k, m in r["values"])
    meta = _meta("chars", modulus=args.modulus)
    Writer(args.format, args.header, meta).emit(cols, rows, {"count": len(rows)})
    return EXIT_OK


def _instance_text(inst: dict) -> str:
    return ";".join(f"{k}={v!r}" for k, v in inst.items())


def cmd_verify(args, cfg: Config) -> int:
    unknown = [s for s in args.suites if s != "all" and s not in SUITES]
    if unknown:
        return _fail(f"unknown suite {unknown[0]!r}; known: all, {', '.join(SUITES)}")
    if args.max_terms is not None:
        cfg = dataclasses.replace(cfg, max_terms=args.max_terms)
    reports = list(run(args.suites, cfg, args.tol))
    rows = []
    for r in reports:
        rows.append(
            {
                "identity_id": r.identity_id,
                "instance": r.instance if args.format == "json" else _instance_text(r.instance),
                "lhs_re": r.lhs.real,
                "lhs_im": r.lhs.imag,
                "rhs_re": r.rhs.real,
                "rhs_im": r.rhs.imag,
                "residual": r.residual,
                "tolerance": r.tolerance,
                "passed": r.passed,
            }
        )
    cols = ["identity_id", "instance", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "tolerance", "passed"]
    passed = sum(r.passed for r in reports)
    meta = _meta("verify", suites=",".join(args.suites), config_version=cfg.version)
    summary = {"passed/total": f"{passed}/{len(reports)}"}
    Writer(args.format, args.header, meta).emit(cols, rows, summary)
    return EXIT_OK if passed == len(reports) else EXIT_FAILED


def _series_settings(args, cfg: Config) -> tuple[float, int]:
    tol = cfg.series_tol if args.tol is None else args.tol
    max_terms = cfg.max_terms if args.max_terms is None else args.max_terms
    return tol, max_terms


# parser -----------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    g = parser.add_argument_group("global options")
    g.add_argument("--tol", type=float, default=d, help="series tolerance (verify: residual floor)")
    g.add_argument("--max-terms", type=int, default=d, help="cap on terms per series")
    g.add_argument("--format", choices=("csv", "json"), default=d if suppress else "csv")
    g.add_argument(
        "--no-header", dest="header", action="store_false", default=d if suppress else True,
        help="omit the metadata header",
    )
    g.add_argument("--config", type=Path, default=d, help="grid/tolerance config overriding the defaults")


def _target_flags(p: argparse.ArgumentParser, as_list: bool) -> None:
    p.add_argument("target", choices=TARGETS)
    ints = _list_type(int) if as_list else int
    floats = _list_type(float) if as_list else float
    p.add_argument("--n", type=ints, help="degree (beta targets)")
    p.add_argument("--k", type=ints, help="evaluate at s = 1-k and add special-value columns")
    p.add_argument("--s", type=_list_type(complex) if as_list else _complex_arg, help='e.g. "0.5+1.3i"')
    p.add_argument("--x", type=floats)
    p.add_argument("--q", type=floats)
    p.add_argument("--h", type=floats)
    p.add_argument("--modulus", type=ints)
    p.add_argument("--char", type=_char_list if as_list else int, help="character index" + (" list or 'all'" if as_list else ""))
    p.add_argument("--route", choices=sorted({r.value for r in Route} | {"series"}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hqzeta", description=__doc__)
    parser.add_argument("--version", action="version", version=f"hqzeta {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one value")
    _global_flags(p, suppress=True)
    _target_flags(p, as_list=False)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="sweep a parameter grid")
    _global_flags(p, suppress=True)
    _target_flags(p, as_list=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("chars", help="list the characters mod f")
    _global_flags(p, suppress=True)
    p.add_argument("modulus", type=int)
    p.set_defaults(func=cmd_chars)

    p = sub.add_parser("verify", help="run identity suites")
    _global_flags(p, suppress=True)
    p.add_argument("suites", nargs="*", default=["all"], help=f"all or any of: {', '.join(SUITES)}")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.tol is not None and not args.tol > 0:
            raise HQError("--tol must be positive")
        if args.max_terms is not None and args.max_terms < 1:
            raise HQError("--max-terms must be positive")
        return args.func(args, cfg)
    except HQError as exc:
        return _fail(str(exc), exc.status)


if __name__ == "__main__":
    sys.exit(main())
