import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from hqzeta.cli import main
from hqzeta.dirichlet import characters_mod, from_canonical

GOLDEN = Path(__file__).resolve().parent.parent / "docs" / "golden"


def run_cli(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def golden_cases():
    for line in (GOLDEN / "commands.txt").read_text().splitlines():
        if line and not line.startswith("#"):
            name, args = line.split("\t")
            yield pytest.param(name, args.split(), id=name)


@pytest.mark.parametrize("name, args", list(golden_cases()))
def test_golden_files(capsys, name, args):
    code, out, _ = run_cli(capsys, *args)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_console_script_matches_golden():
    out = subprocess.run(
        [sys.executable, "-m", "hqzeta.cli", "eval", "beta", "--n", "1", "--x", "1", "--q", "0.5", "--h", "2"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert out.stdout == (GOLDEN / "eval_beta.csv").read_text()


def test_eval_values(capsys):
    code, out, _ = run_cli(capsys, "eval", "zeta", "--s", "0", "--q", "0.5", "--h", "2")
    (row,) = csv_rows(out)
    assert code == 0
    assert float(row["value_re"]) == pytest.approx(-1 / 3, abs=1e-11)
    assert float(row["tail_bound"]) > 0 and int(row["terms_used"]) > 0
    assert row["route"] == "series"

    code, out, _ = run_cli(capsys, "eval", "beta", "--n", "0", "--x", "0", "--q", "0.5", "--h", "1", "--no-header")
    (row,) = csv_rows(out)
    assert not out.startswith("#")
    assert float(row["value_re"]) == pytest.approx(0.5 / math.log(2), rel=1e-15)


def test_global_flags_before_or_after_subcommand(capsys):
    _, a, _ = run_cli(capsys, "--format", "json", "--tol", "1e-10", "eval", "zeta", "--s", "2", "--q", "0.5", "--h", "2")
    _, b, _ = run_cli(capsys, "eval", "zeta", "--s", "2", "--q", "0.5", "--h", "2", "--format", "json", "--tol", "1e-10")
    assert a == b
    assert json.loads(a)["meta"]["tol"] == 1e-10


def test_complex_s(capsys):
    code, out, _ = run_cli(capsys, "eval", "hurwitz-zeta", "--s", "0.5+1.3i", "--x", "1", "--q", "0.5", "--h", "2")
    (row,) = csv_rows(out)
    assert code == 0
    assert float(row["s_re"]) == 0.5 and float(row["s_im"]) == 1.3
    assert float(row["value_im"]) != 0


def test_eval_exit_codes(capsys):
    code, out, err = run_cli(capsys, "eval", "zeta", "--s", "1", "--q", "0.5", "--h", "2")
    assert code == 2 and out == ""
    assert err.count("\n") == 1 and err.startswith("error: status=pole reason=")
    code, _, err = run_cli(capsys, "eval", "zeta", "--s", "2", "--q", "0.5", "--h", "0.5")
    assert code == 2 and "status=convergence-domain" in err
    code, _, err = run_cli(capsys, "eval", "beta", "--n", "2", "--x", "-1", "--q", "0.5", "--h", "2")
    assert code == 2 and "status=domain" in err
    code, out, _ = run_cli(capsys, "eval", "zeta", "--s", "2", "--q", "0.9999", "--h", "1", "--max-terms", "100")
    assert code == 3
    assert csv_rows(out)[0]["status"] == "not-converged"
    code, _, err = run_cli(capsys, "eval", "L", "--s", "2", "--modulus", "5", "--char", "0", "--q", "0.5", "--h", "2")
    assert code == 2 and "principal-character" in err
    with pytest.raises(SystemExit) as exc:
        main(["eval", "zeta", "--s", "1+i+", "--q", "0.5", "--h", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["eval", "nonsense"])
    assert exc.value.code == 2
    code, _, _ = run_cli(capsys, "eval", "zeta", "--q", "0.5", "--h", "2")
    assert code == 2


def test_table_shape_and_order(capsys):
    code, out, _ = run_cli(capsys, "table", "beta", "--n", "2", "--x", "0.5", "--q", "0.3,0.5,0.9", "--h", "1,2")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 6
    assert [(r["q"], r["h"]) for r in rows] == [(q, h) for q in ("0.29999999999999999", "0.5", "0.90000000000000002") for h in ("1", "2")]
    assert all(r["status"] == "ok" for r in rows)


def test_table_partial_failures(capsys):
    code, out, _ = run_cli(capsys, "table", "zeta", "--s", "2", "--q", "0.5", "--h", "0.5,1,2")
    rows = csv_rows(out)
    assert code == 4
    assert [r["status"] for r in rows] == ["convergence-domain", "ok", "ok"]
    assert rows[0]["value_re"] == ""


def test_table_special_value_columns(capsys):
    code, out, _ = run_cli(capsys, "table", "zeta", "--k", "1..4", "--q", "0.5", "--h", "2")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 4
    for r in rows:
        assert float(r["residual"]) <= 1e-9
        if r["k"] == "1":
            assert float(r["short_residual"]) == pytest.approx(1.0, abs=1e-9)
            assert float(r["value_re"]) == pytest.approx(-1 / 3, abs=1e-9)
        else:
            assert float(r["short_residual"]) <= 1e-9


def test_table_all_characters(capsys):
    code, out, _ = run_cli(
        capsys, "table", "L", "--k", "1,2", "--modulus", "3,5", "--char", "all", "--q", "0.5", "--h", "2"
    )
    rows = csv_rows(out)
    assert code == 4
    assert len(rows) == 2 * (2 + 4)
    principal = [r for r in rows if r["char"] == "0"]
    assert all(r["status"] == "principal-character" for r in principal)
    assert all(float(r["residual"]) <= 1e-9 for r in rows if r["status"] == "ok")


def test_table_json_round_trip(capsys):
    code, out, _ = run_cli(
        capsys, "table", "hurwitz-L", "--s=-1,0.5+2i", "--x", "0.5,2", "--modulus", "4", "--char", "1",
        "--q", "0.7", "--h", "1,3", "--format", "json",
    )
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"meta", "rows", "summary"}
    assert len(doc["rows"]) == 8
    from hqzeta import QParams, character, l_function_hurwitz

    for row in doc["rows"]:
        s = complex(row["s_re"], row["s_im"])
        r = l_function_hurwitz(s, row["x"], character(row["modulus"], row["char"]), QParams(row["q"], row["h"]))
        assert complex(row["value_re"], row["value_im"]) == r.value
        assert row["tail_bound"] == r.tail_bound and row["terms_used"] == r.terms_used


def test_routes(capsys):
    from hqzeta import QParams, beta_closed_form

    expected = beta_closed_form(3, 0.5, QParams(0.5, 2)).value
    for route in ("closed-form", "convolution", "series"):
        code, out, _ = run_cli(capsys, "eval", "beta", "--n", "3", "--x", "0.5", "--q", "0.5", "--h", "2", "--route", route)
        (row,) = csv_rows(out)
        assert code == 0 and row["route"] == route
        assert float(row["value_re"]) == pytest.approx(expected, abs=1e-11)
    values = set()
    for route in ("closed-form", "distribution", "series"):
        code, out, _ = run_cli(
            capsys, "eval", "chi-beta", "--n", "1", "--x", "0", "--modulus", "4", "--char", "1",
            "--q", "0.5", "--h", "2", "--route", route,
        )
        assert code == 0
        values.add(round(float(csv_rows(out)[0]["value_re"]), 10))
    assert values == {round(-6 / 85, 10)}
    code, _, err = run_cli(capsys, "eval", "zeta", "--s", "2", "--q", "0.5", "--h", "2", "--route", "convolution")
    assert code == 2


def test_chars(capsys):
    code, out, _ = run_cli(capsys, "chars", "4")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 2
    assert [r["principal"] for r in rows] == ["true", "false"]
    code, out, _ = run_cli(capsys, "chars", "12", "--format", "json")
    doc = json.loads(out)
    assert [from_canonical(r) for r in doc["rows"]] == characters_mod(12)
    code, _, err = run_cli(capsys, "chars", "0")
    assert code == 2
    code, _, err = run_cli(capsys, "chars", "10001")
    assert code == 2 and "status=cap" in err


def test_verify_selection_and_summary(capsys):
    code, out, _ = run_cli(capsys, "verify", "hurwitz-zeta-special", "--tol", "1e-9")
    assert code == 0
    assert out.rstrip().splitlines()[-1] == "# passed/total=360/360"
    code, out, _ = run_cli(capsys, "verify", "kronecker", "--format", "json", "--no-header")
    doc = json.loads(out)
    assert "meta" not in doc
    assert doc["summary"] == {"passed/total": "135/135"}
    assert all(r["passed"] and r["residual"] <= r["tolerance"] for r in doc["rows"])
    code, _, err = run_cli(capsys, "verify", "bogus")
    assert code == 2 and "unknown suite" in err


def test_verify_reports_failures(capsys):
    code, out, _ = run_cli(capsys, "verify", "kronecker", "--tol", "1e-300")
    rows = csv_rows(out)
    assert code == 1
    assert any(r["passed"] == "false" for r in rows)


def test_verify_erratum_rows(capsys):
    code, out, _ = run_cli(capsys, "verify", "zeta-special")
    rows = csv_rows(out)
    assert code == 0
    erratum = [r for r in rows if r["identity_id"] == "zeta-special-short-erratum"]
    assert len(erratum) == 9
    inst = next(r for r in erratum if r["instance"] == "q=0.5;h=2.0;k=1")
    assert float(inst["lhs_re"]) == pytest.approx(-1.0, abs=1e-9)


def test_config_override(tmp_path, capsys):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("[grid]\nq = 0.5\nh = 2\nkronecker_max = 3\n")
    code, out, _ = run_cli(capsys, "verify", "kronecker", "--config", str(cfg))
    assert code == 0
    assert out.rstrip().endswith("passed/total=3/3")
    bad = tmp_path / "bad.cfg"
    bad.write_text("[grid]\nq = zero\n")
    code, _, err = run_cli(capsys, "verify", "kronecker", "--config", str(bad))
    assert code == 2
    code, _, err = run_cli(capsys, "verify", "kronecker", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2


def test_determinism(capsys):
    args = ["table", "zeta", "--s=-1.5,0.5+1.3i,3", "--q", "0.3,0.9", "--h", "1,2.5", "--format", "json"]
    _, a, _ = run_cli(capsys, *args)
    _, b, _ = run_cli(capsys, *args)
    assert a == b
