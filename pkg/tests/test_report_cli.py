import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from euclidmin.cli import main, run
from euclidmin.exact import ExactConstant
from euclidmin.field import FieldDescriptor
from euclidmin.report import (
    ReportOptions,
    field_report,
    field_report_to_markdown,
    reproduce_bound_table,
    table_to_csv,
    to_json,
    truncated_decimal,
)

E = ExactConstant


@pytest.mark.parametrize("c, digits, cut", [
    (E.from_rational(Fraction(1, 6)), "0.16666", True),
    (E.from_rational(Fraction(1, 512)), "0.001953125", False),
    (E.from_rational(Fraction(1, 2)), "0.5", False),
    (E.from_rational(3), "3", False),
    (E.power(2, Fraction(-9, 2)), "0.04419", True),
    (E.power(2, Fraction(-1, 2)) * E.power(5, -5), "0.00022", True),
    # 2/3 would round to 0.66667
    (E.from_rational(Fraction(2, 3)), "0.66666", True),
])
def test_truncated_decimal(c, digits, cut):
    assert truncated_decimal(c) == (digits, cut)


def test_table_rows():
    rows = {(r.n, r.s, r.a_set): r for r in reproduce_bound_table(5)}
    r = rows[(3, 1, (1,))]
    assert r.coefficient_exact == "2^(-2)*3^(-3/2)" and r.coefficient_decimal == "0.04811" and r.disc_exponent == "1"
    r = rows[(5, 2, (1,))]
    assert r.coefficient_exact == "2^(-1/2)*5^(-5)" and r.coefficient_decimal == "0.00022" and r.disc_exponent == "3/2"
    r = rows[(4, 1, (2,))]
    assert r.coefficient_exact == "2^(-9/2)" and r.coefficient_decimal == "0.04419"
    assert rows[(5, 0, (1, 2, 3, 4, 5))].a_display() == "1, 2, 3, 4 or 5"
    assert rows[(2, 0, (1, 2))].note


def test_table_small_n_max():
    assert [(r.n, r.s) for r in reproduce_bound_table(1)] == [(1, 0)]


def test_table_csv_columns():
    text = table_to_csv(reproduce_bound_table(5))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["n", "s", "a_set", "coeff_exact", "coeff_decimal", "disc_exponent"]
    assert rows[3]["a_set"] == "1,2,3" and rows[3]["coeff_decimal"] == "0.17677…"


def test_field_report_gaussian():
    rep = field_report("x^2+1")
    assert rep["schema_version"] == 1
    assert rep["best_bound"]["coefficient_exact"] == "2^(-1)*3^(-1)"
    assert rep["best_bound"]["value_upper"].startswith("0.666666")
    assert float(rep["lattice"]["M_s"]["lower"]) >= 0.5
    assert rep["passed"]
    assert json.loads(to_json(rep)) == rep


def test_field_report_real_quadratic():
    rep = field_report("x^2 - 2", options=ReportOptions(targets=(("1/2", "1/2"),)))
    assert float(rep["best_bound"]["value_upper"]) == pytest.approx(0.5 / 3**0.5 * 8**0.5, rel=1e-12)
    assert float(rep["lattice"]["M_s"]["lower"]) >= 0.25
    assert "## Checks" in field_report_to_markdown(rep)


def test_field_report_descriptor_only():
    rep = field_report(FieldDescriptor(24, 0, 12, 10**30))
    assert rep["lattice"] == {"skipped": "no polynomial"}
    assert rep["hermite"]["provenance"] == "exact"
    assert len(rep["bounds"]) == 2 * 12 + 2
    assert json.loads(to_json(rep)) == rep


def test_field_report_disc_override_skips_det_check():
    rep = field_report("x^2 - 5", disc_override=5)
    assert rep["descriptor"]["disc_source"] == "override"
    assert all(c["name"] != "det_identity" for c in rep["checks"])


def test_seed_recorded():
    rep = field_report("x^3 - x - 1", options=ReportOptions(seed=5, random_targets=50, grid_bits=3))
    assert rep["seed"] == 5 and rep["lattice"]["M_s"]["params"]["seed"] == 5


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_cli_table_formats():
    code, text = cli("table", "--n-max", "5", "--format", "json")
    assert code == 0
    data = json.loads(text)
    assert data["schema_version"] == 1 and len(data["rows"]) == 20
    assert cli("table", "--format", "markdown")[1].count("\n") == 22


def test_cli_scan_and_hermite():
    data = json.loads(cli("scan", "--format", "json")[1])
    assert data["dimensions"] == list(range(2, 44))
    data = json.loads(cli("hermite", "2", "10", "--format", "json")[1])
    assert data["rows"][0]["exact"] == "2^(1)*3^(-1/2)"
    assert data["rows"][1]["exact"] is None


def test_cli_bound_and_lattice():
    data = json.loads(cli("bound", "--signature", "0", "1", "--disc", "4", "--format", "json")[1])
    assert data["best_bound"]["a"] == 1
    code, text = cli("lattice", "--poly", "x^2+1", "--target", "1/2,1/2", "--format", "json")
    assert code == 0 and json.loads(text)["lattice"]["M_s"]["rigorous"]
    code, text = cli("bound", "--poly", "x^3-x-1", "--format", "csv")
    assert text.startswith("formula,a,")


@pytest.mark.parametrize("argv, code", [
    (["bound", "--poly", "2x^2+1"], 2),
    (["bound", "--poly", "x^2-2x+1"], 2),
    (["bound", "--signature", "1", "1"], 2),
    (["bound"], 2),
    (["table", "--n-max", "0"], 2),
    (["lattice", "--poly", "x^3-x-1", "--node-budget", "3"], 5),
    (["scan", "--precision-bits", "4096"], 2),
])
def test_cli_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert "error:" in capsys.readouterr().err


def test_cli_verify_json():
    code, text = cli("verify", "--poly", "x^2+1", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["passed"]
    assert {c["name"] for c in data["claims"]} >= {"hermite_consistency", "blichfeldt_scan"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "euclidmin", "table", "--n-max", "2", "--format", "csv"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == "n,s,a_set,coeff_exact,coeff_decimal,disc_exponent"
