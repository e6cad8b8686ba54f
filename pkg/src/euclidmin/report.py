"""Tables, scans, whole-field reports and their serializations."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Union

import mpmath

from . import intervals as ivl
from .bounds import BoundResult, all_bounds, best_bound, bfbj_bound, theorem_bound
from .exact import ExactConstant
from .field import FieldDescriptor, IntPolynomial, descriptor_from_polynomial
from .hermite import (
    KNOWN_DIMENSIONS,
    best_hermite_upper,
    blichfeldt_below_sqrt,
    blichfeldt_constant,
    hermite_estimate,
    hermite_exact,
    wen_bounds,
)

SCHEMA_VERSION = 1
DECIMAL_PLACES = 5

# rows whose reference a-column reads 0, although a >= 1 is required
_A_ZERO_ROWS = {(1, 0), (2, 0), (2, 1)}


# -- decimals ----------------------------------------------------------------------


def _terminates(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def truncated_decimal(c: ExactConstant, places: int = DECIMAL_PLACES) -> tuple[str, bool]:
    """``(digits, truncated)``: the exact decimal when it terminates, otherwise
    the value cut (not rounded) to ``places`` decimals."""
    if c.is_rational and _terminates(c.as_fraction()):
        q = c.as_fraction()
        scale = 0
        while (q * 10**scale).denominator != 1:
            scale += 1
        whole = q * 10**scale
        return _fixed(int(whole), scale), False
    scaled = c * ExactConstant.power(10, places)

    def test(ctx):
        lo, hi = ivl.endpoints(scaled.interval(ctx.prec))
        flo, fhi = int(mpmath.floor(lo)), int(mpmath.floor(hi))
        return flo if flo == fhi else None

    digits = ivl.decide(test)
    return _fixed(digits, places), True


def _fixed(units: int, scale: int) -> str:
    sign = "-" if units < 0 else ""
    text = str(abs(units)).rjust(scale + 1, "0")
    if scale == 0:
        return sign + text
    return f"{sign}{text[:-scale]}.{text[-scale:]}"


# -- the bound table ------------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    n: int
    s: int
    a_set: tuple[int, ...]
    coefficient_exact: str
    coefficient_decimal: str
    truncated: bool
    disc_exponent: str
    note: str = ""

    @property
    def decimal_display(self) -> str:
        return self.coefficient_decimal + ("…" if self.truncated else "")

    def a_display(self) -> str:
        if len(self.a_set) == 1:
            return str(self.a_set[0])
        return ", ".join(map(str, self.a_set[:-1])) + f" or {self.a_set[-1]}"

    def as_dict(self) -> dict:
        out = asdict(self)
        out["a_set"] = list(self.a_set)
        return out


def reproduce_bound_table(n_max: int = 5) -> list[ReportRow]:
    """One row per ``(n, s)`` and group of ``a`` values giving the same bound.

    Only degrees with a known exact Hermite constant are tabulated.
    """
    rows = []
    for n in range(1, n_max + 1):
        g = best_hermite_upper(n)
        if not g.is_exact:
            continue
        for s in range(n // 2 + 1):
            desc = FieldDescriptor(n, n - 2 * s, s, 1)
            groups: list[tuple[ExactConstant, Fraction, list[int]]] = []
            for a in range(1, desc.r + s + 1):
                b = theorem_bound(desc, a, g)
                for coeff, exp, members in groups:
                    if coeff == b.coefficient and exp == b.disc_exponent:
                        members.append(a)
                        break
                else:
                    groups.append((b.coefficient, b.disc_exponent, [a]))
            for coeff, exp, members in groups:
                digits, cut = truncated_decimal(coeff)
                note = "reference a-column reads 0; listed a values are the admissible ones" if (n, s) in _A_ZERO_ROWS else ""
                rows.append(ReportRow(n, s, tuple(members), str(coeff), digits, cut, str(exp), note))
    return rows


# -- global claims ------------------------------------------------------------------------


def blichfeldt_scan(start: int = 2, max_prec: int = ivl.MAX_PREC) -> list[int]:
    """Every ``n >= start`` with Blichfeldt's bound below ``sqrt(n)``, up to the first failure."""
    out = []
    n = start
    while blichfeldt_below_sqrt(n, max_prec=max_prec):
        out.append(n)
        n += 1
    return out


@dataclass
class ClaimResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def hermite_consistency() -> ClaimResult:
    """Every exact Hermite constant sits below Blichfeldt's bound and both Wen bounds."""
    failures = []
    for n in KNOWN_DIMENSIONS:
        exact = hermite_exact(n)
        w1, w2 = wen_bounds(n)
        for label, bound in (("blichfeldt", blichfeldt_constant(n)), ("wen1", w1), ("wen2", w2)):
            if not exact <= bound:
                failures.append(f"n={n} {label}")
    return ClaimResult("hermite_consistency", not failures, {"dimensions": list(KNOWN_DIMENSIONS), "failures": failures})


def improvement_grid(n_max: int = 10) -> ClaimResult:
    """``theorem <= bfbj`` coefficient-wise, with equality exactly when ``r = 0``."""
    failures, cases = [], 0
    for n in range(1, n_max + 1):
        g = best_hermite_upper(n)
        for s in range(n // 2 + 1):
            desc = FieldDescriptor(n, n - 2 * s, s, 1)
            for a in range(1, desc.r + s + 1):
                cases += 1
                cmp = theorem_bound(desc, a, g).coefficient.compare(bfbj_bound(desc, a, g).coefficient)
                ok = cmp == 0 if desc.r == 0 else cmp < 0
                if not ok:
                    failures.append([n, desc.r, s, a])
    return ClaimResult("improvement_factor", not failures, {"cases": cases, "failures": failures})


def a_equals_s_beats_bayer_fluckiger(n_min: int = 2, n_max: int = 8) -> ClaimResult:
    """With exact ``gamma_n``, the ``a = s`` coefficient is strictly below ``2^-n``."""
    from .bounds import a_equals_s_bound, bayer_fluckiger_bound

    failures, cases = [], 0
    for n in range(n_min, n_max + 1):
        g = hermite_estimate(n, "exact")
        for s in range(1, n // 2 + 1):
            desc = FieldDescriptor(n, n - 2 * s, s, 1)
            cases += 1
            if not a_equals_s_bound(desc, g).coefficient < bayer_fluckiger_bound(desc).coefficient:
                failures.append([n, s])
    return ClaimResult("a_equals_s_vs_bayer_fluckiger", not failures, {"cases": cases, "failures": failures})


def hermite_summary(n: int) -> dict:
    exact = hermite_exact(n)
    w1, w2 = wen_bounds(n)
    best = best_hermite_upper(n)
    return {
        "n": n,
        "exact": None if exact is None else str(exact),
        "blichfeldt": str(blichfeldt_constant(n)),
        "blichfeldt_upper": ivl.to_decimal_string(ivl.upper(blichfeldt_constant(n).interval()), 64),
        "wen1": str(w1),
        "wen2": str(w2),
        "best": str(best.value),
        "best_provenance": best.provenance,
        "best_upper": ivl.to_decimal_string(best.upper(), 64),
    }


# -- field reports --------------------------------------------------------------------------


def _bound_dict(b: BoundResult, disc_value: int) -> dict:
    coeff = b.coefficient
    digits, cut = truncated_decimal(coeff) if coeff.pi_exp == 0 else (None, True)
    value = b.interval(disc_value)
    return {
        "formula": b.formula,
        "a": b.a_param,
        "coefficient_exact": str(coeff),
        "coefficient_decimal": digits,
        "hermite_provenance": None if b.hermite is None else b.hermite.provenance,
        "disc_exponent": str(b.disc_exponent),
        "value_upper": ivl.to_decimal_string(ivl.upper(value), 64),
    }


def _estimate_dict(e) -> dict:
    return {
        "kind": e.kind,
        "lower": ivl.to_decimal_string(e.lower, 64),
        "upper": ivl.to_decimal_string(e.upper, 64),
        "rigorous": e.rigorous,
        "params": {k: (v if isinstance(v, (int, str, list, bool)) or v is None else float(v)) for k, v in e.params.items()},
    }


@dataclass
class ReportOptions:
    precision_bits: int = ivl.DEFAULT_PREC
    seed: int = 0
    node_budget: int = 10**8
    coeff_box: Optional[int] = None
    grid_bits: Optional[int] = None
    targets: tuple = ()
    random_targets: int = 0
    max_lattice_dim: int = 8


def _default_box(n: int) -> int:
    box = 3
    while box > 1 and (2 * box + 1) ** n > 2 * 10**6:
        box -= 1
    return box


def field_report(
    source: Union[str, IntPolynomial, FieldDescriptor],
    disc_override: Optional[int] = None,
    options: Optional[ReportOptions] = None,
) -> dict:
    """Descriptor, every bound, the best bound and (given a polynomial) the lattice stage."""
    from .lattice import (
        TargetSpec,
        det_identity_check,
        homogeneous_minimum_estimate,
        inhomogeneous_minimum_lower_estimate,
        lemma_M_mun_check,
        lemma_m_mu1_check,
        minkowski_basis,
        minkowski_product_check,
        successive_minima,
    )
    from .lattice.minima import _le_check

    opts = options or ReportOptions()
    if isinstance(source, str):
        source = IntPolynomial.parse(source)
    if isinstance(source, IntPolynomial):
        desc = descriptor_from_polynomial(source)
        disc_source = "equation_order"
    else:
        desc = source
        disc_source = "supplied"
    disc = disc_override if disc_override is not None else desc.disc_abs
    if disc_override is not None:
        disc_source = "override"

    g = best_hermite_upper(desc.n)
    bounds = all_bounds(desc, g)
    best = best_bound(desc, disc, g)
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "input": {
            "polynomial": None if desc.defining_poly is None else str(desc.defining_poly),
            "coefficients": None if desc.defining_poly is None else list(desc.defining_poly.coeffs),
        },
        "descriptor": {"n": desc.n, "r": desc.r, "s": desc.s, "disc_abs": disc, "disc_source": disc_source},
        "hermite": {"n": desc.n, "value": str(g.value), "provenance": g.provenance},
        "bounds": [_bound_dict(b, disc) for b in bounds],
        "best_bound": _bound_dict(best, disc),
        "seed": opts.seed,
        "precision_bits": opts.precision_bits,
        "checks": [],
    }

    if desc.defining_poly is None:
        report["lattice"] = {"skipped": "no polynomial"}
    elif opts.max_lattice_dim == 0:
        report["lattice"] = {"skipped": "not requested"}
    elif desc.n > opts.max_lattice_dim:
        report["lattice"] = {"skipped": f"degree {desc.n} above {opts.max_lattice_dim}"}
    else:
        basis = minkowski_basis(desc.defining_poly, prec=opts.precision_bits)
        split = basis.split
        minima = successive_minima(basis, node_budget=opts.node_budget)
        box = opts.coeff_box or _default_box(desc.n)
        m_est = homogeneous_minimum_estimate(basis, split, box)
        spec = TargetSpec(
            grid_bits=opts.grid_bits, points=tuple(opts.targets),
            random_count=opts.random_targets, seed=opts.seed,
        )
        M_est = inhomogeneous_minimum_lower_estimate(basis, split, spec, node_budget=opts.node_budget)
        checks = []
        if disc_override is None:
            checks.append(det_identity_check(desc, basis))
        for k in range(1, desc.n + 1):
            checks.append(minkowski_product_check(basis, k, g, minima) if g.n == desc.n else None)
        checks.append(lemma_m_mu1_check(basis, split, g, estimate=m_est, minima=minima))
        checks.append(lemma_M_mun_check(basis, split, g, estimate=M_est, minima=minima))
        checks.append(_le_check("bound_chain", M_est.interval(basis.prec), best.interval(disc, basis.prec)))
        report["lattice"] = {
            "basis": basis.to_json_dict(),
            "successive_minima": [_estimate_dict(m) for m in minima],
            "m_s": _estimate_dict(m_est),
            "M_s": _estimate_dict(M_est),
        }
        report["checks"] = [c.as_dict() for c in checks if c is not None]
    report["passed"] = all(c["status"] != "violated" for c in report["checks"])
    return report


# -- serialization -------------------------------------------------------------------------


def to_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False)


TABLE_COLUMNS = ("n", "s", "a_set", "coeff_exact", "coeff_decimal", "disc_exponent")


def table_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for r in rows:
        w.writerow([r.n, r.s, ",".join(map(str, r.a_set)), r.coefficient_exact, r.decimal_display, r.disc_exponent])
    return buf.getvalue()


def table_to_markdown(rows: list[ReportRow]) -> str:
    lines = ["| n | s | a | coefficient | decimal | D exponent |", "|---|---|---|---|---|---|"]
    for r in rows:
        lines.append(
            f"| {r.n} | {r.s} | {r.a_display()} | {r.coefficient_exact} | {r.decimal_display} | {r.disc_exponent} |"
        )
    return "\n".join(lines) + "\n"


def table_to_json(rows: list[ReportRow]) -> str:
    return to_json({"schema_version": SCHEMA_VERSION, "rows": [r.as_dict() for r in rows]})


def field_report_to_markdown(report: dict) -> str:
    d = report["descriptor"]
    out = [f"# Field report: {report['input']['polynomial'] or 'descriptor only'}", ""]
    out.append(f"n = {d['n']}, (r, s) = ({d['r']}, {d['s']}), |disc| = {d['disc_abs']} ({d['disc_source']})")
    out.append(f"gamma_{d['n']}: {report['hermite']['value']} ({report['hermite']['provenance']})")
    out += ["", "## Bounds", "", "| formula | a | coefficient | D exponent | value <= |", "|---|---|---|---|---|"]
    for b in report["bounds"]:
        out.append(f"| {b['formula']} | {b['a'] if b['a'] is not None else '-'} | {b['coefficient_exact']} | {b['disc_exponent']} | {b['value_upper'][:12]} |")
    bb = report["best_bound"]
    out += ["", f"Best: {bb['formula']} (a = {bb['a']}), M(K) <= {bb['value_upper'][:16]}", ""]
    lat = report["lattice"]
    if "skipped" in lat:
        out.append(f"Lattice stage skipped: {lat['skipped']}")
    else:
        out.append("## Lattice")
        for i, m in enumerate(lat["successive_minima"], 1):
            out.append(f"- mu_{i} in [{m['lower'][:14]}, {m['upper'][:14]}]")
        out.append(f"- m_s upper estimate: {lat['m_s']['upper'][:14]} (box {lat['m_s']['params']['coeff_box']})")
        out.append(f"- M_s lower estimate: {lat['M_s']['lower'][:14]} ({lat['M_s']['params']['targets']} targets)")
        out += ["", "## Checks", ""]
        for c in report["checks"]:
            out.append(f"- {c['name']}: {c['status']}" + (f" ({c['note']})" if c["note"] else ""))
    out += ["", f"passed: {report['passed']}"]
    return "\n".join(out) + "\n"
