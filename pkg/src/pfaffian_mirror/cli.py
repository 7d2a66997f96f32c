"""Command-line entry point: one subcommand per pipeline, one document on stdout."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .enumerative import (
    EnumerativeInputs,
    bcov_genus1,
    conifold_discriminant,
    gv_genus0,
    mirror_data,
    virtual_invariants,
    yukawa_q,
)
from .theta_operator import fit_operator, indicial_exponents, recurrence_solve, riemann_scheme
from .family_registry import RegistryError, closed_form_period, get_family, list_families
from .report import full_report, geometry_summary, period_check, pscheme_rows
from .residue_oracle import constant_term_coefficient, solution_basis_check, x13_system

__all__ = ["RunConfig", "UsageError", "build_parser", "run", "main"]

log = logging.getLogger("pfaffian_mirror")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    family: str | None = None
    order: int = 30
    max_degree: int = 5
    genus: int = 0
    disc_override: tuple[Fraction, ...] | None = None
    virtual_deg: Fraction | None = None
    chi: Fraction | None = None
    c2h: Fraction | None = None
    output: str = "json"
    out_path: str | None = None
    check: bool = False
    recipe: str | None = None
    theta_order: int = 4
    phi_degree: int | None = None
    max_t_power: int = 28

    def require_extraction_order(self) -> None:
        need = 4 * self.max_degree + 6
        if self.order < need:
            raise UsageError(f"--order {self.order} is too small for --max-degree {self.max_degree}; need at least {need}")


@dataclass
class Result:
    doc: dict
    header: list[str]
    rows: list[list]
    code: int = EXIT_OK


# ---------------------------------------------------------------------------
# helpers


def _strs(values) -> list[str]:
    return [str(v) for v in values]


def _spec(cfg: RunConfig, need_operator: bool = True):
    if not cfg.family:
        raise UsageError("--family is required")
    try:
        spec = get_family(cfg.family)
    except RegistryError as e:
        raise UsageError(str(e.args[0])) from None
    if need_operator and spec.operator is None:
        raise UsageError(f"{spec.name} has no operator")
    return spec


def _mismatch(cfg: RunConfig, ok: bool) -> int:
    return EXIT_MISMATCH if cfg.check and not ok else EXIT_OK


# ---------------------------------------------------------------------------
# commands


def cmd_period(cfg: RunConfig) -> Result:
    spec = _spec(cfg)
    if spec.period_rule is not None:
        s, source = closed_form_period(spec, cfg.order), "closed_form"
    else:
        s, source = recurrence_solve(spec.operator, 1, cfg.order), "recurrence"
    doc = {"family": spec.name, "source": source, "rule_status": spec.period_status, "coefficients": _strs(s.coeffs)}
    return Result(doc, ["n", "coefficient"], [[n, c] for n, c in enumerate(s.coeffs)])


def cmd_pf_verify(cfg: RunConfig) -> Result:
    spec = _spec(cfg)
    if spec.period_rule is None:
        raise UsageError(f"{spec.name} has no closed-form period to verify")
    pc = period_check(spec, cfg.order)
    ok = pc["annihilated"]
    diff = []
    if not ok:
        for n in range(cfg.order + 1):
            a, b = pc["closed_form"][n], pc["recurrence"][n]
            if a != b:
                diff.append({"n": n, "closed_form": a, "operator": b})
            if len(diff) == 5:
                break
    doc = {
        "family": spec.name,
        "order": cfg.order,
        "rule_status": spec.period_status,
        "annihilated": ok,
        "first_mismatch": pc["first_mismatch"],
        "diff": diff,
    }
    rows = [[d["n"], d["closed_form"], d["operator"]] for d in diff]
    return Result(doc, ["n", "closed_form", "operator"], rows, EXIT_OK if ok else EXIT_MISMATCH)


def cmd_pf_fit(cfg: RunConfig) -> Result:
    spec = _spec(cfg)
    phi_degree = cfg.phi_degree if cfg.phi_degree is not None else spec.operator.phi_degree
    need = (cfg.theta_order + 1) * (phi_degree + 1) + 10
    order = max(cfg.order, need)
    if spec.period_rule is not None:
        s, source = closed_form_period(spec, order), "closed_form"
    else:
        s, source = recurrence_solve(spec.operator, 1, order), "recurrence"
    log.info("fitting order %d, phi-degree %d on %d terms", cfg.theta_order, phi_degree, order + 1)
    L = fit_operator(s, cfg.theta_order, phi_degree)
    match = L is not None and L == spec.operator
    doc = {
        "family": spec.name,
        "source": source,
        "series_order": order,
        "operator": None if L is None else L.to_json(),
        "pretty": None if L is None else L.pretty(),
        "exponents_at_0": None if L is None else _strs(indicial_exponents(L, 0).values),
        "matches_registry": match,
    }
    rows = [] if L is None else [[i, *c] for i, c in enumerate(L.integer_coeffs())]
    header = ["theta_power"] + [f"phi^{j}" for j in range(phi_degree + 1)]
    return Result(doc, header, rows, EXIT_OK if match else EXIT_MISMATCH)


def cmd_pscheme(cfg: RunConfig) -> Result:
    spec = _spec(cfg)
    table = riemann_scheme(spec.operator).to_json()
    doc = {"family": spec.name, "points": table}
    ok = True
    if "pscheme" in spec.golden:
        expected = {k: sorted(v, key=Fraction) for k, v in spec.golden["pscheme"]["points"].items()}
        actual = pscheme_rows(spec.operator, spec.golden["pscheme"])
        ok = expected == actual
        doc["matches_printed"] = ok
    rows = [[p["point"], *p["exponents"]] for p in table]
    return Result(doc, ["point", "rho1", "rho2", "rho3", "rho4"], rows, _mismatch(cfg, ok))


def cmd_mirror_map(cfg: RunConfig) -> Result:
    spec = _spec(cfg)
    data = mirror_data(spec.operator, cfg.order)
    q = data.q_of_phi.truncate(cfg.order)
    phi = data.phi_of_q.truncate(cfg.order)
    doc = {"family": spec.name, "q_of_phi": _strs(q.coeffs), "phi_of_q": _strs(phi.coeffs), "integral": q.is_integral()}
    ok = True
    if "mirror_map" in spec.golden:
        g = spec.golden["mirror_map"]
        ok = _strs(q.coeffs[: len(g)]) == g
        doc["matches_printed"] = ok
    rows = [[n, a, b] for n, (a, b) in enumerate(zip(q.coeffs, phi.coeffs))]
    return Result(doc, ["n", "q_of_phi", "phi_of_q"], rows, _mismatch(cfg, ok))


def _deg(cfg: RunConfig, spec) -> Fraction:
    if cfg.virtual_deg is not None:
        return cfg.virtual_deg
    if spec.invariants.deg is not None:
        return spec.invariants.deg
    return Fraction(1)


def cmd_yukawa(cfg: RunConfig) -> Result:
    spec = _spec(cfg)
    deg = _deg(cfg, spec)
    K = yukawa_q(spec.operator, deg, cfg.order)
    doc = {"family": spec.name, "deg": deg, "coefficients": _strs(K.coeffs)}
    ok = True
    if "yukawa" in spec.golden and deg == spec.invariants.deg:
        g = spec.golden["yukawa"]
        ok = _strs(K.coeffs[: len(g)]) == g
        doc["matches_printed"] = ok
    return Result(doc, ["n", "coefficient"], [[n, c] for n, c in enumerate(K.coeffs)], _mismatch(cfg, ok))


def cmd_bps(cfg: RunConfig) -> Result:
    cfg.require_extraction_order()
    if cfg.genus not in (0, 1):
        raise UsageError("--genus must be 0 or 1")
    spec = _spec(cfg)
    L, max_d = spec.operator, cfg.max_degree
    disc = cfg.disc_override
    if disc is None:
        disc = spec.disc_choice if spec.disc_choice is not None else tuple(conifold_discriminant(L))
    expected = None
    if spec.source:
        fit = spec.virtual.get("genus1_fit", {})
        if cfg.genus == 0:
            a = cfg.virtual_deg if cfg.virtual_deg is not None else Fraction(1)
            table = virtual_invariants(L, a, max_d=max_d, family=spec.name)
            if "gv0_per_unit_deg" in spec.golden:
                expected = [str(Fraction(v) * a) for v in spec.golden["gv0_per_unit_deg"]]
        else:
            a = cfg.virtual_deg if cfg.virtual_deg is not None else _opt(fit.get("virtual_deg"))
            chi = cfg.chi if cfg.chi is not None else _opt(fit.get("chi"))
            c2 = cfg.c2h if cfg.c2h is not None else _opt(fit.get("c2H"))
            if a is None or chi is None or c2 is None:
                raise UsageError(f"genus 1 for {spec.name} needs --virtual-deg, --chi and --c2h")
            table = virtual_invariants(L, a, c2, chi, max_d, genus=1, disc=disc, family=spec.name)
            if "gv1" in spec.golden and cfg.virtual_deg is None and cfg.chi is None and cfg.c2h is None:
                expected = spec.golden["gv1"]
    else:
        inv = spec.invariants
        deg = inv.deg
        if deg is None:
            raise UsageError(f"{spec.name} has no degree")
        data = mirror_data(L, max_d + 1)
        log.info("extracting genus-0 table to degree %d", max_d)
        table = gv_genus0(yukawa_q(L, deg, max_d, data=data), deg, max_d, spec.name)
        if cfg.genus == 1:
            chi = cfg.chi if cfg.chi is not None else inv.chi
            c2 = cfg.c2h if cfg.c2h is not None else inv.c2H
            if chi is None or c2 is None:
                raise UsageError(f"genus 1 for {spec.name} needs chi and c2H")
            log.info("extracting genus-1 table to degree %d", max_d)
            table = bcov_genus1(L, EnumerativeInputs(deg, c2, chi, inv.h11 or 1), disc, table, max_d, data=data)
        key = f"gv{cfg.genus}"
        if key in spec.golden and cfg.disc_override is None:
            expected = spec.golden[key]
    doc = table.to_json()
    ok = True
    if expected is not None:
        ok = _strs(table.values()[: len(expected)]) == expected
        doc["matches_printed"] = ok
    rows = [[d, table.entries[d]] for d in sorted(table.entries)]
    return Result(doc, ["d", f"n{cfg.genus}"], rows, _mismatch(cfg, ok))


def _opt(v):
    return None if v is None else Fraction(v)


def cmd_transform(cfg: RunConfig) -> Result:
    spec = _spec(cfg)
    recipes = sorted(spec.transforms)
    recipe = cfg.recipe or ("to-infinity" if "to-infinity" in recipes else None)
    if recipe is None or recipe not in spec.transforms:
        raise UsageError(f"{spec.name} has no transform recipe {recipe!r}; known: {', '.join(recipes) or 'none'}")
    steps = spec.transform_steps(recipe)
    res = spec.operator.transform_chain(steps)
    comparisons = {"self": res == spec.operator}
    for other in list_families():
        o = get_family(other)
        if o.source.get("family") != spec.name:
            continue
        for key, r in o.source.get("printed_recipes", {}).items():
            if r == recipe:
                comparisons[f"{other}.{key}"] = res == o.printed_operators[key]
        if o.source.get("recipe") == recipe and o.operator is not None:
            comparisons[f"{other}.operator"] = res == o.operator
    doc = {
        "family": spec.name,
        "recipe": recipe,
        "steps": [[s[0], *(str(v) for v in s[1:])] for s in steps],
        "operator": res.to_json(),
        "pretty": res.pretty(),
        "equals": comparisons,
    }
    rows = [[k, v] for k, v in sorted(comparisons.items())]
    return Result(doc, ["compared_with", "equal"], rows)


def cmd_geometry(cfg: RunConfig) -> Result:
    spec = _spec(cfg, need_operator=False)
    if spec.weights is None or spec.bundle_twists is None:
        raise UsageError(f"{spec.name} has no pfaffian resolution data")
    geo = geometry_summary(spec)
    inv = spec.invariants
    expected = {"deg": inv.deg, "c2H": inv.c2H, "h12": inv.h12}
    ok = all(expected[k] is None or geo[k] is None or str(expected[k]) == geo[k] for k in expected)
    if "hilbert_numerator" in spec.golden:
        ok = ok and spec.golden["hilbert_numerator"] == geo["hilbert_numerator"]
    doc = {"family": spec.name, **geo, "matches_registry": ok}
    rows = [[k, geo[k]] for k in ("deg", "c2H", "h12", "h0_H", "palindromic")]
    rows.append(["hilbert_numerator", " ".join(geo["hilbert_numerator"])])
    return Result(doc, ["quantity", "value"], rows, _mismatch(cfg, ok))


def cmd_oracle(cfg: RunConfig) -> Result:
    sys_ = x13_system()
    spec = get_family("x13")
    power = spec.effective_power
    coeffs = []
    for k in range(cfg.max_t_power + 1):
        if k % power == 0:
            log.info("t^%d", k)
        coeffs.append(constant_term_coefficient(sys_, k))
    closed = closed_form_period(spec, cfg.max_t_power // power)
    on = coeffs[::power]
    off_zero = all(c == 0 for k, c in enumerate(coeffs) if k % power)
    basis = solution_basis_check(sys_)
    ok = _strs(on) == _strs(closed.coeffs) and off_zero and basis.rank == 3
    doc = {
        "family": "x13",
        "t_coefficients": _strs(coeffs),
        "phi_coefficients": _strs(on),
        "closed_form": _strs(closed.coeffs),
        "off_lattice_zero": off_zero,
        "basis": basis.to_json(),
        "agrees": ok,
    }
    rows = [[n, a, b] for n, (a, b) in enumerate(zip(on, closed.coeffs))]
    return Result(doc, ["phi_power", "oracle", "closed_form"], rows, EXIT_OK if ok else EXIT_MISMATCH)


def cmd_report(cfg: RunConfig) -> Result:
    cfg.require_extraction_order()
    names = [cfg.family] if cfg.family else None
    if cfg.family:
        _spec(cfg, need_operator=False)
    rep = full_report(names, cfg.order, cfg.max_degree, progress=lambda n: log.info("report: %s", n))
    rows = [[f, c["id"], c["status"]] for f, r in sorted(rep["families"].items()) for c in r["checks"]]
    failed = any(r[2] == "fail" for r in rows)
    return Result(rep, ["family", "check", "status"], rows, _mismatch(cfg, not failed))


COMMANDS = {
    "period": (cmd_period, "closed-form (or recurrence) period coefficients"),
    "pf-verify": (cmd_pf_verify, "check that the operator annihilates the closed-form period"),
    "pf-fit": (cmd_pf_fit, "fit an operator to the period series"),
    "pscheme": (cmd_pscheme, "Riemann P-scheme of the operator"),
    "mirror-map": (cmd_mirror_map, "mirror map q(phi) and its inverse"),
    "yukawa": (cmd_yukawa, "Yukawa coupling K_ttt(q)"),
    "bps": (cmd_bps, "genus-0 or genus-1 BPS table"),
    "transform": (cmd_transform, "apply a named transform chain to the operator"),
    "geometry": (cmd_geometry, "Hilbert numerator, degree, c2.H and h12"),
    "oracle": (cmd_oracle, "residue-integral oracle for the x13 period"),
    "report": (cmd_report, "reproduce every stored table; --check diffs against golden values"),
}


# ---------------------------------------------------------------------------
# output


def _plain(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_plain(result.doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(result.header)
        for r in result.rows:
            w.writerow([_cell(c) for c in r])
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(result.header) + " |", "|" + "---|" * len(result.header)]
        for r in result.rows:
            lines.append("| " + " | ".join(_cell(c).replace("|", "\\|") for c in r) + " |")
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown output format {fmt!r}")


# ---------------------------------------------------------------------------
# argument parsing


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _poly(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(t.strip()) for t in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="registry family name")
    common.add_argument("--order", type=int, default=30, help="series truncation order (default 30)")
    common.add_argument("--max-degree", type=int, default=5, help="highest BPS degree (default 5)")
    common.add_argument("--genus", type=int, default=0, choices=(0, 1))
    common.add_argument("--disc", type=_poly, help="discriminant override, coefficients low degree first, comma separated")
    common.add_argument("--virtual-deg", type=_fraction, help="virtual degree for second MUM points")
    common.add_argument("--chi", type=_fraction, help="Euler number override for genus 1")
    common.add_argument("--c2h", type=_fraction, help="c2.H override for genus 1")
    common.add_argument("--output", choices=("json", "csv", "markdown"), default="json")
    common.add_argument("--out", help="write the document here instead of stdout")
    common.add_argument("--check", action="store_true", help="exit 1 when results differ from stored golden values")
    common.add_argument("--recipe", help="transform recipe name (default to-infinity)")
    common.add_argument("--theta-order", type=int, default=4, help="operator order for pf-fit")
    common.add_argument("--phi-degree", type=int, help="phi degree for pf-fit (default: the registry operator's)")
    common.add_argument("--max-t-power", type=int, default=28, help="highest t-power for the oracle")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    parser = argparse.ArgumentParser(prog="pfaffian-mirror", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_fn, help_) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_)
    sub.add_parser("families", help="list registry families", parents=[common])
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    if ns.order < 0 or ns.max_degree < 1 or ns.max_t_power < 0:
        raise UsageError("orders must be non-negative and --max-degree at least 1")
    return RunConfig(
        family=ns.family,
        order=ns.order,
        max_degree=ns.max_degree,
        genus=ns.genus,
        disc_override=ns.disc,
        virtual_deg=ns.virtual_deg,
        chi=ns.chi,
        c2h=ns.c2h,
        output=ns.output,
        out_path=ns.out,
        check=ns.check,
        recipe=ns.recipe,
        theta_order=ns.theta_order,
        phi_degree=ns.phi_degree,
        max_t_power=ns.max_t_power,
    )


def run(command: str, cfg: RunConfig) -> Result:
    if command == "families":
        names = list_families()
        return Result({"families": names}, ["family"], [[n] for n in names])
    try:
        fn = COMMANDS[command][0]
    except KeyError:
        raise UsageError(f"unknown command {command!r}") from None
    return fn(cfg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if ns.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _config(ns)
        result = run(ns.command, cfg)
        text = render(result, cfg.output)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        sys.stdout.write(text)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
