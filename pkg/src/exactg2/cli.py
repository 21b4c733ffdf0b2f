"""Command-line interface: parse algebras, run single checks, and run the verification suite.

Exit codes: 0 pass, 1 check failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .catalog import (
    FAMILY_PARAMS,
    CatalogError,
    ForbiddenParameterError,
    UnknownAlgebraError,
    load_catalog,
    obstruction_halfflat_exact,
    param_family,
    parse_matrix,
    resolve_algebra,
    sl3c_admissibility,
)
from .exterior import FormParseError, KForm, parse_form, render
from .gstruct import (
    NotClosedError,
    SU3ValidationError,
    check_su3,
    closed_g2_from_extension,
    eigenform_parts,
    g2_from_phi,
    is_sl3c,
    k_rho,
    reduction_check,
    torsion_two_form,
    torsion_type,
    validate_su3,
)
from .liealg import JacobiError, NotADerivationError, NotationError, parse_notation, render_notation, semidirect_extend
from .scalars import FieldExtensionError, format_scalar

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers


def parse_field(text: str) -> tuple[str, int | None]:
    if text == "q":
        return "q", None
    if text == "f64":
        return "f64", None
    if text.startswith("q-sqrt:"):
        try:
            d = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"bad field '{text}'") from exc
        if d <= 1 or math.isqrt(d) ** 2 == d:
            raise UsageError(f"bad field '{text}': d must be a non-square integer > 1")
        return "q-sqrt", d
    raise UsageError(f"unknown field '{text}'; use q, q-sqrt:<d> or f64")


def read_form(text: str | None, n: int, field, what: str) -> KForm | None:
    if text is None:
        return None
    kind, d = field
    try:
        a = parse_form(text, n, sqrt_d=d)
    except (FormParseError, ValueError) as exc:
        raise UsageError(f"--{what}: {exc}") from exc
    if kind == "f64":
        a = a.map_coeffs(float)
    return a


def read_params(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise UsageError(f"parameter '{part}' is not name=value")
        k, v = part.split("=", 1)
        try:
            out[k.strip()] = Fraction(v.strip())
        except ValueError as exc:
            raise UsageError(f"parameter {k}: '{v}' is not a rational number") from exc
    return out


def load_user_catalog(path: str | None, field):
    if path is None:
        return None
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read catalog: {exc}") from exc
    return load_catalog(text, sqrt_d=field[1])


def emit(args, payload: dict, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(lines))


# ---------------------------------------------------------------------------
# parse


def cmd_parse(args) -> int:
    src = args.input
    if not src or not src.strip():
        raise UsageError("parse needs Salamon notation or a file")
    path = Path(src)
    if not src.strip().startswith("(") and path.exists():
        text = path.read_text()
        entries = load_catalog(text, sqrt_d=parse_field(args.field)[1], validate=True)
        payload = {name: {"notation": render_notation(ent.algebra), "jacobi": "ok"} for name, ent in entries.items()}
        emit(args, payload, [f"{name} := {v['notation']}  jacobi: ok" for name, v in payload.items()])
        return EXIT_OK
    try:
        L = parse_notation(src) if src.strip().startswith("(") else resolve_algebra(src.strip())
    except UnknownAlgebraError as exc:
        raise UsageError(str(exc)) from exc
    except JacobiError as exc:
        res = {str(k): render(v) for k, v in (exc.residuals or {}).items()}
        payload = {"input": src, "jacobi": "fail", "residuals": res, "error": str(exc)}
        lines = [f"input: {src}", "jacobi: FAIL"] + [f"  d(de^{k}) = {v}" for k, v in res.items()]
        emit(args, payload, lines)
        return EXIT_FAIL
    payload = {"notation": render_notation(L), "dim": L.n, "jacobi": "ok"}
    lines = [render_notation(L), "jacobi: ok"]
    if args.details:
        from .liealg import central_series, derivation_space

        ch = central_series(L)
        payload.update(descending=ch.descending_dims(), ascending=ch.ascending_dims(),
                       nilpotent=ch.is_nilpotent, der_dim=len(derivation_space(L)))
        lines += [f"descending series dims: {ch.descending_dims()}", f"ascending series dims: {ch.ascending_dims()}",
                  f"nilpotent: {ch.is_nilpotent}", f"dim Der: {payload['der_dim']}"]
        if L.n == 6 and ch.is_nilpotent:
            adm = sl3c_admissibility(L)
            payload["sl3c_case"] = adm.case
            lines.append(f"exact SL(3,C) admissibility: case {adm.case} (dim z = {adm.center_dim}, dim h_2 = {adm.h2_dim})")
    emit(args, payload, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check


def _algebra(args, field):
    if not args.algebra:
        raise UsageError("--algebra is required")
    cat = load_user_catalog(getattr(args, "catalog", None), field)
    try:
        return resolve_algebra(args.algebra, cat)
    except (UnknownAlgebraError, NotationError) as exc:
        raise UsageError(str(exc)) from exc


def _derivation(args, n, field):
    if args.f is None:
        raise UsageError("--f (matrix rows separated by ';') is required")
    try:
        f = parse_matrix(args.f, n, sqrt_d=field[1])
    except ValueError as exc:
        raise UsageError(f"--f: {exc}") from exc
    return f


def _structure_from_args(args, field):
    """(extension, omega, rho, nu) from --family or from --algebra/--f/--omega/--rho."""
    if args.family:
        if args.algebra not in (None, "n28"):
            raise UsageError("--family is defined on n28")
        try:
            inst = param_family(args.family, read_params(args.params or ""))
        except ForbiddenParameterError as exc:
            raise UsageError(str(exc)) from exc
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return inst.extension, inst.omega, inst.rho, inst.nu, inst.f
    h = _algebra(args, field)
    f = _derivation(args, h.n, field)
    omega = read_form(args.omega, h.n, field, "omega")
    rho = read_form(args.rho, h.n, field, "rho")
    if omega is None or rho is None:
        raise UsageError("--omega and --rho are required")
    nu = read_form(getattr(args, "nu", None), h.n, field, "nu")
    try:
        ext = semidirect_extend(h, f)
    except NotADerivationError as exc:
        raise UsageError(str(exc)) from exc
    return ext, omega, rho, nu, f


def check_lambda(args, field) -> tuple[bool, dict, list]:
    n = 6
    rho = read_form(args.rho, n, field, "rho")
    if rho is None:
        raise UsageError("--rho is required")
    q = k_rho(rho)
    ok = is_sl3c(rho)
    payload = {"lambda": format_scalar(q.lam), "sl3c": ok}
    return True, payload, [f"lambda = {format_scalar(q.lam)}", f"SL(3,C): {'yes' if ok else 'no'}"]


def check_su3_cmd(args, field):
    omega = read_form(args.omega, 6, field, "omega")
    rho = read_form(args.rho, 6, field, "rho")
    if omega is None or rho is None:
        raise UsageError("--omega and --rho are required")
    rep = check_su3(omega, rho)
    payload = {"checks": dict(rep.checks), "lambda": format_scalar(rep.lam), "ok": rep.ok}
    lines = [f"{k}: {'ok' if v else 'FAIL'}" for k, v in rep.checks.items()]
    if rep.ok:
        s = validate_su3(omega, rho)
        payload["rho_hat"] = render(s.rho_hat)
        lines.append(f"rho_hat = {render(s.rho_hat)}")
    return rep.ok, payload, lines


def check_g2_cmd(args, field):
    phi = read_form(args.phi, 7, field, "phi")
    if phi is None:
        raise UsageError("--phi is required")
    try:
        data = g2_from_phi(phi, numeric_fallback=(field[0] == "f64"))
    except (ValueError, FieldExtensionError) as exc:
        return False, {"g2": False, "error": str(exc)}, [f"G2: no ({exc})"]
    diag = [format_scalar(data.g[i][i]) for i in range(7)]
    payload = {"g2": True, "star_phi": render(data.star_phi), "metric_diagonal": diag, "numeric": data.numeric}
    return True, payload, ["G2: yes", f"*phi = {render(data.star_phi)}", f"metric diagonal: {diag}"]


def check_torsion_cmd(args, field):
    ext, omega, rho, _, _ = _structure_from_args(args, field)
    s = validate_su3(omega, rho)
    try:
        data = closed_g2_from_extension(ext, s)
    except NotClosedError as exc:
        return False, {"closed": False}, [f"closed: no ({exc})"]
    tau = torsion_two_form(ext, data)
    typ = torsion_type(tau, data)
    payload = {"closed": True, "tau": render(tau), "type": typ, "norm2": format_scalar(data.norm2(tau))}
    return True, payload, [f"tau = {render(tau)}", f"|tau|^2 = {format_scalar(data.norm2(tau))}", f"type={typ}"]


def check_eigenform_cmd(args, field):
    ext, omega, rho, _, _ = _structure_from_args(args, field)
    s = validate_su3(omega, rho)
    try:
        data = closed_g2_from_extension(ext, s)
    except NotClosedError as exc:
        return False, {"closed": False}, [f"closed: no ({exc})"]
    parts = eigenform_parts(ext, data)
    mu = parts.c1
    eigen = parts.dtau == data.phi * mu and not parts.dtau.is_zero()
    payload = {"law_holds": parts.law_holds, "eigenform": eigen, "c1": format_scalar(mu),
               "seven_part_zero": parts.seven_part_zero}
    lines = [f"d tau 7-part zero: {parts.seven_part_zero}",
             f"d tau 1-part coefficient: {format_scalar(mu)} (|tau|^2/7 = {format_scalar(parts.expected_c1)})",
             f"eigenform: {'yes, mu = ' + format_scalar(mu) if eigen else 'no'}"]
    return parts.law_holds, payload, lines


def check_reduction_cmd(args, field):
    ext, omega, rho, nu, f = _structure_from_args(args, field)
    if nu is None:
        raise UsageError("--nu is required (or use --family)")
    alpha = read_form(args.alpha, ext.base.n, field, "alpha")
    rep = reduction_check(ext.base, f, omega, rho, nu, alpha)
    d = rep.as_dict()
    lines = [f"{k}: {'ok' if v else 'FAIL'}" for k, v in d.items() if k != "residuals"]
    lines += [f"  residual {k} = {v}" for k, v in d["residuals"].items()]
    lines.append(f"exact case (d nu = rho and eq3): {rep.exact_case}")
    return rep.exact_case or rep.eigenform_case, d, lines


def check_obstruction_cmd(args, field):
    h = _algebra(args, field)
    alpha = read_form(args.alpha, h.n, field, "alpha")
    if alpha is None:
        raise UsageError("--alpha is required")
    try:
        ob = obstruction_halfflat_exact(h, alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return True, {"obstructed": ob}, [f"obstructed: {'yes' if ob else 'no'}"]


CHECK_HANDLERS = {
    "lambda": check_lambda,
    "su3": check_su3_cmd,
    "g2": check_g2_cmd,
    "torsion": check_torsion_cmd,
    "eigenform": check_eigenform_cmd,
    "reduction": check_reduction_cmd,
    "obstruction": check_obstruction_cmd,
}


def cmd_check(args) -> int:
    field = parse_field(args.field)
    ok, payload, lines = CHECK_HANDLERS[args.what](args, field)
    emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# verify-paper


def cmd_verify(args) -> int:
    from .suite import CheckResult, run_suite

    if args.samples < 1:
        raise UsageError("--samples must be positive")
    only = None
    if args.criterion:
        wanted = set(args.criterion)
        only = lambda c: c.criterion in wanted  # noqa: E731
    rep = run_suite(seed=args.seed, samples=args.samples, only=only)
    if args.catalog:
        try:
            entries = load_user_catalog(args.catalog, parse_field(args.field))
            adm = []
            for name, ent in entries.items():
                L = ent.algebra
                from .liealg import central_series

                if L.n == 6 and central_series(L).is_nilpotent:
                    adm.append(f"{name}:{sl3c_admissibility(L).case}")
            rep.results.append(CheckResult("catalog_file", None, "pass", f"{len(entries)} entries; " + ", ".join(adm)))
        except CatalogError as exc:
            rep.results.append(CheckResult("catalog_file", None, "fail",
                                           f"invariant {exc.invariant} violated for {exc.name}: {exc}"))
    counts = {s: sum(r.status == s for r in rep.results) for s in ("pass", "fail", "skipped")}
    if args.json:
        payload = {
            "seed": args.seed,
            "samples": args.samples,
            "checks": [
                {k: v for k, v in (("name", r.name), ("criterion", r.criterion), ("status", r.status),
                                   ("detail", r.detail), ("seconds", round(r.seconds, 3) if args.timings else None))
                 if v is not None}
                for r in rep.results
            ],
            "counts": counts,
            "ok": rep.ok,
        }
        print(json.dumps(payload, indent=2))
    else:
        for r in rep.results:
            crit = f"[{r.criterion}]" if r.criterion else "[-]"
            t = f" ({r.seconds:.2f}s)" if args.timings else ""
            print(f"{r.status.upper():5} {crit:5} {r.name}{t}: {r.detail}")
        print(f"{len(rep.results)} checks: {counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped")
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="exactg2", description="Exact computations with SU(3)- and G2-structures on Lie algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="scalar field: q, q-sqrt:<d> or f64 (default q)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pp = sub.add_parser("parse", parents=[common], help="parse Salamon notation or a catalog file")
    pp.add_argument("input", help="notation such as '(0,0,0,12,14-23,15+34)' or a file path")
    pp.add_argument("--details", action="store_true", help="central series, derivations and admissibility")
    pp.set_defaults(func=cmd_parse)

    pc = sub.add_parser("check", parents=[common], help="run a single check")
    pc.add_argument("what", choices=sorted(CHECK_HANDLERS))
    pc.add_argument("--algebra", help="built-in name, catalog name or inline notation")
    pc.add_argument("--catalog", help="catalog file with additional algebras")
    pc.add_argument("--dim6", action="store_true", help="forms live on a six-dimensional space (default)")
    pc.add_argument("--rho")
    pc.add_argument("--omega")
    pc.add_argument("--nu")
    pc.add_argument("--alpha")
    pc.add_argument("--phi")
    pc.add_argument("--f", help="derivation matrix, rows separated by ';'")
    pc.add_argument("--family", choices=sorted(FAMILY_PARAMS), help="n28 derivation family")
    pc.add_argument("--params", help="family parameters, e.g. a=-1/4,b1=0,b2=0,c=9/2")
    pc.set_defaults(func=cmd_check)

    pv = sub.add_parser("verify-paper", parents=[common], help="run the full verification suite")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--samples", type=int, default=100)
    pv.add_argument("--catalog", help="catalog file validated and swept for admissibility")
    pv.add_argument("--criterion", type=int, action="append", help="only checks of this acceptance criterion")
    pv.add_argument("--timings", action="store_true", help="include wall times (output no longer byte-stable)")
    pv.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"exactg2: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CatalogError as exc:
        print(f"exactg2: catalog error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotationError, FormParseError) as exc:
        print(f"exactg2: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SU3ValidationError, NotADerivationError) as exc:
        print(f"exactg2: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
