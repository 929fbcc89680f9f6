"""Command-line front end: ``ptqes <command> [options]``.

Every command writes one document (JSON by default, or the record table as
CSV).  Exit status is 0 on success, 1 for a domain outcome (violated
constraint, nothing found, failed verification) and 2 for usage or numerical
failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import potentials as pot
from . import qes, shoot, susy
from .algebra import evaluate
from .errors import (
    ConstraintViolated,
    ContourError,
    DomainError,
    GridTooCoarse,
    NewtonDiverged,
    NoRoot,
    NonConvergence,
    NotConstantDifference,
    OverflowDespiteRenormalization,
    PoleAtPoint,
    PoleOnContour,
)

DIGITS = 12
PT_TOL = 1e-10
VERIFY_TOL = 1e-6

NUMERICAL_ERRORS = (
    NonConvergence,
    NewtonDiverged,
    ContourError,
    PoleOnContour,
    PoleAtPoint,
    OverflowDespiteRenormalization,
    GridTooCoarse,
)


class UsageError(Exception):
    pass


class DomainOutcome(Exception):
    """Carries a finished document whose status is a domain failure."""

    def __init__(self, doc):
        super().__init__(doc.get("status"))
        self.doc = doc


def num(x):
    """Round to 12 significant digits; the JSON text then round-trips exactly."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{DIGITS}g}") + 0.0


def cnum(z):
    z = complex(z)
    return num(z.real), num(z.imag)


def coeff_list(c):
    return [list(cnum(v)) for v in np.asarray(c)]


def expr_doc(expr):
    return {
        "variable": "t = x + i*eps",
        "eps": num(expr.shift),
        "numerator": coeff_list(expr.num.coeffs),
        "denominator": coeff_list(expr.den.coeffs),
    }


# argument parsing ----------------------------------------------------------


def _half_integer(flag):
    def conv(s):
        try:
            return pot.check_half_integer(float(s))
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} must be a non-negative half-integer (2j integer), got {s!r}")

    return conv


def _rho(s):
    v = float(s)
    if v not in (1.0, -1.0):
        raise argparse.ArgumentTypeError(f"--rho must be 1 or -1, got {s!r}")
    return v


def _output_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--output", "-o", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--emit-plot-data", metavar="PATH", default=None,
                   help="also write sampled (x, Re V, Im V, Re psi, Im psi, |psi|) as CSV")
    p.add_argument("--plot-L", type=float, default=4.0, help="half-width of the plot grid")
    p.add_argument("--plot-points", type=int, default=801)
    return p


def _potential_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--potential", required=True,
                   choices=("harmonic", "polynomial", "quartic-qes", "sextic-barrier", "sextic-partner"))
    p.add_argument("--coeffs", type=float, nargs="+", help="low-first real coefficients in t (polynomial)")
    p.add_argument("--j", type=_half_integer("--j"), default=0.0)
    p.add_argument("--B", type=float, default=0.0)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=None, help="contour shift (default: family default)")
    return p


def _contour_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--L", type=float, default=None, help="contour half-width (default 6 sextic, 8 otherwise)")
    p.add_argument("--N", type=int, default=8000, help="RK4 steps per side")
    p.add_argument("--x-match", type=float, default=0.0)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptqes", description="PT-symmetric QES potentials toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    out = _output_parent()
    potp = _potential_parent()
    con = _contour_parent()

    p = sub.add_parser("reduce-quartic", parents=[out], help="shift away the cubic term of a quartic")
    p.add_argument("--rho", type=_rho, default=1.0)
    for k in ("a", "b", "c"):
        p.add_argument(f"--{k}", type=float, required=True)

    p = sub.add_parser("reduce-sextic", parents=[out], help="shift away the odd terms of a sextic")
    p.add_argument("--rho", type=_rho, default=1.0)
    for k in ("a", "b", "c", "d", "e"):
        p.add_argument(f"--{k}", type=float, required=True)

    p = sub.add_parser("qes-quartic", parents=[out], help="algebraic levels of the quartic QES family")
    p.add_argument("--j", type=_half_integer("--j"), required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--eps", type=float, default=1.0)

    p = sub.add_parser("qes-sextic", parents=[out], help="algebraic levels of the barrier sextic family")
    p.add_argument("--j", type=_half_integer("--j"), required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--eps", type=float, default=1.0)

    families = ("harmonic", "quartic-rational", "quartic-barrier", "sextic", "sextic-barrier",
                "sextic-barrier-excited")
    for name, helptext in (("susy-partners", "partner potentials of a superpotential"),
                           ("susy-verify", "identity checks for a superpotential family")):
        p = sub.add_parser(name, parents=[out], help=helptext)
        p.add_argument("--family", required=True, choices=families)
        p.add_argument("--omega", type=float, default=1.0)
        p.add_argument("--beta", type=float, default=None)
        p.add_argument("--f", type=float, default=None)
        p.add_argument("--g", type=float, default=None)
        p.add_argument("--A", type=float, default=0.0)
        p.add_argument("--rho", type=_rho, default=1.0)
        p.add_argument("--a", type=float, default=2.0)
        p.add_argument("--gamma", type=float, default=1.0)
        p.add_argument("--eps", type=float, default=None)
        if name == "susy-verify":
            p.add_argument("--levels", type=int, default=4, help="levels compared for isospectrality")

    p = sub.add_parser("solve", parents=[out, potp, con], help="numerical spectrum by shooting / FD")
    p.add_argument("--window", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--seeds", type=int, default=40)
    p.add_argument("--imag-window", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    p.add_argument("--imag-seeds", type=int, default=5)
    p.add_argument("--method", choices=("shoot", "fd", "both"), default="shoot")
    p.add_argument("--fd-points", type=int, default=400)
    p.add_argument("--fd-levels", type=int, default=6)
    p.add_argument("--threads", type=int, default=None, help="overrides PTQES_THREADS")

    p = sub.add_parser("pt-check", parents=[out, potp], help="PT symmetry defect on a grid")
    p.add_argument("--half-width", type=float, default=4.0)
    p.add_argument("--points", type=int, default=801)
    return parser


# potential construction ----------------------------------------------------

FAMILY_EPS = {"harmonic": 0.0, "polynomial": 0.0, "quartic-qes": 1.0, "sextic-barrier": 1.0,
              "sextic-partner": 0.0}


def potential_from_args(args):
    eps = FAMILY_EPS[args.potential] if args.eps is None else args.eps
    kind = args.potential
    if kind == "harmonic":
        return pot.build_polynomial([0.0, 0.0, 1.0], eps, "harmonic")
    if kind == "polynomial":
        if not args.coeffs:
            raise UsageError("--coeffs is required for --potential polynomial")
        return pot.build_polynomial(args.coeffs, eps)
    if kind == "quartic-qes":
        return pot.build_quartic_qes(args.j, args.B, eps)
    if kind == "sextic-barrier":
        if args.gamma * (args.gamma + 1) != 0 and eps == 0:
            raise UsageError("--eps must be nonzero when the barrier term is present")
        return pot.build_barrier_sextic(pot.SexticBarrierParams(args.a, args.gamma, args.j), eps)
    # partner of the j = 0 barrier sextic: V+ of W = t^3 + a t + gamma/t
    if args.gamma * (args.gamma - 1) != 0 and eps == 0:
        raise UsageError("--eps must be nonzero when the partner keeps a barrier term")
    _, vplus = susy.partners(susy.sextic_barrier_superpotential(args.a, args.gamma, eps))
    return pot.PotentialSpec(vplus, "sextic-partner", {"a": args.a, "gamma": args.gamma, "eps": eps})


def superpotential_from_args(args):
    fam = args.family
    eps = args.eps
    if fam == "harmonic":
        return susy.harmonic_superpotential(args.omega, 0.0 if eps is None else eps), {}
    if fam == "quartic-rational":
        if args.g is None:
            raise UsageError("--g is required for --family quartic-rational")
        extra = {}
        if args.f is None and args.beta is None:
            f, beta = susy.reality_constraints(args.g)
            extra = {"f": num(f), "beta": num(beta), "from": "reality constraints (largest root)"}
        elif args.f is None or args.beta is None:
            raise UsageError("give both --f and --beta, or neither")
        else:
            f, beta = args.f, args.beta
        return susy.quartic_rational_superpotential(beta, f, args.g), extra
    if fam == "quartic-barrier":
        return susy.quartic_barrier_superpotential(1.0 if eps is None else eps), {}
    if fam == "sextic":
        return susy.sextic_superpotential(args.rho, args.A, 0.0 if eps is None else eps), {}
    if fam == "sextic-barrier":
        return susy.sextic_barrier_superpotential(args.a, args.gamma, 1.0 if eps is None else eps), {}
    w = susy.sextic_barrier_excited_superpotential(args.a, args.gamma, args.f, 1.0 if eps is None else eps)
    return w, {}


def _contour(args, v):
    base = shoot.default_contour(v)
    L = base.L if args.L is None else args.L
    return shoot.ContourSpec(eps=v.eps, L=L, N=args.N, x_match=args.x_match)


def _plot_rows(x, v_vals, psi=None, level=None):
    rows = []
    for k, xv in enumerate(x):
        vv = complex(v_vals[k])
        row = {"level": level, "x": num(xv), "re_v": num(vv.real), "im_v": num(vv.imag)}
        if psi is None:
            row.update(re_psi=None, im_psi=None, abs_psi=None)
        else:
            p = complex(psi[k])
            row.update(re_psi=num(p.real), im_psi=num(p.imag), abs_psi=num(abs(p)))
        rows.append(row)
    return rows


def _plot_grid(args):
    return np.linspace(-args.plot_L, args.plot_L, args.plot_points)


# commands ------------------------------------------------------------------


def cmd_reduce_quartic(args):
    p = pot.QuarticParams(args.rho, args.a, args.b, args.c)
    params = {"rho": args.rho, "a": args.a, "b": args.b, "c": args.c}
    defaults = {"constraint_atol": pot.CONSTRAINT_ATOL}
    try:
        r = pot.reduce_quartic(p)
    except ConstraintViolated as exc:
        doc = _doc(args, params, defaults, "constraint-violated",
                   [{"constraint": exc.which, "residual": num(exc.residual),
                     "required": num(args.c + exc.residual), "given": num(args.c)}])
        raise DomainOutcome(doc)
    rec = {"eps": num(r.eps), "rho": num(r.rho), "A": num(r.A), "B": num(r.B), "residual_c": 0.0}
    doc = _doc(args, params, defaults, "ok", [rec])
    v = pot.PotentialSpec(pot.RationalExpression.from_poly(r.polynomial()), "quartic")
    doc["shifted_form"] = "rho*t^4 + A*t^2 + B"
    return doc, lambda: _plot_rows(_plot_grid(args), v(_plot_grid(args)))


def cmd_reduce_sextic(args):
    p = pot.SexticParams(args.rho, args.a, args.b, args.c, args.d, args.e)
    params = {k: getattr(args, k) for k in ("rho", "a", "b", "c", "d", "e")}
    defaults = {"constraint_atol": pot.CONSTRAINT_ATOL}
    try:
        r = pot.reduce_sextic(p)
    except ConstraintViolated as exc:
        given = getattr(args, exc.which)
        doc = _doc(args, params, defaults, "constraint-violated",
                   [{"constraint": exc.which, "residual": num(exc.residual),
                     "required": num(given + exc.residual), "given": num(given)}])
        raise DomainOutcome(doc)
    rec = {"eps": num(r.eps), "rho": num(r.rho), "A": num(r.A), "B": num(r.B), "C": num(r.C),
           "residual_c": 0.0, "residual_e": 0.0}
    doc = _doc(args, params, defaults, "ok", [rec])
    doc["shifted_form"] = "rho*t^6 + A*t^4 + B*t^2 + C"
    v = pot.PotentialSpec(pot.RationalExpression.from_poly(r.polynomial()), "sextic")
    return doc, lambda: _plot_rows(_plot_grid(args), v(_plot_grid(args)))


def _qes_doc(args, params, block):
    spec = qes.solve_block(block)
    records = []
    for lv in spec:
        p = lv.poly.coeffs
        resid = np.linalg.norm(block.matrix @ p - lv.block_eigenvalue * p) / np.linalg.norm(p)
        records.append({
            "energy_re": cnum(lv.energy)[0], "energy_im": cnum(lv.energy)[1],
            "residual": num(resid), "method": "qes-block",
            "multiplicity": lv.algebraic_multiplicity,
            "geometric_multiplicity": lv.geometric_multiplicity,
        })
    defaults = {"cluster_rtol": 1e-6, "pt_pairing_tol": qes.PT_PAIRING_TOL, "eps": args.eps}
    doc = _doc(args, params, defaults, "ok", records)
    doc["block"] = {
        "dimension": block.dim,
        "variable": block.variable,
        "energy_map": {"slope": num(block.slope), "intercept": num(block.intercept)},
        "charpoly": coeff_list(block.charpoly()),
        "pt_paired": spec.pt_paired,
        "all_real": spec.all_real,
    }
    doc["polynomials"] = [coeff_list(lv.poly.coeffs) for lv in spec]

    def plot():
        x = _plot_grid(args)
        v = block.potential(args.eps)
        vals = v(x)
        rows = []
        for k, lv in enumerate(spec):
            rows += _plot_rows(x, vals, qes.qes_wavefunction(lv, block, x, args.eps), k)
        return rows

    return doc, plot


def cmd_qes_quartic(args):
    params = {"j": args.j, "B": args.B}
    return _qes_doc(args, params, qes.quartic_block(args.j, args.B))


def cmd_qes_sextic(args):
    params = {"j": args.j, "a": args.a, "gamma": args.gamma}
    return _qes_doc(args, params, qes.sextic_block(args.j, args.a, args.gamma))


def _w_params(args):
    keys = ("family", "omega", "beta", "f", "g", "A", "rho", "a", "gamma", "eps")
    return {k: getattr(args, k) for k in keys}


def cmd_susy_partners(args):
    w, extra = superpotential_from_args(args)
    vm, vp = susy.partners(w)
    gs = susy.ground_state(w)
    doc = _doc(args, _w_params(args), {"equal_rtol": 1e-10}, "ok",
               [{"partner": "minus", "eps": num(vm.shift), "degree_num": vm.num.degree,
                 "degree_den": vm.den.degree},
                {"partner": "plus", "eps": num(vp.shift), "degree_num": vp.num.degree,
                 "degree_den": vp.den.degree}])
    doc["superpotential"] = expr_doc(w.expr)
    doc["v_minus"] = expr_doc(vm)
    doc["v_plus"] = expr_doc(vp)
    doc["derived"] = extra

    def plot():
        x = _plot_grid(args)
        psi = gs(x)
        return _plot_rows(x, evaluate(vm, x), psi, 0)

    return doc, plot


def _check(name, value, tol):
    return {"check": name, "value": num(value), "tolerance": num(tol), "passed": bool(value <= tol)}


def cmd_susy_verify(args):
    w, extra = superpotential_from_args(args)
    vm, vp = susy.partners(w)
    x = np.linspace(-4.0, 4.0, 4001)
    checks = []
    if w.shift != 0 or w.barrier == 0:
        checks.append(_check("pt_odd_defect_W", susy.pt_odd_defect(w, x), PT_TOL))
        checks.append(_check("pt_defect_V_minus", pot.pt_check(vm, x), PT_TOL))
        checks.append(_check("pt_defect_V_plus", pot.pt_check(vp, x), PT_TOL))
    if args.family == "quartic-rational":
        f, beta = (extra["f"], extra["beta"]) if extra else (args.f, args.beta)
        r1, r2 = susy.reality_residuals(f, beta, args.g)
        checks.append(_check("reality_residual", max(abs(r1), abs(r2)), 1e-8))
        checks.append(_check("max_im_V_minus", float(np.max(np.abs(evaluate(vm, x).imag))), 1e-8))
        try:
            _, dev = susy.acdi_check(w, x)
            checks.append(_check("acdi_deviation", dev, 1e-8))
        except DomainError as exc:
            checks.append({"check": "acdi_deviation", "value": None, "tolerance": 1e-8,
                           "passed": False, "error": str(exc)})
    if args.family == "sextic-barrier-excited":
        target = pot.build_barrier_sextic(pot.SexticBarrierParams(args.a, args.gamma, 0.5), w.shift).expr
        try:
            off = susy.offset_between(vm, target)
            checks.append({"check": "constant_offset_to_barrier_sextic_j_half",
                           "value": num(off.real), "value_im": num(off.imag),
                           "tolerance": None, "passed": True})
        except NotConstantDifference as exc:
            checks.append({"check": "constant_offset_to_barrier_sextic_j_half", "value": None,
                           "tolerance": None, "passed": False, "error": str(exc)})
    if args.family == "sextic-barrier":
        checks += _isospectral_checks(args, w, vm, vp)
    status = "ok" if all(c["passed"] for c in checks) else "verification-failed"
    defaults = {"grid": [-4.0, 4.0, 4001], "pt_tol": PT_TOL, "iso_tol": VERIFY_TOL}
    doc = _doc(args, _w_params(args), defaults, status, checks)
    doc["derived"] = extra
    if status != "ok":
        raise DomainOutcome(doc)
    return doc, lambda: _plot_rows(_plot_grid(args), evaluate(vm, _plot_grid(args)),
                                   susy.ground_state(w)(_plot_grid(args)), 0)


def _isospectral_checks(args, w, vm, vp):
    """spec(V-) = {0} U spec(V+), compared over the lowest levels by shooting."""
    n = args.levels
    eps = w.shift if w.shift != 0 else 1.0
    a, g = args.a, args.gamma
    vmin = pot.PotentialSpec(vm, "partner-minus").with_shift(eps)
    vplus = pot.PotentialSpec(vp, "partner-plus")
    vplus = vplus.with_shift(0.0 if vplus.expr.den.degree == 0 else eps)
    hi = 1.0
    lm, lp = [], []
    while (len(lm) < n or len(lp) < n - 1) and hi < 1e4:
        hi *= 4.0
        lm = [r.E for r in shoot.scan(vmin, shoot.default_contour(vmin), (-abs(a) - 10.0, hi), 40)]
        lp = [r.E for r in shoot.scan(vplus, shoot.default_contour(vplus), (-abs(a) - 10.0, hi), 40)]
    if len(lm) < n or len(lp) < n - 1:
        return [{"check": "isospectrality", "value": None, "tolerance": VERIFY_TOL, "passed": False,
                 "error": "not enough levels found"}]
    expected = np.array([0.0] + lp[: n - 1])
    dev = float(np.max(np.abs(np.array(lm[:n]) - expected)))
    return [_check("isospectrality_max_deviation", dev, VERIFY_TOL)]


def cmd_solve(args):
    v = potential_from_args(args)
    c = _contour(args, v)
    params = {"potential": args.potential, "coeffs": args.coeffs, "j": args.j, "B": args.B,
              "a": args.a, "gamma": args.gamma, "window": args.window, "method": args.method}
    defaults = {"eps": c.eps, "L": c.L, "N": c.N, "x_match": c.x_match, "seeds": args.seeds,
                "newton_tol": shoot.NEWTON_TOL, "dedupe_tol": shoot.DEDUPE_TOL,
                "renorm_every": shoot.RENORM_EVERY, "fd_points": args.fd_points,
                "imag_window": args.imag_window}
    records, results = [], []
    if args.method in ("shoot", "both"):
        results = shoot.scan(v, c, tuple(args.window), args.seeds,
                             imag_window=args.imag_window, n_imag=args.imag_seeds if args.imag_window else 0,
                             workers=args.threads)
        for r in results:
            records.append({"energy_re": cnum(r.E)[0], "energy_im": cnum(r.E)[1],
                            "residual": num(r.residual), "method": "shoot", "multiplicity": 1})
    if args.method in ("fd", "both"):
        lo, hi = args.window
        vals = shoot.fd_spectrum(v, c, args.fd_levels, args.fd_points)
        for e in vals:
            if lo <= e.real <= hi:
                records.append({"energy_re": cnum(e)[0], "energy_im": cnum(e)[1],
                                "residual": None, "method": "fd", "multiplicity": 1})
    status = "ok" if records else "no-eigenvalues"
    doc = _doc(args, params, defaults, status, records)
    if not records:
        raise DomainOutcome(doc)

    def plot():
        rows = []
        vals = v.with_shift(c.eps)(c.grid)
        stride = max(1, c.grid.size // 2001)
        for k, r in enumerate(results):
            rows += _plot_rows(c.grid[::stride], vals[::stride], r.psi[::stride], k)
        return rows

    return doc, plot


def cmd_pt_check(args):
    v = potential_from_args(args)
    x = np.linspace(-args.half_width, args.half_width, args.points)
    d = pot.pt_check(v, x)
    params = {"potential": args.potential, "coeffs": args.coeffs, "j": args.j, "B": args.B,
              "a": args.a, "gamma": args.gamma, "eps": v.eps}
    defaults = {"half_width": args.half_width, "points": args.points, "tolerance": PT_TOL}
    ok = d <= PT_TOL
    doc = _doc(args, params, defaults, "ok" if ok else "not-pt-symmetric",
               [{"pt_defect": num(d), "pt_symmetric": bool(ok)}])
    if not ok:
        raise DomainOutcome(doc)
    return doc, lambda: _plot_rows(x, v(x))


COMMANDS = {
    "reduce-quartic": cmd_reduce_quartic,
    "reduce-sextic": cmd_reduce_sextic,
    "qes-quartic": cmd_qes_quartic,
    "qes-sextic": cmd_qes_sextic,
    "susy-partners": cmd_susy_partners,
    "susy-verify": cmd_susy_verify,
    "solve": cmd_solve,
    "pt-check": cmd_pt_check,
}


# output -------------------------------------------------------------------


def _clean(v):
    if isinstance(v, float):
        return num(v)
    if isinstance(v, (list, tuple)):
        return [_clean(u) for u in v]
    if isinstance(v, dict):
        return {k: _clean(u) for k, u in v.items()}
    if isinstance(v, np.generic):
        return _clean(v.item())
    return v


def _doc(args, params, defaults, status, records):
    return {"command": args.command, "status": status, "parameters": _clean(params),
            "defaults": _clean(defaults), "records": records}


def _csv_text(rows):
    buf = io.StringIO()
    if rows:
        fields = list(rows[0])
        for r in rows[1:]:
            fields += [k for k in r if k not in fields]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else _csv_value(r.get(k))) for k in fields})
    return buf.getvalue()


def _csv_value(v):
    if isinstance(v, float):
        return f"{v:.{DIGITS}g}"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return v


def render(doc, fmt) -> str:
    if fmt == "csv":
        return _csv_text(doc["records"])
    return json.dumps(_clean(doc), indent=2) + "\n"


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    plot = None
    try:
        doc, plot = COMMANDS[args.command](args)
        code = 0
    except DomainOutcome as out:
        doc, code = out.doc, 1
    except (NoRoot, DomainError) as exc:
        print(f"ptqes {args.command}: {exc}", file=sys.stderr)
        return 1
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ptqes {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, *NUMERICAL_ERRORS) as exc:
        print(f"ptqes {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _write(render(doc, args.format), args.output)
    if args.emit_plot_data and plot is not None:
        _write(_csv_text(plot()), args.emit_plot_data)
    return code


def main() -> None:
    sys.exit(run())
