"""Command-line experiment runner.

CSV output starts with a provenance row ``artifact,<name>,c,<c>,N,<N>,eps,<eps>``
followed by a column header. Floats are written with 17 significant digits.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import acceptance, studies
from .birkhoff import build_birkhoff
from .cardinal import diff_operators
from .collocation import model_problem, solve_npcol, solve_pcol, solve_ppcol
from .core import build_basis, lambda_n
from .elements import (Mesh1D, helmholtz_piecewise_constant, helmholtz_piecewise_smooth,
                       solve_prolate_element, solve_sem)
from .errors import PswfError
from .kr_rule import select_n
from .quadrature import prolate_grid

DEFAULT_EPS = 1e-14


def parse_c(text):
    """Bandwidth argument; ``"120pi"`` means ``120 * pi``."""
    t = text.strip().lower()
    if t.endswith("pi"):
        head = t[:-2]
        return (float(head) if head else 1.0) * math.pi
    return float(t)


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return {"real": obj.real, "imag": obj.imag}
    return obj


def render_csv(artifact, columns, rows, c="", N="", eps=""):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["artifact", artifact, "c", _fmt(c), "N", _fmt(N), "eps", _fmt(eps)])
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(k)) for k in columns])
    return buf.getvalue()


def render_json(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ------------------------------------------------------------- subcommands

def cmd_grid(a):
    basis = build_basis(a.c, a.N)
    g = prolate_grid(basis)
    rows = [{"j": j, "x": x, "w": w} for j, (x, w) in enumerate(zip(g.nodes, g.weights))]
    _emit(render_csv("grid", ["j", "x", "w"], rows, a.c, a.N), a.out)


def cmd_diffmat(a):
    basis = build_basis(a.c, a.N)
    ops = diff_operators(basis, prolate_grid(basis), rational=a.kind.startswith("Dh"))
    D = getattr(ops, a.kind)
    cols = [f"col{k}" for k in range(D.shape[1])]
    rows = [dict(zip(cols, row)) for row in D]
    _emit(render_csv(a.kind, cols, rows, a.c, a.N), a.out)


def cmd_krrule(a):
    if a.table1:
        cols = ["c", "eps", "n_star", "x_root", "nu", "lambda", "q", "c_transition"]
        _emit(render_csv("table1", cols, studies.table1_rows(a.eps), eps=a.eps), a.out)
        return
    if a.c is None:
        raise SystemExit("krrule needs --c or --table1")
    pair = select_n(a.c, a.eps)
    lam = lambda_n(build_basis(a.c, pair.n_star), pair.n_star)
    _emit(render_json({"c": a.c, "eps": a.eps, "n_star": pair.n_star,
                       "nu": pair.nu_at_n_star, "lambda_estimate": lam}), a.out)


def cmd_bvp(a):
    if a.table2:
        cols = ["N", "c", "scheme", "cond", "max_error", "steps", "iterative_error"]
        _emit(render_csv("table2", cols, studies.table2_rows(), eps=""), a.out)
        return
    if a.N is None:
        raise SystemExit("bvp needs --N or --table2")
    c = a.N / 2.0 if a.c is None else a.c
    basis = build_basis(c, a.N)
    grid = prolate_grid(basis)
    solver = "iterative" if a.iterative else "direct"
    prob = model_problem()
    if a.scheme == "npcol":
        rep = solve_npcol(prob, basis, grid, build_birkhoff(basis, grid), solver)
    else:
        ops = diff_operators(basis, grid, rational=False)
        if a.scheme == "pcol":
            rep = solve_pcol(prob, basis, grid, ops, solver)
        else:
            rep = solve_ppcol(prob, basis, grid, ops, build_birkhoff(basis, grid), solver)
    d = rep.to_dict()
    d.update(c=c, N=a.N)
    _emit(render_json(d), a.out)


def _helmholtz_setup(case, k):
    if case == "piecewise-const":
        return helmholtz_piecewise_constant(k), 2
    return helmholtz_piecewise_smooth(k), 4


def cmd_helmholtz(a):
    hp, M = _helmholtz_setup(a.case, a.k)
    prob = hp.as_element_problem()
    N = a.N if a.N is not None else select_n(a.bandwidth, a.eps).n_star
    basis = build_basis(a.bandwidth, N)
    grid = prolate_grid(basis)
    rep = solve_prolate_element(prob, Mesh1D(hp.a, hp.b, M), basis, grid,
                                build_birkhoff(basis, grid))
    xs = np.linspace(hp.a, hp.b, a.samples)
    u = rep.evaluate(xs)
    report = {"case": a.case, "k": a.k, "c": a.bandwidth, "N": N, "elements": M,
              "dofs": rep.dofs, "max_error": rep.max_error, "cond": rep.cond}
    sys.stdout.write(render_json(report))
    if a.out:
        rows = [{"x": x, "u_real": v.real, "u_imag": v.imag} for x, v in zip(xs, u)]
        _emit(render_csv(f"helmholtz-{a.case}", ["x", "u_real", "u_imag"], rows,
                         a.bandwidth, N, a.eps), a.out)


def cmd_hp_demo(a):
    rows = studies.table3_rows(quadrature=a.quadrature)
    _emit(render_csv("table3", ["family", "N", "c", "M", "h", "max_error"], rows), a.out)


def cmd_project(a):
    if a.target != "one":
        raise SystemExit("only --target one is available")
    rows = studies.projection_rows(a.c, a.N, a.M)
    _emit(render_csv("projection", ["c", "N", "M", "l2_error"], rows, a.c, a.N), a.out)


def _eig_rows(rep):
    return [{"j": j + 1, "prolate": e, "rational": r, "legendre": l}
            for j, (e, r, l) in enumerate(zip(rep.errors, rep.rational_errors,
                                              rep.legendre_errors))]


def _eig_csv(rep, eps):
    return render_csv(f"eig-{rep.operator}", ["j", "prolate", "rational", "legendre"],
                      _eig_rows(rep), rep.c, rep.N, eps)


def cmd_eig_study(a):
    rep = studies.run_eig_study(a.operator, a.c, a.eps, a.N, a.pairing)
    sys.stderr.write(f"{a.operator}: N={rep.N} accurate prolate={rep.count} "
                     f"rational={rep.rational_count} legendre={rep.legendre_count}\n")
    _emit(_eig_csv(rep, a.eps), a.out)


def cmd_extreme_eigs(a):
    rows = studies.run_extreme_eigs(a.N_list)
    cols = ["N", "c", "prolate_max", "prolate_min", "rational_max", "rational_min",
            "legendre_max", "legendre_min"]
    if len(rows) > 1:
        Ns = [r["N"] for r in rows]
        sp = studies.loglog_slope(Ns, [r["prolate_max"] for r in rows])
        sl = studies.loglog_slope(Ns, [r["legendre_max"] for r in rows])
        sys.stderr.write(f"growth slope of |lambda|_max: prolate {sp:.3f}, legendre {sl:.3f}\n")
        if not sp < sl:
            sys.stderr.write("warning: prolate growth is not slower than Legendre\n")
    _emit(render_csv("extreme-eigs", cols, rows), a.out)


def run_all(outdir):
    """Regenerate every table and the acceptance summary into ``outdir``."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)

    t1 = studies.table1_rows()
    (out / "table1.csv").write_text(render_csv(
        "table1", ["c", "eps", "n_star", "x_root", "nu", "lambda", "q", "c_transition"],
        t1, eps=DEFAULT_EPS))

    t2 = studies.table2_rows()
    (out / "table2.csv").write_text(render_csv(
        "table2", ["N", "c", "scheme", "cond", "max_error", "steps", "iterative_error"], t2))

    t3 = studies.table3_rows()
    (out / "table3.csv").write_text(render_csv(
        "table3", ["family", "N", "c", "M", "h", "max_error"], t3))

    eig = {}
    for op in ("laplacian", "bessel"):
        eig[op] = studies.run_eig_study(op, 120.0 * math.pi, DEFAULT_EPS)
        (out / f"eig_{op}.csv").write_text(_eig_csv(eig[op], DEFAULT_EPS))

    f4 = studies.fig4_rows()
    (out / "fig4_envelope.csv").write_text(render_csv(
        "fig4-envelope", ["N", "c", "modal_re_min", "modal_re_max", "modal_dist",
                          "rational_re_min", "rational_re_max", "rational_dist"], f4))

    k60 = studies.helmholtz_k60_rows()
    (out / "helmholtz_k60.csv").write_text(render_csv(
        "helmholtz-k60", ["k", "bandwidth", "N", "dofs", "prolate_error", "legendre_error"],
        k60, eps=DEFAULT_EPS))

    k160 = studies.helmholtz_k160()
    rows = [{"x": x, "coarse_real": u.real, "coarse_imag": u.imag,
             "fine_real": v.real, "fine_imag": v.imag,
             "legendre_real": w.real, "legendre_imag": w.imag}
            for x, u, v, w in zip(k160["x"], k160["coarse"], k160["fine"], k160["legendre"])]
    (out / "helmholtz_k160.csv").write_text(render_csv(
        "helmholtz-k160", list(rows[0]), rows))

    results = [
        acceptance.check_table1(),
        acceptance.check_laplacian(eig["laplacian"]),
        acceptance.check_bessel(eig["bessel"]),
        acceptance.check_table2(t2),
        acceptance.check_slope(),
        acceptance.check_h_nonconvergence(),
        acceptance.check_helmholtz_k60(k60),
        acceptance.check_helmholtz_k160(k160),
        acceptance.check_properties(),
    ]
    summary = {
        "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                      "measured": r.measured} for r in results],
        "passed": sum(r.passed for r in results),
        "total": len(results),
    }
    (out / "summary.json").write_text(render_json(summary))
    return results


def cmd_run_all(a):
    results = run_all(a.out or "results")
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


# ------------------------------------------------------------------ parser

def build_parser():
    ap = argparse.ArgumentParser(prog="pswfkit", description="Prolate spectral toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        return p

    p = add("grid", cmd_grid, "prolate-Lobatto nodes and weights")
    p.add_argument("--c", type=parse_c, required=True)
    p.add_argument("--N", type=int, required=True)

    p = add("diffmat", cmd_diffmat, "differentiation matrix")
    p.add_argument("--c", type=parse_c, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--kind", choices=("D1", "D2", "Dh1", "Dh2"), default="D1")

    p = add("krrule", cmd_krrule, "bandwidth to N pairing rule")
    p.add_argument("--c", type=parse_c)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--table1", action="store_true")

    p = add("bvp", cmd_bvp, "collocation solve of the model problem")
    p.add_argument("--scheme", choices=("pcol", "ppcol", "npcol"), default="npcol")
    p.add_argument("--c", type=parse_c, help="default N/2")
    p.add_argument("--N", type=int)
    p.add_argument("--iterative", action="store_true")
    p.add_argument("--table2", action="store_true")

    p = add("helmholtz", cmd_helmholtz, "prolate-element Helmholtz solve")
    p.add_argument("--case", choices=("piecewise-const", "piecewise-smooth"),
                   default="piecewise-const")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--bandwidth", type=parse_c, required=True)
    p.add_argument("--N", type=int, help="override the rule-selected N")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--samples", type=int, default=1000)

    p = add("hp-demo", cmd_hp_demo, "h-refinement table for prolate and Legendre elements")
    p.add_argument("--quadrature", choices=("pl", "gauss"), default="pl")

    p = add("project", cmd_project, "broken L2 projection plateau")
    p.add_argument("--target", default="one")
    p.add_argument("--c", type=parse_c, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--M", type=_int_list, default=[2, 4, 8, 16])

    p = add("eig-study", cmd_eig_study, "eigenvalue resolution study")
    p.add_argument("--operator", choices=("laplacian", "bessel"), default="laplacian")
    p.add_argument("--c", type=parse_c, default=120.0 * math.pi)
    p.add_argument("--N", type=int)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--pairing", choices=("rank", "nearest"), default="rank")

    p = add("extreme-eigs", cmd_extreme_eigs, "extreme eigenvalues with c = N/2")
    p.add_argument("--N", dest="N_list", type=_int_list, default=[16, 32, 64, 128])

    p = add("run-all", cmd_run_all, "regenerate every table and the acceptance summary")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        rc = args.func(args)
    except PswfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
