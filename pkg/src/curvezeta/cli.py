"""Command-line front end: ``curvezeta <subcommand> ...``.

Exit status is 0 when every check of the subcommand passes, 1 when one fails
(the failing invariant is named) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from . import adelechar as ac
from . import bombieri as bb
from . import checks
from . import explicit as ex
from . import nevanlinna as nv
from . import zeta as zt
from .catalog import CatalogEntry, load_catalog, resolve
from .curve import DEFAULT_GUARD, degree_one_exists, hasse_weil_ok
from .errors import CurveZetaError
from .ff import make_field
from .polyarith import monic_irreducibles
from .twovar import (
    pic_profile,
    profile_g2,
    specialization_check,
    twovar_functional_check,
    twovar_zeta,
)


class Report:
    def __init__(self, operation: str, curve: str | None, inputs: dict):
        self.operation = operation
        self.curve = curve
        self.inputs = inputs
        self.outputs: dict = {}
        self.failed: list[str] = []
        self.timings: dict[str, float] = {}
        self._t0 = time.perf_counter()

    def check(self, name: str, ok: bool) -> bool:
        if not ok:
            self.failed.append(name)
        return ok

    def as_dict(self) -> dict:
        self.timings.setdefault("total", time.perf_counter() - self._t0)
        return {
            "curve": self.curve,
            "operation": self.operation,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "verdict": "FAIL" if self.failed else "PASS",
            "failed": self.failed,
            "timings": self.timings,
        }


def _runs(row) -> str:
    out = []
    for v in row:
        if out and out[-1][0] == v:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return " ".join(f"{v}*{k}" if k > 1 else str(v) for v, k in out)


def _fmt(v) -> str:
    if isinstance(v, list) and v and all(isinstance(r, list) for r in v):
        return "; ".join(_runs(r) for r in v)
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list) and len(v) > 12:
        return "[" + ", ".join(map(str, v[:12])) + ", ...]"
    return str(v)


def _emit(rep: Report, as_json: bool, out=None) -> int:
    out = out or sys.stdout
    d = rep.as_dict()
    if as_json:
        json.dump(d, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        head = rep.operation + (f" {rep.curve}" if rep.curve else "")
        out.write(head + "\n")
        for k, v in rep.outputs.items():
            if k == "lines":
                for line in v:
                    out.write(f"  {line}\n")
            elif k != "results":
                out.write(f"  {k}: {_fmt(v)}\n")
        verdict = d["verdict"] + (f" (failed: {', '.join(rep.failed)})" if rep.failed else "")
        out.write(f"  verdict: {verdict}\n")
    return 1 if rep.failed else 0


# -- subcommands -------------------------------------------------------------------------------

def _data(entry: CatalogEntry, args, nmax: int = checks.NMAX) -> checks.CurveData:
    return checks.curve_data(entry, budget=min(args.guard, checks.ENUM_BUDGET), nmax=nmax)


def cmd_count(entry: CatalogEntry, args, rep: Report) -> None:
    C = entry.build()
    d = _data(entry, args, max(args.n, checks.NMAX))
    counts = d.counts[: args.n]
    rep.outputs["N"] = counts
    rep.outputs["enumerated_through"] = min(d.enumerated, args.n)
    rep.outputs["genus"] = C.genus
    if entry.expect_N:
        k = min(len(entry.expect_N), args.n)
        rep.check("expected counts", counts[:k] == entry.expect_N[:k])
    rep.check("Hasse-Weil bound", all(hasse_weil_ok(C, n, N) for n, N in enumerate(counts, 1)))


def cmd_places(entry: CatalogEntry, args, rep: Report) -> None:
    d = _data(entry, args, max(args.max_degree, checks.NMAX))
    T = d.places
    rep.outputs["places"] = {str(k): T.a[k] for k in range(1, args.max_degree + 1)}
    rep.outputs["enumerated_through"] = min(d.enumerated, args.max_degree)
    rep.check("N(n) = sum d a_d", T.counts()[: args.max_degree] == d.counts[: args.max_degree])
    rep.check("degree one divisor exists", degree_one_exists(T))


def cmd_zeta(entry: CatalogEntry, args, rep: Report) -> None:
    d = _data(entry, args)
    L = d.L
    Z = zt.ZetaRat(L)
    rep.outputs["L"] = list(L.coeffs)
    rep.outputs["L_text"] = str(L)
    rep.outputs["genus"] = L.g
    rep.outputs["h"] = zt.class_number(L)
    rep.outputs["residue_s1"] = zt.residue_at_pole(Z, "s=1")
    rep.outputs["residue_s0"] = zt.residue_at_pole(Z, "s=0")
    fe = zt.functional_equation_check(L)
    rep.outputs["functional_equation"] = "OK" if fe else "FAIL"
    rep.check("functional equation", fe)
    rep.check("log-derivative identity", zt.log_derivative_check(L, checks.NMAX, counts=d.counts))
    if entry.expect_L is not None:
        rep.check("expected L", list(L.coeffs) == entry.expect_L)
    if entry.expect_h is not None:
        rep.check("expected h", zt.class_number(L) == entry.expect_h)


def cmd_rh(entry: CatalogEntry, args, rep: Report) -> None:
    L = _data(entry, args).L
    dev = zt.rh_check_numeric(L)
    exact = zt.rh_check_exact(L)
    rep.outputs["L"] = list(L.coeffs)
    rep.outputs["abs_roots"] = sorted(abs(w) for w in zt.reciprocal_roots(L))
    rep.outputs["sqrt_q"] = math.sqrt(L.q)
    rep.outputs["deviation"] = dev
    rep.outputs["exact"] = "PASS" if exact else "FAIL"
    rep.check("exact real Weil polynomial test", exact)
    rep.check(f"numeric deviation < {args.tol:g}", dev < args.tol)


def cmd_psi(entry: CatalogEntry, args, rep: Report) -> None:
    d = _data(entry, args)
    q = d.curve.q
    x = Fraction(args.x)
    M = ex.floor_log(x, q)
    direct = ex.psi_direct(d.places, q, x) if M <= d.places.B else None
    closed = ex.psi_closed(d.L, x)
    rep.outputs["M"] = M
    rep.outputs["psi_direct"] = direct
    rep.outputs["psi_closed"] = closed
    if direct is not None:
        rep.check("psi direct = closed form", direct == closed)
    rep.check("RH bound on psi", ex.rh_psi_bound_ok(d.L, x))
    if args.series:
        val = ex.psi_explicit_series(d.L, float(x), args.series)
        rep.outputs["psi_series"] = val
        rep.outputs["series_error"] = abs(val - closed)
        rep.check(f"series within {args.tol:g}", abs(val - closed) < args.tol)


def _profile_for(entry: CatalogEntry, d: checks.CurveData):
    P = entry.pic_profile()
    if P is not None:
        return P, "catalog"
    g, h = d.L.g, zt.class_number(d.L)
    if g <= 1:
        return pic_profile(g, h), "genus"
    if g == 2:
        return profile_g2(h, d.counts[0]), "h and N(1)"
    return pic_profile(g, h), "genus"  # raises UnsupportedGenus


def cmd_twovar(entry: CatalogEntry, args, rep: Report) -> None:
    d = _data(entry, args)
    P, source = _profile_for(entry, d)
    Z = twovar_zeta(P)
    rep.outputs["profile_source"] = source
    rep.outputs["profile"] = [list(r) for r in P.table]
    rep.outputs["zeta"] = str(Z.as_expr())
    rep.check("functional equation u -> 1/(y u)", twovar_functional_check(Z))
    rep.check("specializes to zeta_C at t = 1", specialization_check(P, d.L))


def _field_arg(text: str):
    p, _, f = text.partition("^")
    return make_field(int(p), int(f or 1))


def cmd_chars(args, rep: Report) -> None:
    F = _field_arg(args.field)
    bad = ac.chi_global_trials(F, args.trials, args.seed)
    rep.outputs["field"] = F.q
    rep.outputs["trials"] = args.trials
    rep.outputs["nontrivial_products"] = len(bad)
    rep.check("global character trivial", not bad)
    tested = 0
    for deg in range(1, args.max_degree + 1):
        for P in monic_irreducibles(F, deg):
            tested += 1
            if not rep.check(f"trace delta for {P}", ac.trace_delta_check(P)):
                break
    rep.outputs["trace_delta_tested"] = tested
    if F.q ** 4 * F.q**2 <= ac.QUOTIENT_LIMIT:
        T = ac.UniPoly.x(F)
        for name, place in (("T", T), ("inf", ac.INF)):
            ok = ac.finite_quotient_fourier(F, place, 2)
            rep.outputs[f"self_dual_{name}"] = ok
            rep.check(f"self-duality at {name}", ok)


def cmd_bombieri(entry: CatalogEntry, args, rep: Report) -> None:
    C = entry.build()
    P = bb.choose_parameters(C.q, C.genus)
    S = bb.stepanov_search(C, P)
    rep.outputs["params"] = list(P.as_tuple())
    rep.outputs["kernel_found"] = any(not b.is_zero() for b in S.b)
    r = bb.derive_bound(C, S)
    rep.outputs["bound"] = r.bound
    rep.outputs["N1"] = r.n1
    rep.outputs["pole_order"] = r.pole_order
    rep.outputs["pole_bound"] = r.pole_bound
    rep.outputs["min_multiplicity"] = r.min_multiplicity
    rep.check("kernel vector nonzero", rep.outputs["kernel_found"])
    rep.check("N(1) <= bound", r.n1 <= r.bound)
    if args.injectivity:
        rep.check("f -> f|phi injective", bb.injectivity_check(C, P, seed=args.seed))


def cmd_jensen(args, rep: Report) -> None:
    worst_psi = max(nv.psi_identity_check(x)[2] for x in range(2, 201))
    rep.outputs["psi_identity_max_diff"] = worst_psi
    rep.check("N_f(0, 1) = psi(x) on [2, 200]", worst_psi < 1e-9)
    corpus = nv.random_corpus(args.corpus, args.seed)
    jen = max(nv.jensen_check(f, r) for f, r in corpus)
    pj = max(nv.rational_pj_check(f, r) for f, r in corpus)
    rep.outputs["corpus"] = len(corpus)
    rep.outputs["jensen_max_residual"] = jen
    rep.outputs["pj_max_residual"] = pj
    rep.check("Jensen residual < 1e-6", jen < 1e-6)
    rep.check("rational Poisson-Jensen residual < 1e-6", pj < 1e-6)


def cmd_selftest(args, rep: Report, catalog) -> None:
    only = set(args.only) if args.only else None
    results = checks.run_all(catalog, seed=args.seed, only=only)
    rep.outputs["lines"] = [r.line() for r in results]
    rep.outputs["results"] = [
        {"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results
    ]
    for r in results:
        rep.timings[f"criterion_{r.id}"] = r.seconds
        rep.check(f"{r.id} {r.name}", r.passed)


CURVE_COMMANDS = {
    "count": cmd_count,
    "places": cmd_places,
    "zeta": cmd_zeta,
    "rh": cmd_rh,
    "psi": cmd_psi,
    "twovar": cmd_twovar,
    "bombieri": cmd_bombieri,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--catalog", metavar="FILE", help="curve catalog (default: the shipped one)")
    common.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="largest q^n to enumerate")

    ap = argparse.ArgumentParser(prog="curvezeta", description="Zeta functions of curves over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def curve_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("curve", help="NAME or catalog/NAME")
        return p

    curve_cmd("count", "point counts N(1..n)").add_argument("--n", type=int, default=1)
    curve_cmd("places", "places of each degree").add_argument("--max-degree", type=int, default=6)
    curve_cmd("zeta", "L-polynomial, class number, residues")
    curve_cmd("rh", "Riemann hypothesis, numeric and exact").add_argument("--tol", type=float, default=1e-9)
    p = curve_cmd("psi", "psi_C(x): direct, closed form, explicit series")
    p.add_argument("--x", required=True, help="real x >= 1 (decimal or fraction)")
    p.add_argument("--series", type=int, default=0, metavar="N", help="explicit-series terms")
    p.add_argument("--tol", type=float, default=1e-2)
    curve_cmd("twovar", "two-variable zeta")
    curve_cmd("bombieri", "Stepanov-Bombieri bound").add_argument(
        "--injectivity", action="store_true", help="also check f -> f|phi is injective")
    p = sub.add_parser("chars", parents=[common], help="additive character identities")
    p.add_argument("--field", required=True, help="p or p^f")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-degree", type=int, default=3)
    sub.add_parser("jensen", parents=[common], help="Jensen and psi identities").add_argument(
        "--corpus", type=int, default=50, help="number of random rational functions")
    sub.add_parser("selftest", parents=[common], help="full acceptance suite").add_argument(
        "--only", type=int, nargs="+", metavar="ID", help="criterion ids to run")
    return ap


def _positive(ap, args):
    for name in ("n", "max_degree", "trials", "corpus", "guard"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            ap.error(f"--{name.replace('_', '-')} must be positive")
    if getattr(args, "series", 0) < 0:
        ap.error("--series must be nonnegative")


def run(argv: list[str] | None = None, out=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        _positive(ap, args)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        catalog = load_catalog(args.catalog)
        entry = resolve(args.curve, catalog) if args.command in CURVE_COMMANDS else None
        if args.command == "psi":
            Fraction(args.x)
        if args.command == "chars":
            _field_arg(args.field)
    except (CurveZetaError, OSError, ValueError) as e:
        print(f"curvezeta: error: {e}", file=sys.stderr)
        return 2
    inputs = {k: v for k, v in vars(args).items() if k not in ("json", "command", "curve")}
    rep = Report(args.command, entry.name if entry else None, inputs)
    try:
        if entry is not None:
            CURVE_COMMANDS[args.command](entry, args, rep)
        elif args.command == "chars":
            cmd_chars(args, rep)
        elif args.command == "jensen":
            cmd_jensen(args, rep)
        else:
            cmd_selftest(args, rep, catalog)
    except CurveZetaError as e:
        rep.outputs["error"] = f"{type(e).__name__}: {e}"
        rep.check(type(e).__name__, False)
    return _emit(rep, args.json, out)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
