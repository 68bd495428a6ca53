"""Command-line front end.

Every subcommand prints one artifact (JSON, CSV or plain text) to stdout or
to ``--output``.  JSON artifacts can be fed back through ``--input``; the
command then recomputes them and exits 1 if anything differs.  Usage errors
exit 2 and verification failures exit 1, each with a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import acceptance, chaos, family, montecarlo, numchecks, roots
from .exact import FieldMismatchError, Poly, QuadRational, decode_poly, encode_number, encode_poly

FORMATS = ("json", "csv", "pretty")


class UsageError(Exception):
    pass


class VerificationError(Exception):
    def __init__(self, message: str, details: Any = None, artifact: "Artifact | None" = None):
        super().__init__(message)
        self.details = details
        self.artifact = artifact


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- value helpers -------------------------------------------------------------

def _num(x):
    """JSON form of a number: integers stay integers, other exact values are
    encoded canonically and floats pass through."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else encode_number(x)
    if isinstance(x, QuadRational):
        return _num(x.a) if x.b == 0 else encode_number(x)
    if isinstance(x, float):
        return x
    return str(x)  # high-precision floats keep all digits as text


def _same(a, b) -> bool:
    return json.loads(json.dumps(a)) == json.loads(json.dumps(b))


def _parse_ns(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise UsageError(f"--n expects an integer or a range a..b, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _single_n(args, default: int) -> int:
    if args.n is None:
        return default
    ns = _parse_ns(args.n)
    if len(ns) != 1:
        raise UsageError("this subcommand takes a single --n")
    return ns[0]


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


_POLY_NAME = re.compile(r"(?P<fam>[PHW])(?P<k>\d+)|x\^?(?P<pow>\d+)")


def parse_poly(name: str) -> Poly:
    """``P<n>``, ``H<n>``, ``W<k>``, ``x^k`` or a path to a polynomial JSON file."""
    m = _POLY_NAME.fullmatch(name.strip())
    if m:
        if m.group("pow") is not None:
            return Poly.monomial(int(m.group("pow")))
        k = int(m.group("k"))
        fam = m.group("fam")
        if fam == "P":
            return family.stein_poly(k)
        if fam == "H":
            return family.hermite_poly(k)
        return family.w_poly(k)
    if Path(name).exists():
        return decode_poly(_read_json(name))
    raise UsageError(f"unknown polynomial {name!r}; use P<n>, H<n>, W<k>, x^k or a JSON file")


def parse_element(name: str) -> chaos.SpectralElement:
    """``normal-product``, ``f8``, ``mixture:<t>`` or a path to an element JSON file."""
    if name == "normal-product":
        return chaos.normal_product()
    if name == "f8":
        return chaos.f8_element()
    if name.startswith("mixture:"):
        return chaos.mixture_element(Fraction(name.split(":", 1)[1]))
    if Path(name).exists():
        obj = _read_json(name)
        if isinstance(obj, dict) and "element" in obj:
            obj = obj["element"]
        return chaos.SpectralElement.from_json(obj)
    raise UsageError(f"unknown element {name!r}; use normal-product, f8, mixture:<t> or a JSON file")


def _element_json(elem: chaos.SpectralElement) -> dict:
    return elem.to_json()


# -- artifacts -----------------------------------------------------------------

class Artifact:
    """What a subcommand produced, renderable in each output format."""

    def __init__(self, data, header: Sequence[str] = (), rows: Sequence[Sequence] = (), text: str = ""):
        self.data = data
        self.header = list(header)
        self.rows = [list(r) for r in rows]
        self.text = text

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.data, indent=2) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.header)
            w.writerows(self.rows)
            return buf.getvalue()
        return self.text if self.text.endswith("\n") else self.text + "\n"


def _check_input(args, fresh: Artifact) -> None:
    if args.input is None:
        return
    stored = _read_json(args.input)
    if not _same(stored, fresh.data):
        raise VerificationError(f"{args.input} does not match the recomputed artifact", artifact=fresh)


# -- subcommands ---------------------------------------------------------------

def cmd_polys(args) -> Artifact:
    if args.input is not None:
        stored = _read_json(args.input)
        if not isinstance(stored, list):
            raise UsageError("polys --input expects a family dump (a list)")
        polys = [decode_poly(entry) for entry in stored]
        n_max = len(polys) - 1
    else:
        n_max = _single_n(args, 15)
    build = family.hermite_family if args.family == "hermite" else family.stein_family
    table = build(n_max)
    data = family.family_json(table)
    art = Artifact(
        data,
        ["n", "k", "coeff"],
        [[n, k, str(c)] for n, p in enumerate(table.polys) for k, c in enumerate(p.coeffs)],
        table[n_max].pretty() if args.only else "\n".join(f"P{n}: {p.pretty()}" for n, p in enumerate(table.polys)),
    )
    if args.input is not None:
        bad = [
            {"n": n, "k": k, "given": str(polys[n][k]), "computed": str(table[n][k])}
            for n in range(n_max + 1)
            for k in range(max(polys[n].degree, table[n].degree) + 1)
            if polys[n][k] != table[n][k]
        ]
        if bad:
            raise VerificationError(f"{args.input} disagrees with the generated family", bad, artifact=art)
    return art


def cmd_coeff(args) -> Artifact:
    if args.input is not None:
        stored = _read_json(args.input)
        n_max, args.k = stored["n_max"], stored.get("k")
    else:
        n_max = _single_n(args, 15)
    rec = family.coeff_by_recursion(n_max)
    fam = family.stein_family(n_max)
    bad = [
        (n, k) for n in range(n_max + 1) for k in range(n + 1)
        if not (rec[n][k] == fam.coeff(n, k) == family.coeff_closed_form(n, k))
    ]
    if args.k is not None:
        if not 0 <= args.k <= n_max:
            raise UsageError("need 0 <= --k <= --n")
        rows = [[n_max, args.k, rec[n_max][args.k]]]
    else:
        rows = [[n, k, rec[n][k]] for n in range(n_max + 1) for k in range(n + 1)]
    data = {"n_max": n_max, "k": args.k, "methods_agree": not bad,
            "table": rows[0][2] if args.k is not None else rec}
    text = "\n".join(f"a({n},{k}) = {v}" for n, k, v in rows)
    art = Artifact(data, ["n", "k", "a"], rows, text)
    _check_input(args, art)
    if bad:
        raise VerificationError("coefficient methods disagree", bad, artifact=art)
    return art


def cmd_euler(args) -> Artifact:
    if args.input is not None:
        n = _read_json(args.input)["n"]
    else:
        n = _single_n(args, 0)
    e = family.euler_numbers(n)
    const = family.stein_poly(n)[0] if n % 2 == 0 else None
    data = {"n": n, "value": _num(e[n]), "family_constant_term": None if const is None else _num(const)}
    art = Artifact(data, ["n", "value"], [[n, str(e[n])]], str(e[n]))
    _check_input(args, art)
    if const is not None and const != e[n]:
        raise VerificationError(f"constant term of P{n} is {const}, Euler number is {e[n]}", artifact=art)
    return art


def cmd_genfun(args) -> Artifact:
    if args.input is not None:
        n = _read_json(args.input)["n"]
    else:
        n = _single_n(args, 12)
    coeffs = family.generating_function_coeffs(n)
    res = family.pde_residuals(n)
    pde_ok = all(r.is_zero() for r in res)
    matches = all(coeffs[k] == family.stein_poly(k) for k in range(n + 1))
    data = {
        "n": n,
        "coeffs": [encode_poly(c) for c in coeffs],
        "matches_family": matches,
        "pde_residual_zero_through_order": len(res) - 1 if pde_ok else None,
    }
    text = "\n".join(f"{k}! [t^{k}] = {c.pretty()}" for k, c in enumerate(coeffs))
    text += f"\nmatches family: {matches}; PDE residual zero: {pde_ok}"
    art = Artifact(data, ["n", "k", "coeff"], [[i, k, str(c)] for i, p in enumerate(coeffs) for k, c in enumerate(p.coeffs)], text)
    _check_input(args, art)
    if not (matches and pde_ok):
        raise VerificationError("generating function check failed", data, artifact=art)
    return art


def _element_from_args(args) -> chaos.SpectralElement:
    if args.input is not None:
        obj = _read_json(args.input)
        return chaos.SpectralElement.from_json(obj["element"] if "element" in obj else obj)
    if args.element is None:
        raise UsageError("--element is required")
    return parse_element(args.element)


def cmd_moments(args) -> Artifact:
    elem = _element_from_args(args)
    stored = _read_json(args.input) if args.input is not None else None
    n = stored["n"] if stored and "n" in stored else _single_n(args, 8)
    k = chaos.cumulants(elem, n)
    m = chaos.moments_from_cumulants(k)
    data = {
        "element": _element_json(elem),
        "n": n,
        "cumulants": [_num(v) for v in k],
        "moments": [_num(v) for v in m],
    }
    rows = [[r, str(k[r]), str(m[r])] for r in range(n + 1)]
    text = "\n".join(f"r={r}: kappa={k[r]}  m={m[r]}" for r in range(n + 1))
    art = Artifact(data, ["r", "cumulant", "moment"], rows, text)
    if stored is not None and "moments" in stored:
        _check_input(args, art)
    return art


def cmd_diagnose(args) -> Artifact:
    elem = _element_from_args(args)
    if args.input is not None:
        stored = _read_json(args.input)
        if "report" in stored:
            args.normalize = stored.get("normalized", False)
    rep = chaos.p6_diagnostic(elem, normalize=args.normalize)
    rj = rep.to_json()
    data = {"element": _element_json(elem), "normalized": args.normalize, "report": rj}
    names = ("kappa2", "kappa3", "delta_prime", "expect_p6", "identity_residual", "moment_radicand")
    rows = [[key, str(getattr(rep, key)), rj[key + "_float"]] for key in names]
    rows.append(["bound", rj["bound"], rj["bound"]])
    text = "\n".join(f"{name}: {exact}" for name, exact, _ in rows)
    text += f"\nbound is {rj['bound_label']}"
    art = Artifact(data, ["quantity", "exact", "float"], rows, text)
    if args.input is not None and "report" in stored:
        _check_input(args, art)
    return art


def cmd_steinop(args) -> Artifact:
    elem = _element_from_args(args)
    if elem.lambdas is None:
        raise UsageError("steinop needs an element given by its spectral vector")
    synth = chaos.stein_coefficients(list(elem.lambdas))
    res = chaos.stein_residuals(synth, elem, args.max_j)
    ok = all(r == 0 for r in res)

    def op_json(op):
        return {str(k): encode_poly(v) for k, v in sorted(op.terms.items())}

    data = {
        "element": _element_json(elem),
        "d": synth.d,
        "a": [_num(v) for v in synth.a],
        "b": [_num(v) for v in synth.b],
        "assembled": op_json(synth.assembled),
        "normalized": op_json(synth.normalized),
        "annihilates_up_to": args.max_j if ok else None,
    }
    text = "\n".join([f"a = {[str(v) for v in synth.a]}", f"b = {[str(v) for v in synth.b]}",
                      f"assembled: {synth.assembled!r}", f"normalized: {synth.normalized!r}",
                      f"E[(op x^j)(F)] = 0 for j <= {args.max_j}: {ok}"])
    rows = [[k, p.pretty()] for k, p in sorted(synth.assembled.terms.items())]
    art = Artifact(data, ["derivative_order", "coefficient"], rows, text)
    _check_input(args, art)
    if not ok:
        raise VerificationError("synthesized operator does not annihilate the moments", [str(r) for r in res], artifact=art)
    return art


def cmd_qpoly(args) -> Artifact:
    if args.input is not None:
        stored = _read_json(args.input)
        entries = stored if isinstance(stored, list) else [stored]
        ns = [e["n"] for e in entries]
        grid = len(entries[0].get("grid", [])) or None
    else:
        ns = _parse_ns(args.n) if args.n is not None else [4]
        grid = args.grid
    if grid is not None and grid < 2:
        raise UsageError("--grid needs at least 2 points")
    ts = [Fraction(i, grid - 1) for i in range(grid)] if grid else []
    polys = {n: chaos.mixture_q_poly(n) for n in ns}
    entries = []
    for n, q in polys.items():
        e = {"n": n, "coeffs": [_num(c) for c in q.coeffs], "degree": q.degree,
             "roots_in_open_unit_interval": roots.sturm_count(q, 0, 1)}
        if grid:
            e["grid"] = [[float(t), float(q(t))] for t in ts]
        entries.append(e)
    data = entries[0] if len(entries) == 1 else entries
    if grid:
        header = ["t"] + [f"Q{n}" for n in ns]
        rows = [[float(t)] + [float(polys[n](t)) for n in ns] for t in ts]
    else:
        header = ["n", "k", "coeff"]
        rows = [[n, k, str(c)] for n, q in polys.items() for k, c in enumerate(q.coeffs)]
    text = "\n".join(f"Q{n}(t) = {q.pretty('t')}" for n, q in polys.items())
    art = Artifact(data, header, rows, text)
    _check_input(args, art)
    return art


def _cauchy_bound(p: Poly) -> Fraction:
    lead = p.leading
    return 1 + max((abs(Fraction(c) / lead) for c in p.coeffs[:-1]), default=Fraction(0))


def cmd_roots(args) -> Artifact:
    if args.input is not None:
        stored = _read_json(args.input)
        p = decode_poly(stored["poly"])
        lo, hi = Fraction(stored["lo"]), Fraction(stored["hi"])
        closed = stored["closed"]
        eps = Fraction(stored["width"])
    else:
        if args.poly is None:
            raise UsageError("--poly is required")
        p = parse_poly(args.poly)
        if p.degree < 1:
            raise UsageError("root isolation needs a polynomial of degree >= 1")
        bound = _cauchy_bound(p)
        lo = Fraction(args.lo) if args.lo is not None else -bound
        hi = Fraction(args.hi) if args.hi is not None else bound
        closed = args.closed
        eps = Fraction(args.tol).limit_denominator(1 << 62) if args.tol is not None else roots.DEFAULT_WIDTH
    if lo >= hi:
        raise UsageError("need lo < hi")
    ivs = roots.isolate_roots(p, lo, hi, eps, open=not closed)
    data = {
        "poly": encode_poly(p),
        "lo": encode_number(lo),
        "hi": encode_number(hi),
        "closed": closed,
        "width": encode_number(eps),
        "count": roots.sturm_count(p, lo, hi, open=not closed),
        "intervals": [{"lo": encode_number(iv.lo), "hi": encode_number(iv.hi), "midpoint": float(iv.midpoint)} for iv in ivs],
    }
    rows = [[str(iv.lo), str(iv.hi), float(iv.midpoint)] for iv in ivs]
    text = f"{data['count']} distinct root(s)\n" + "\n".join(f"[{iv.lo}, {iv.hi}]  ~ {float(iv.midpoint):.12g}" for iv in ivs)
    art = Artifact(data, ["lo", "hi", "midpoint"], rows, text)
    _check_input(args, art)
    return art


def cmd_quadcheck(args) -> Artifact:
    rows = numchecks.quadcheck()
    if args.tol is not None:
        for r in rows:
            r["tol"] = args.tol
            r["pass"] = r["residual"] <= args.tol
    data = rows
    header = ["check", "value", "target", "residual", "tol", "pass"]
    text = "\n".join(f"[{'PASS' if r['pass'] else 'FAIL'}] {r['check']}: residual {r['residual']:.3g} (tol {r['tol']:.3g})" for r in rows)
    art = Artifact(data, header, [[r[h] for h in header] for r in rows], text)
    if args.input is not None:
        stored = _read_json(args.input)
        by_name = {r["check"]: r for r in stored}
        drift = [r["check"] for r in rows
                 if r["check"] not in by_name or abs(by_name[r["check"]]["value"] - r["value"]) > r["tol"]]
        if drift:
            raise VerificationError("stored quadrature table differs", drift, artifact=art)
    failed = [r["check"] for r in rows if not r["pass"]]
    if failed:
        raise VerificationError("quadrature checks failed", failed, artifact=art)
    return art


def cmd_mc(args) -> Artifact:
    if args.input is not None:
        stored = _read_json(args.input)
        params = stored["params"]
        for key in ("poly", "n_samples", "seed", "shards", "mixture", "element"):
            setattr(args, key, params.get(key))
        n_samples = params["n_samples"]
    else:
        n_samples = args.samples
        if args.poly is None:
            raise UsageError("--poly is required")
    p = parse_poly(args.poly)
    if args.seed is None:
        args.seed = 0
    if args.mixture:
        ts = [Fraction(t) for t in args.mixture.split(",")]
        trace = montecarlo.convergence_trace([chaos.mixture_element(t) for t in ts], p, n_samples, args.seed,
                                             labels=[str(t) for t in ts], shards=args.shards)
    else:
        if args.element is None:
            raise UsageError("mc needs --element or --mixture")
        elem = parse_element(args.element) if isinstance(args.element, str) else chaos.SpectralElement.from_json(args.element)
        trace = montecarlo.convergence_trace([elem], p, n_samples, args.seed, labels=[args.element if isinstance(args.element, str) else "element"], shards=args.shards)
    params = {"poly": args.poly, "n_samples": n_samples, "seed": args.seed, "shards": args.shards,
              "mixture": args.mixture, "element": args.element}
    header = ["label", "mean", "stderr", "exact_stderr", "exact", "n_samples", "seed"]
    rows = [[tp.label, tp.estimate.mean, tp.estimate.stderr, tp.estimate.exact_stderr, tp.estimate.exact,
             tp.estimate.n_samples, tp.estimate.seed] for tp in trace]
    data = {"params": params, "trace": [dict(zip(header, r)) for r in rows]}
    text = "\n".join(
        f"{tp.label}: {tp.estimate.mean:.6g} +/- {tp.estimate.stderr:.3g}"
        + ("" if tp.exact is None else f"  (exact {tp.exact:.6g})")
        for tp in trace
    )
    art = Artifact(data, header, rows, text)
    _check_input(args, art)
    return art


def cmd_verify_all(args) -> Artifact:
    seed = args.seed if args.seed is not None else 0
    results = acceptance.run_all(seed)
    data = {"seed": seed, "results": [
        {"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results]}
    rows = [[r.number, r.title, r.passed, r.detail, round(r.seconds, 3)] for r in results]
    text = "\n".join(r.line() for r in results)
    art = Artifact(data, ["number", "title", "passed", "detail", "seconds"], rows, text)
    if args.input is not None:
        stored = _read_json(args.input)
        if [(r["number"], r["passed"]) for r in stored["results"]] != [(r.number, r.passed) for r in results]:
            raise VerificationError("verdicts differ from the stored run", artifact=art)
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise VerificationError("acceptance criteria failed", failed, artifact=art)
    return art


COMMANDS = {
    "polys": (cmd_polys, "family P_0..P_n (Stein or Hermite)"),
    "coeff": (cmd_coeff, "coefficient table, cross-checked three ways"),
    "euler": (cmd_euler, "Euler number E_n from the 1/cosh series"),
    "genfun": (cmd_genfun, "generating-function expansion and its PDE"),
    "moments": (cmd_moments, "cumulants and moments of an element"),
    "diagnose": (cmd_diagnose, "sixth-degree convergence diagnostic"),
    "steinop": (cmd_steinop, "synthesize the Stein operator of an element"),
    "qpoly": (cmd_qpoly, "mixture polynomials Q_n and (t, Q_n(t)) grids"),
    "roots": (cmd_roots, "isolate real roots exactly"),
    "quadcheck": (cmd_quadcheck, "numeric identities for the normal product density"),
    "mc": (cmd_mc, "seeded Monte Carlo estimates and traces"),
    "verify-all": (cmd_verify_all, "run the acceptance suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="pretty")
    common.add_argument("--output", help="write the artifact here instead of stdout")
    common.add_argument("--input", help="re-read a JSON artifact emitted by this subcommand and verify it")

    parser = _Parser(prog="steinpoly", description="Stein polynomials of the normal product law.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    ps = {name: sub.add_parser(name, parents=[common], help=help_) for name, (_, help_) in COMMANDS.items()}

    for name in ("polys", "coeff", "euler", "genfun", "moments", "qpoly"):
        ps[name].add_argument("--n", help="degree or order; qpoly also accepts a range a..b")
    ps["polys"].add_argument("--family", choices=("stein", "hermite"), default="stein")
    ps["polys"].add_argument("--only", action="store_true", help="emit P_n alone")
    ps["coeff"].add_argument("--k", type=int)
    for name in ("moments", "diagnose", "steinop"):
        ps[name].add_argument("--element", help="normal-product, f8, mixture:<t> or an element JSON file")
    ps["diagnose"].add_argument("--normalize", action="store_true", help="rescale to unit variance first")
    ps["steinop"].add_argument("--max-j", type=int, default=10, help="check E[(op x^j)(F)] = 0 for j <= this")
    ps["qpoly"].add_argument("--grid", type=int, help="number of equally spaced t in [0, 1]")
    ps["roots"].add_argument("--poly")
    ps["roots"].add_argument("--lo")
    ps["roots"].add_argument("--hi")
    ps["roots"].add_argument("--closed", action="store_true", help="also report roots on the endpoints")
    ps["roots"].add_argument("--tol", type=float, help="maximum interval width")
    ps["quadcheck"].add_argument("--tol", type=float, help="override every row tolerance")
    ps["mc"].add_argument("--element")
    ps["mc"].add_argument("--mixture", help="comma-separated t values for sqrt(t) F + sqrt(1-t) G")
    ps["mc"].add_argument("--poly")
    ps["mc"].add_argument("--samples", "--n", dest="samples", type=int, default=10**6)
    ps["mc"].add_argument("--seed", type=int)
    ps["mc"].add_argument("--shards", type=int, default=1)
    ps["verify-all"].add_argument("--seed", type=int)
    return parser


def _fail(code: int, kind: str, message: str, details: Any = None) -> int:
    err = {"error": kind, "message": message}
    if details is not None:
        err["details"] = details
    sys.stderr.write(json.dumps(err, default=str) + "\n")
    return code


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(2, "usage", str(exc))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    fn = COMMANDS[args.command][0]
    art = None
    code = 0
    try:
        art = fn(args)
    except UsageError as exc:
        return _fail(2, "usage", str(exc))
    except VerificationError as exc:
        code = _fail(1, "verification", str(exc), exc.details)
        art = exc.artifact
    except (ValueError, KeyError, TypeError, ArithmeticError, FieldMismatchError) as exc:
        return _fail(2, "input", f"{type(exc).__name__}: {exc}")
    if art is None:
        return code
    out = art.render(args.format)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return code


def main() -> None:
    sys.exit(run())
