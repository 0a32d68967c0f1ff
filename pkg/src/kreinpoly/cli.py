"""Command-line front end.

    kreinpoly eval --family laguerre --alpha 4 --degrees 7,15 --s 2 --beta 3
    kreinpoly batch jobs.json --out results.csv --format csv --parallel 4
    kreinpoly bench --family laguerre --alpha 4 --degrees 7,15 --s 2 --beta 3 --trials 100
    kreinpoly selftest --seed 42

Exit codes: 0 success, 1 failed records or checks, 2 precondition
violation, 3 route inapplicable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import jsonschema

from .errors import (
    AccuracyError,
    KreinError,
    NotExactError,
    PreconditionError,
    RouteInapplicable,
)
from .exact import ApproxValue, ExactValue, format_scalar
from .krein import FunctionalRequest, clear_caches, evaluate
from .linearize import product_linearize, xs_expand
from .moments import MOMENT_KINDS, MomentRequest, moment
from .oracle import oracle_functional, quad_functional
from .polys import FamilySpec, norm_h, poly_coeffs

SCHEMA_ID = "kreinpoly/1"
CSV_COLUMNS = ["family", "alpha", "gamma", "degrees", "s", "beta", "route",
               "value", "rel_err", "terms", "micros"]

_scalar_field = {"anyOf": [{"type": "number"}, {"type": "string"}]}
JOB_SCHEMA = {
    "type": "object",
    "required": ["schema", "jobs"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "jobs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["family", "degrees", "s", "beta"],
                "additionalProperties": False,
                "properties": {
                    "family": {"enum": ["laguerre", "hermite", "jacobi"]},
                    "alpha": _scalar_field,
                    "gamma": _scalar_field,
                    "degrees": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
                    "s": _scalar_field,
                    "beta": _scalar_field,
                    "kind": {"enum": ["functional", *MOMENT_KINDS]},
                    "route": {"enum": ["lauricella", "ode", "algebraic", "oracle", "auto"]},
                    "backend": {"enum": ["auto", "exact", "float"]},
                    "normalized": {"type": "boolean"},
                },
            },
        },
    },
}

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_INAPPLICABLE = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# job handling
# ---------------------------------------------------------------------------

def _is_decimal(x) -> bool:
    if isinstance(x, float):
        return True
    return isinstance(x, str) and any(ch in x for ch in ".eE")


def _param(x) -> Fraction:
    if isinstance(x, bool):
        raise PreconditionError("boolean is not a number")
    if isinstance(x, float):
        return Fraction(repr(x))
    try:
        return Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError):
        raise PreconditionError(f"cannot parse number {x!r}") from None


def _echo(x) -> str:
    return str(x) if not isinstance(x, float) else repr(x)


def run_job(job: dict, timing: bool = True) -> dict:
    """Evaluate one job dictionary into a result record (never raises)."""
    rec = {
        "family": job.get("family"),
        "alpha": _echo(job.get("alpha", 0)),
        "gamma": _echo(job.get("gamma", 0)),
        "degrees": list(job.get("degrees", [])),
        "s": _echo(job.get("s", 0)),
        "beta": _echo(job.get("beta", 1)),
        "kind": job.get("kind", "functional"),
        "route": None,
        "value": None,
        "rel_err": None,
        "terms": None,
        "micros": None,
    }
    t0 = time.perf_counter()
    try:
        value, route, terms = _evaluate_job(job)
    except RouteInapplicable as exc:
        rec.update(error=str(exc), status=EXIT_INAPPLICABLE)
        return rec
    except (PreconditionError, NotExactError) as exc:
        rec.update(error=str(exc), status=EXIT_PRECONDITION)
        return rec
    except (KreinError, ZeroDivisionError, ValueError, TypeError) as exc:
        rec.update(error=str(exc) or type(exc).__name__, status=EXIT_FAIL)
        return rec
    micros = int(round((time.perf_counter() - t0) * 1e6))
    rel = value.rel if isinstance(value, ApproxValue) else 0.0
    rec.update(route=route, value=format_scalar(value), rel_err=f"{rel:.3e}", terms=terms,
               micros=micros if timing else None, status=EXIT_OK)
    return rec


def _evaluate_job(job: dict):
    fam_name = job["family"]
    alpha, gamma = job.get("alpha", 0), job.get("gamma", 0)
    s, beta = job.get("s", 0), job.get("beta", 1)
    backend = job.get("backend")
    if backend is None:
        backend = "float" if any(_is_decimal(v) for v in (alpha, gamma, s, beta)) else "auto"
    if fam_name == "hermite":
        if _param(alpha) or _param(gamma):
            raise PreconditionError("Hermite polynomials take no weight parameters")
        family = FamilySpec.hermite()
    else:
        family = FamilySpec(fam_name, _param(alpha), _param(gamma))
    degrees = tuple(job["degrees"])
    kind = job.get("kind", "functional")
    beta_q = _param(beta)
    if kind == "functional":
        req = FunctionalRequest(family, degrees, _param(s), beta_q, job.get("route", "auto"), backend)
        rep = evaluate(req)
        return rep.value, rep.route, rep.terms
    if len(degrees) != 1:
        raise PreconditionError("moment jobs take a single degree")
    if kind == "exp":
        if beta_q < 0:
            raise PreconditionError("the exponential rate must be nonnegative")
        rate = beta_q
    else:
        if beta_q <= 0:
            raise PreconditionError("beta must be positive")
        if beta_q != 1:
            raise PreconditionError(f"beta is fixed by the {kind} moment; pass beta=1")
        rate = Fraction(0)
    req = MomentRequest(family, degrees[0], kind, _param(s), rate,
                        bool(job.get("normalized", False)), backend)
    return moment(req), f"moment:{kind}", 0


def load_jobs(text: str) -> list[dict]:
    """Parse and validate a job file; raises ``PreconditionError`` on schema errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"job file is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, JOB_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise PreconditionError(f"job file rejected at {where}: {exc.message}") from None
    return doc["jobs"]


def _run_untimed(job):
    return run_job(job, timing=False)


def _run_timed(job):
    return run_job(job, timing=True)


def run_batch(jobs: list[dict], workers: int = 1, timing: bool = False) -> list[dict]:
    fn = _run_timed if timing else _run_untimed
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _csv_row(rec: dict) -> list:
    value = rec["value"] if rec.get("status") == EXIT_OK else f"error: {rec.get('error')}"
    return [
        rec["family"], rec["alpha"], rec["gamma"], ",".join(str(d) for d in rec["degrees"]),
        rec["s"], rec["beta"], rec["route"] or "", value, rec["rel_err"] or "",
        "" if rec["terms"] is None else rec["terms"],
        "" if rec["micros"] is None else rec["micros"],
    ]


def _public(rec: dict) -> dict:
    out = {k: v for k, v in rec.items() if k != "status"}
    out["ok"] = rec.get("status") == EXIT_OK
    return out


def render(records: list[dict], fmt: str, single: bool = False) -> str:
    if fmt == "plain":
        lines = [r["value"] if r.get("status") == EXIT_OK else f"error: {r.get('error')}" for r in records]
        return "".join(line + "\n" for line in lines)
    if fmt == "json":
        if single:
            return json.dumps(_public(records[0]), sort_keys=True) + "\n"
        return json.dumps([_public(r) for r in records], sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(_csv_row(r))
    return buf.getvalue()


def _diagnose(rec: dict) -> None:
    print(json.dumps({"error": rec.get("error"), "exit": rec.get("status")}), file=sys.stderr)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_eval(args) -> int:
    job = {
        "family": args.family,
        "alpha": args.alpha,
        "gamma": args.gamma,
        "degrees": _parse_degrees(args.degrees),
        "s": args.s,
        "beta": args.beta,
        "kind": args.kind,
        "route": args.route,
        "normalized": args.normalized,
    }
    if args.backend:
        job["backend"] = args.backend
    rec = run_job(job, timing=True)
    if rec["status"] != EXIT_OK:
        _diagnose(rec)
        return rec["status"]
    sys.stdout.write(render([rec], args.format, single=True))
    return EXIT_OK


def cmd_batch(args) -> int:
    try:
        with open(args.jobfile, encoding="utf-8") as fh:
            jobs = load_jobs(fh.read())
    except OSError as exc:
        print(json.dumps({"error": str(exc), "exit": EXIT_PRECONDITION}), file=sys.stderr)
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        print(json.dumps({"error": str(exc), "exit": EXIT_PRECONDITION}), file=sys.stderr)
        return EXIT_PRECONDITION
    workers = args.threads if args.threads else args.parallel
    records = run_batch(jobs, workers, timing=args.timing)
    text = render(records, args.format) if records else ""
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r for r in records if r.get("status") != EXIT_OK]
    for r in failed:
        _diagnose(r)
    return EXIT_FAIL if failed else EXIT_OK


def _parse_degrees(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise SystemExit(f"invalid degree list {text!r}") from None


def bench(family: FamilySpec, degrees, s, beta, trials: int = 100, tol: float = 1e-10,
          quad_trials: int | None = None, warm: bool = False, corrupt: str | None = None) -> dict:
    """Time every applicable closed-form route against the quadrature oracle.

    Values are checked first: every route must reproduce the exact-expansion
    oracle, and quadrature must agree within its error estimate. Raises
    ``AssertionError`` on any disagreement.
    """
    base = FunctionalRequest(family, tuple(degrees), s, beta, "oracle", "auto")
    reference = oracle_functional(family, base.degrees, base.s, base.beta).value
    routes = {}
    for route in ("algebraic", "lauricella", "ode"):
        try:
            value = evaluate(base.with_route(route)).value
        except RouteInapplicable:
            continue
        if route == corrupt:
            value = value + ExactValue(1) if isinstance(value, ExactValue) else value + 1.0
        if value != reference:
            raise AssertionError(
                f"route {route} returned {format_scalar(value)}, oracle {format_scalar(reference)}")
        routes[route] = value
    quad = quad_functional(family, base.degrees, base.s, base.beta, tol=tol)
    ref = ApproxValue.of(reference)
    if not quad.value.agrees_with(ref):
        raise AssertionError(f"quadrature {quad.value} disagrees with oracle {reference}")

    def timed(fn, n):
        out = []
        for _ in range(n):
            if not warm:
                clear_caches()
            t0 = time.perf_counter()
            fn()
            out.append(time.perf_counter() - t0)
        return statistics.fmean(out)

    table = {}
    for route in routes:
        req = base.with_route(route)
        table[route] = timed(lambda: evaluate(req), trials)
    table["oracle"] = timed(lambda: oracle_functional(family, base.degrees, base.s, base.beta), trials)
    q_mean = timed(lambda: quad_functional(family, base.degrees, base.s, base.beta, tol=tol),
                   quad_trials or trials)
    return {
        "value": format_scalar(reference),
        "quadrature": quad.value.value,
        "quadrature_error": quad.error,
        "trials": trials,
        "mean_seconds": table,
        "quadrature_seconds": q_mean,
        "speedup": {k: q_mean / v for k, v in table.items()},
    }


def cmd_bench(args) -> int:
    try:
        family = FamilySpec.hermite() if args.family == "hermite" else \
            FamilySpec(args.family, _param(args.alpha), _param(args.gamma))
        res = bench(family, _parse_degrees(args.degrees), _param(args.s), _param(args.beta),
                    args.trials, args.tol, args.quad_trials, args.warm, args.corrupt_route)
    except AssertionError as exc:
        print(json.dumps({"error": f"benchmark aborted: {exc}", "exit": EXIT_FAIL}), file=sys.stderr)
        return EXIT_FAIL
    except RouteInapplicable as exc:
        print(json.dumps({"error": str(exc), "exit": EXIT_INAPPLICABLE}), file=sys.stderr)
        return EXIT_INAPPLICABLE
    except (PreconditionError, AccuracyError) as exc:
        print(json.dumps({"error": str(exc), "exit": EXIT_PRECONDITION}), file=sys.stderr)
        return EXIT_PRECONDITION
    if args.format == "json":
        print(json.dumps(res, sort_keys=True))
        return EXIT_OK
    print(f"value      {res['value']}")
    print(f"quadrature {res['quadrature']!r} +- {res['quadrature_error']:.1e}")
    print(f"{'route':<12}{'mean [s]':>14}{'speedup':>12}")
    for route, t in res["mean_seconds"].items():
        print(f"{route:<12}{t:>14.3e}{res['speedup'][route]:>11.1f}x")
    print(f"{'quadrature':<12}{res['quadrature_seconds']:>14.3e}{1.0:>11.1f}x")
    return EXIT_OK


# ---------------------------------------------------------------------------
# self-test
# ---------------------------------------------------------------------------

def selftest_cases(seed: int = 0, agreement: int = 300, parity: int = 100) -> list[tuple]:
    """Deterministic case list: ``(suite, family_kind, alpha, gamma, degrees, s, beta)``."""
    rng = random.Random(seed)
    cases = []
    for _ in range(agreement):
        kind = rng.choice(["laguerre", "hermite", "jacobi"])
        a = 0 if kind == "hermite" else rng.choice([0, 1, 2, 3, Fraction(1, 2), Fraction(3, 2)])
        g = rng.choice([0, 1, 2, 3, Fraction(1, 2)]) if kind == "jacobi" else 0
        cases.append(("agreement", kind, a, g, (rng.randint(0, 6), rng.randint(0, 6)),
                      rng.randint(0, 3), rng.randint(1, 3)))
    for kind, a, g in (("laguerre", 0, 0), ("laguerre", Fraction(3, 2), 0), ("hermite", 0, 0),
                       ("jacobi", 0, 0), ("jacobi", 2, Fraction(1, 2))):
        for m in range(9):
            for n in range(m, 9):
                cases.append(("orthogonality", kind, a, g, (m, n), 0, 1))
    for _ in range(parity):
        m, n = rng.randint(0, 8), rng.randint(0, 8)
        s = rng.randint(0, 3)
        if (m + n + s) % 2 == 0:
            s += 1
        cases.append(("parity", "hermite", 0, 0, (m, n), s, rng.randint(1, 4)))
    for kind, a, g in (("laguerre", Fraction(1, 2), 0), ("hermite", 0, 0), ("jacobi", 1, Fraction(1, 2))):
        for m in range(6):
            for s in range(4):
                cases.append(("expansion", kind, a, g, (m,), s, 1))
    return cases


def _family(kind, a, g) -> FamilySpec:
    return FamilySpec.hermite() if kind == "hermite" else FamilySpec(kind, a, g)


def run_case(case) -> str | None:
    """Run one self-test case; returns a failure description or None."""
    suite, kind, a, g, degrees, s, beta = case
    fam = _family(kind, a, g)
    try:
        if suite == "expansion":
            (m,) = degrees
            lhs = poly_coeffs(fam, m)
            for _ in range(s):
                lhs = lhs.shift(1)
            if xs_expand(fam, m, s).to_monomial() != lhs:
                return "x^s expansion does not reproduce its left side"
            if product_linearize(fam, m, s).to_monomial() != poly_coeffs(fam, m) * poly_coeffs(fam, s):
                return "product linearization does not reproduce its left side"
            return None
        req = FunctionalRequest(fam, degrees, s, beta, "oracle")
        ref = evaluate(req).value
        if suite == "orthogonality":
            m, n = degrees
            want = norm_h(fam, n) if m == n else ExactValue(0)
            if ref != want:
                return f"oracle gives {ref}, expected {want}"
        values = {"oracle": ref}
        for route in ("algebraic", "lauricella", "ode"):
            try:
                values[route] = evaluate(req.with_route(route)).value
            except RouteInapplicable:
                continue
        if suite == "parity" and any(v != 0 for v in values.values()):
            return f"nonzero odd-parity value: {values}"
        if len(set(values.values())) != 1:
            return "routes disagree: " + ", ".join(f"{k}={format_scalar(v)}" for k, v in values.items())
    except KreinError as exc:
        return f"{type(exc).__name__}: {exc}"
    return None


def cmd_selftest(args) -> int:
    cases = selftest_cases(args.seed)
    if args.list:
        for c in cases:
            print(json.dumps([str(x) if isinstance(x, Fraction) else x for x in c]))
        return EXIT_OK
    failures = []
    counts: dict[str, int] = {}
    for case in cases:
        counts[case[0]] = counts.get(case[0], 0) + 1
        msg = run_case(case)
        if msg:
            failures.append((case, msg))
    summary = ", ".join(f"{k} {v}" for k, v in counts.items())
    print(f"selftest seed={args.seed}: {len(cases)} cases ({summary}), {len(failures)} failed")
    for case, msg in failures[:20]:
        print(f"FAIL {case}: {msg}")
    return EXIT_OK if not failures else EXIT_FAIL


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kreinpoly", description="Krein-like functionals of classical orthogonal polynomials.")
    sub = p.add_subparsers(dest="command", required=True)

    def family_args(sp, degrees_default=None):
        sp.add_argument("--family", required=True, choices=["laguerre", "hermite", "jacobi"])
        sp.add_argument("--alpha", default="0")
        sp.add_argument("--gamma", default="0")
        sp.add_argument("--degrees", required=degrees_default is None, default=degrees_default,
                        help="comma separated, e.g. 7,15")
        sp.add_argument("--s", default="0")
        sp.add_argument("--beta", default="1")

    e = sub.add_parser("eval", help="evaluate one functional or moment")
    family_args(e)
    e.add_argument("--route", default="auto", choices=["lauricella", "ode", "algebraic", "oracle", "auto"])
    e.add_argument("--backend", default=None, choices=["auto", "exact", "float"])
    e.add_argument("--kind", default="functional", choices=["functional", *MOMENT_KINDS])
    e.add_argument("--normalized", action="store_true")
    e.add_argument("--format", default="plain", choices=["plain", "json", "csv"])
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("batch", help="evaluate a JSON job file")
    b.add_argument("jobfile")
    b.add_argument("--out")
    b.add_argument("--format", default="json", choices=["plain", "json", "csv"])
    b.add_argument("--parallel", type=int, default=1)
    b.add_argument("--threads", type=int, default=None, help="worker count (overrides --parallel)")
    b.add_argument("--timing", action="store_true",
                   help="record wall time per job (output then varies between runs)")
    b.set_defaults(func=cmd_batch)

    t = sub.add_parser("bench", help="closed-form routes versus quadrature")
    family_args(t)
    t.add_argument("--trials", type=int, default=100)
    t.add_argument("--quad-trials", type=int, default=None)
    t.add_argument("--tol", type=float, default=1e-10)
    t.add_argument("--warm", action="store_true", help="keep coefficient caches between trials")
    t.add_argument("--corrupt-route", default=None, help=argparse.SUPPRESS)
    t.add_argument("--format", default="plain", choices=["plain", "json"])
    t.set_defaults(func=cmd_bench)

    st = sub.add_parser("selftest", help="route agreement, orthogonality, parity, expansions")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--list", action="store_true", help="print the case list and exit")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
