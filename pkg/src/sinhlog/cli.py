"""Command-line driver: identity suites, coefficient and moment queries,
excess reports, eigenvalue sweeps and simulation experiments.

Subcommands: identities, coeff, moment, excess, eigs, simulate.
Outputs are plain text or CSV; experiment configuration is JSON.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction

import numpy as np

from . import coeffs, excess, integrate, moments, opalg, words
from .words import Word, WordPoly, word


# ---------------------------------------------------------------------------
# identity suites

def _suite_antipode_polynomial(max_grade, antipode_fn):
    n_cases = fails = 0
    for n in range(1, max_grade + 1):
        op = opalg.cs_power(n)
        for w in words.words_of_length(2, n + 1):
            n_cases += 1
            if opalg.evaluate(op, w) != -antipode_fn(w):
                fails += 1
    return n_cases, fails


def _suite_partial_integration(max_grade):
    n_cases = fails = 0
    for n in range(1, max_grade + 1):
        n_cases += 1
        if opalg.partial_integration_rhs(n) != opalg.antipode_operator(n):
            fails += 1
    return n_cases, fails


def _suite_moment_reversal(max_len):
    n_cases = fails = 0
    for u in words.all_words(2, max_len):
        for v in words.all_words(2, max_len):
            n_cases += 1
            if moments.expect_strat_product(u, v) != moments.expect_strat_product(
                    words.reversal(u), words.reversal(v)):
                fails += 1
    return n_cases, fails


def _suite_single_letter(max_len, antipode_fn):
    n_cases = fails = 0
    half = Fraction(1, 2)
    for a in words.words_of_length(2, 1):
        pa = WordPoly.from_word(a)
        for w in words.all_words(2, max_len):
            n_cases += 1
            lhs = moments.expect_strat_product(a, w)
            rhs = moments.expect_poly_product(
                pa, (WordPoly.from_word(w) - antipode_fn(w)).scaled(half))
            if lhs != rhs:
                fails += 1
    return n_cases, fails


def run_identity_suites(max_grade: int = 4, corrupt_antipode: bool = False):
    """Run the named identity families; returns [(name, cases, failures)].

    corrupt_antipode swaps in an unsigned reversal, a negative control that
    must break the antipode-backed families.
    """
    good = words.antipode
    bad = lambda w: WordPoly.from_word(words.reversal(w))
    antipode_fn = bad if corrupt_antipode else good
    moment_len = min(max_grade, 3)
    return [
        ("antipode-polynomial", *_suite_antipode_polynomial(max_grade, antipode_fn)),
        ("partial-integration", *_suite_partial_integration(max_grade)),
        ("moment-reversal-invariance", *_suite_moment_reversal(moment_len)),
        ("single-letter-pairing", *_suite_single_letter(min(max_grade + 1, 4), antipode_fn)),
    ]


def cmd_identities(args) -> int:
    results = run_identity_suites(args.max_grade, args.corrupt_antipode)
    worst = 0
    for name, cases, fails in results:
        status = "PASS" if fails == 0 else "FAIL"
        print("%s %s (%d cases, %d failures)" % (status, name, cases, fails))
        worst = max(worst, fails)
    return 0 if worst == 0 else 1


# ---------------------------------------------------------------------------
# coefficient / moment queries

_SERIES = ("sinhlog", "partial", "log", "taylor", "lie")


def cmd_coeff(args) -> int:
    w = word(args.word)
    eps = Fraction(args.eps) if args.eps is not None else Fraction(0)
    if args.series == "lie":
        print(coeffs.lie_coefficient(w))
    elif args.series in ("sinhlog", "partial"):
        print(coeffs.sinhlog_closed_form(w, eps))
    elif args.series == "log":
        print(coeffs.coefficient_via_operator(w, coeffs.CoefficientSet.log()))
    else:
        print(coeffs.coefficient_via_operator(w, coeffs.CoefficientSet.taylor()))
    return 0


def cmd_moment(args) -> int:
    print(moments.expect_strat_product(word(args.u), word(args.v)))
    return 0


# ---------------------------------------------------------------------------
# config I/O

_CONFIG_FIELDS = {f.name for f in dataclasses.fields(integrate.ExperimentConfig)}


def load_config(path: str) -> integrate.ExperimentConfig:
    with open(path) as fh:
        raw = json.load(fh)
    unknown = set(raw) - _CONFIG_FIELDS
    if unknown:
        raise ValueError("config: unknown field(s) %s" % ", ".join(sorted(unknown)))
    missing = {"matrices", "y0", "t_final", "h_values", "methods"} - set(raw)
    if missing:
        raise ValueError("config: missing field(s) %s" % ", ".join(sorted(missing)))
    cfg = integrate.ExperimentConfig(**raw)
    cfg.validate()
    return cfg


def config_to_json(cfg: integrate.ExperimentConfig) -> str:
    return json.dumps(dataclasses.asdict(cfg), indent=2, sort_keys=True) + "\n"


def _write_out(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# excess / eigenvalues / simulation

def _parse_range(spec: str):
    lo, hi, n = spec.split(":")
    return float(lo), float(hi), int(n)


def cmd_excess(args) -> int:
    cfg = load_config(args.config)
    vf = excess.LinearVectorFieldSet.of(cfg.matrices)
    h = args.h if args.h is not None else min(cfg.h_values)
    n = args.order if args.order is not None else cfg.order
    if args.grid:
        u_spec, v_spec = args.grid.split(",")
        rows = excess.excess_grid(vf, _parse_range(u_spec), _parse_range(v_spec),
                                  h, n, args.eps)
        _write_out(excess.grid_to_csv(rows), args.out)
    else:
        bk = excess.evaluate_excess(vf, cfg.y0, h, n, args.eps)
        print("E = %.12e  (E0 = %.6e, E1 = %.6e, E2 = %.6e; eps = %g, h = %g, n = %d)"
              % (bk.excess, bk.e0, bk.e1, bk.e2, args.eps, h, n))
    return 0


def cmd_eigs(args) -> int:
    if args.sweep:
        lo, hi, n = _parse_range(args.sweep)
        rows = excess.eps_sweep(np.linspace(lo, hi, n))
        _write_out(excess.sweep_to_csv(rows), args.out)
    else:
        lams = excess.eig_sym(excess.b_matrix(args.eps))
        print(" ".join("%.10g" % x for x in lams))
    return 0


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.paths is not None:
        cfg.paths = args.paths
    if args.fine_steps is not None:
        cfg.fine_steps = args.fine_steps
    if args.eps is not None:
        cfg.eps = args.eps
    if args.order is not None:
        cfg.order = args.order
    if args.no_corrections:
        cfg.corrections = False
    cfg.validate()
    report = integrate.global_error_experiment(cfg)
    _write_out(report.to_csv(), args.out)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sinhlog", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("identities", help="run the algebraic/moment identity suites")
    q.add_argument("--max-grade", type=int, default=4)
    q.add_argument("--corrupt-antipode", action="store_true", help=argparse.SUPPRESS)
    q.set_defaults(func=cmd_identities)

    q = sub.add_parser("coeff", help="print a series coefficient for a word")
    q.add_argument("word")
    q.add_argument("series", choices=_SERIES)
    q.add_argument("eps", nargs="?", default=None,
                   help="rational perturbation (sinhlog/partial only)")
    q.set_defaults(func=cmd_coeff)

    q = sub.add_parser("moment", help="print the exact expectation E(J_u J_v)")
    q.add_argument("u")
    q.add_argument("v")
    q.set_defaults(func=cmd_moment)

    q = sub.add_parser("excess", help="mean-square excess at a point or on a grid")
    q.add_argument("config", help="experiment config JSON supplying the system")
    q.add_argument("--eps", type=float, default=0.0)
    q.add_argument("--h", type=float, default=None)
    q.add_argument("--order", type=int, default=None)
    q.add_argument("--grid", default=None,
                   help="u_lo:u_hi:nu,v_lo:v_hi:nv data rectangle (CSV output)")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_excess)

    q = sub.add_parser("eigs", help="eigenvalues of the closed-form excess matrix")
    q.add_argument("--eps", type=float, default=0.0)
    q.add_argument("--sweep", default=None, help="lo:hi:n parameter sweep (CSV output)")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_eigs)

    q = sub.add_parser("simulate", help="run a global-error experiment from JSON config")
    q.add_argument("config")
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--paths", type=int, default=None)
    q.add_argument("--fine-steps", type=int, default=None)
    q.add_argument("--eps", type=float, default=None)
    q.add_argument("--order", type=int, default=None)
    q.add_argument("--no-corrections", action="store_true")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
