"""Batch command-line front end.

Subcommands: theorem, region, gamma5, vaaler, vdc, hb, suite.  Each consumes
a RunConfig assembled from defaults, an optional key=value config file, and
command-line overrides (highest precedence), writes plot-ready CSV with a
leading #-comment block echoing the full config, and exits 0 on pass,
1 on runtime error, 2 on precondition failure, 3 on invariant failure.

Every command is deterministic given (config, seed): randomized suites use a
seeded generator and CSV floats are written with repr, so repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np

from . import exponents, heathbrown, numerics, sieve, sums, vaaler, vdc
from .errors import (BoundaryError, InvariantError, LabError, PrecisionError,
                     PreconditionError, ScaleError)
from .numerics import Parameters

_FIELDS = ("command", "c", "gamma", "t", "d", "a", "x", "x-schedule", "H",
           "out", "seed", "grid-step", "tol", "allow-outside", "fixture")
_DEFAULTS = {
    "command": "",
    "c": "1.05",
    "gamma": "0.995",
    "t": "0.5",
    "d": "3",
    "a": "1",
    "x": "10000",
    "x-schedule": "",
    "H": "100",
    "out": "",
    "seed": "101",
    "grid-step": "1/200",
    "tol": "1e-9",
    "allow-outside": "0",
    "fixture": "",
}


class RunConfig:
    """String-valued config; typed views are derived, so that parse and
    serialize round-trip byte-identically."""

    def __init__(self, values: dict):
        unknown = set(values) - set(_FIELDS)
        if unknown:
            raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
        self.values = dict(_DEFAULTS)
        self.values.update({k: str(v) for k, v in values.items()})

    def serialize(self) -> str:
        return "".join(f"{k}={self.values[k]}\n" for k in _FIELDS)

    @classmethod
    def parse(cls, text: str) -> "RunConfig":
        values = {}
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise PreconditionError(f"config line {ln} is not key=value: {raw!r}")
            k, v = line.split("=", 1)
            values[k.strip()] = v.strip()
        return cls(values)

    def header_lines(self):
        return self.serialize().splitlines()

    # typed views ----------------------------------------------------------
    @property
    def c(self) -> Fraction:
        return Fraction(self.values["c"])

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.values["gamma"])

    @property
    def t(self) -> float:
        return float(self.values["t"])

    @property
    def d(self) -> int:
        return int(self.values["d"])

    @property
    def a(self) -> int:
        return int(self.values["a"])

    @property
    def x(self) -> float:
        return float(self.values["x"])

    @property
    def H(self) -> int:
        return int(self.values["H"])

    @property
    def seed(self) -> int:
        return int(self.values["seed"])

    @property
    def grid_step(self) -> Fraction:
        return Fraction(self.values["grid-step"])

    @property
    def tol(self) -> float:
        return float(self.values["tol"])

    @property
    def allow_outside(self) -> bool:
        return self.values["allow-outside"] not in ("0", "", "false", "no")

    @property
    def fixture(self):
        return self.values["fixture"] or None

    def out(self, default: str) -> str:
        return self.values["out"] or default

    def schedule(self):
        """x values: comma list, lo:hi[:factor] geometric, or None."""
        raw = self.values["x-schedule"]
        if not raw:
            return None
        if ":" in raw:
            parts = raw.split(":")
            if len(parts) not in (2, 3):
                raise PreconditionError(f"bad x-schedule {raw!r}, want lo:hi[:factor]")
            factor = float(parts[2]) if len(parts) == 3 else math.sqrt(10.0)
            return sums.geometric_schedule(float(parts[0]), float(parts[1]), factor)
        return [float(s) for s in raw.split(",")]

    def parameters(self) -> Parameters:
        return Parameters(x=self.x, c=self.c, gamma=self.gamma, t=self.t,
                          d=self.d, a=self.a)


def _findings_path(csv_path: str) -> str:
    base, _ = os.path.splitext(csv_path)
    return base + ".findings.json"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_theorem(cfg: RunConfig) -> int:
    params = cfg.parameters()
    if not params.region_ok and not cfg.allow_outside:
        raise PreconditionError(
            f"region: 19(c-1) + 171(1-gamma) < 9 fails at c={cfg.values['c']}, "
            f"gamma={cfg.values['gamma']}; pass --allow-outside to run anyway")
    xs = cfg.schedule() or [cfg.x]
    rows, bad = [], []
    for x in xs:
        p = replace(params, x=float(x))
        dec = sums.gamma_decomposition(p)
        pair = sums.rhs_main(p)
        lhs = dec.pi_gamma.value
        rows.append(sums.TheoremReport(lhs, pair.closed_form, lhs - pair.closed_form,
                                       float(x), p, float(p.claimed_exponent())))
        if not dec.identity_ok:
            bad.append(f"x={x:g}: decomposition gap {dec.identity_gap:.3e} "
                       f"> {dec.tolerance:.3e}")
        if pair.flagged:
            bad.append(f"x={x:g}: main-term methods differ by {pair.rel_gap:.3e} relative")
    trend = sums.TrendReport(rows, params)
    out = cfg.out("theorem_trend.csv")
    trend.write_csv(out, header_comments=cfg.header_lines())
    for r in rows:
        print(f"x={r.x:<12g} |err|={r.abs_err:<12.6g} err/main={r.ratio_err_main:<10.4g} "
              f"log|err|/log x={r.log_err_over_log_x:.4f}")
    print(f"wrote {out}")
    if bad:
        raise InvariantError("; ".join(bad))
    return 0


def cmd_region(cfg: RunConfig) -> int:
    rep = exponents.region_report(cfg.grid_step)
    out = cfg.out("region_map.csv")
    rep.write_csv(out, header_comments=cfg.header_lines())
    cat = exponents.derive_gamma5_catalogue(grid_step=cfg.grid_step)
    findings = {"region": rep.findings(), "catalogue": cat.findings()}
    fpath = _findings_path(out)
    with open(fpath, "w") as fh:
        json.dump(findings, fh, indent=2)
        fh.write("\n")
    inside = sum(1 for r in rep.rows if r.condition)
    print(f"grid step {cfg.grid_step}: {len(rep.rows)} points, {inside} inside; "
          f"equivalence {'ok' if rep.equivalence_ok else 'FAILED'}; "
          f"dominance failures {len(rep.dominance_failures)}; "
          f"label mismatches {len(rep.label_mismatches)}")
    print(f"wrote {out} and {fpath}")
    if not rep.equivalence_ok or rep.dominance_failures:
        raise InvariantError(
            f"equivalence_ok={rep.equivalence_ok}, "
            f"dominance failures at {rep.dominance_failures[:3]}")
    return 0


def cmd_gamma5(cfg: RunConfig) -> int:
    params = cfg.parameters()
    xs = cfg.schedule()
    if xs is None:
        sched = sums.gamma5_schedule(params)
    else:
        expo = float(params.claimed_exponent())
        values = [sums.gamma5_sum(x, params) for x in xs]
        sched = sums.Gamma5Schedule(list(xs), values, [x ** expo for x in xs])
    out = cfg.out("gamma5_schedule.csv")
    sched.write_csv(out, header_comments=cfg.header_lines())
    for x, v, b in zip(sched.xs, sched.values, sched.claimed):
        print(f"x={x:<12g} |gamma5|={abs(v):<12.6g} claimed x^e={b:g}")
    print(f"wrote {out}")
    return 0


def cmd_vaaler(cfg: RunConfig) -> int:
    H = cfg.H
    coeffs = vaaler.build_coefficients(H)
    rng = np.random.default_rng(cfg.seed)
    xs = np.concatenate([np.linspace(0.0, 1.0, 10_001), rng.uniform(0.0, 1.0, 1000)])
    worst, worst_x = vaaler.pointwise_check(xs, coeffs)
    a_cap = float(np.max(np.abs(coeffs.a) * np.arange(1, H + 1)))
    b_cap = float(np.max(coeffs.b) * H)
    out = cfg.out("vaaler_coefficients.csv")
    vaaler.dump_coefficients_csv(coeffs, out, header=cfg.header_lines())
    print(f"H={H}: worst pointwise gap {worst:.3e} at x={worst_x:.6f}; "
          f"max |a(h) h| = {a_cap:.6f}; max b(h) H = {b_cap:.6f}")
    print(f"wrote {out}")
    if worst > cfg.tol or a_cap > 1.0 + 1e-12 or b_cap > 4.0 + 1e-12:
        raise InvariantError(
            f"vaaler checks failed: gap={worst:.3e}, |a h|={a_cap}, b H={b_cap}")
    return 0


def cmd_vdc(cfg: RunConfig) -> int:
    reports = vdc.standard_sweep()
    out = cfg.out("vdc_sweep.csv")
    with open(out, "w", newline="") as fh:
        for line in cfg.header_lines():
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["label", "kind", "a", "b", "lam", "bound", "empirical", "ratio"])
        for r in reports:
            w.writerow([r.label, r.kind, repr(r.interval[0]), repr(r.interval[1]),
                        repr(r.lam), repr(r.bound), repr(r.empirical), repr(r.ratio)])
    worst = max(r.ratio for r in reports)
    rng = np.random.default_rng(cfg.seed)
    violations = 0
    trials = 0
    for _ in range(250):
        N = int(rng.integers(16, 257))
        z = np.exp(2j * math.pi * rng.uniform(0.0, 1.0, N))
        for Q in (1, 5, 50, N):
            lhs, rhs, ok, _ = vdc.square_out_check(z, Q)
            trials += 1
            violations += not ok
    print(f"{len(reports)} derivative-test pairs, worst empirical/bound {worst:.4f}; "
          f"square-out {trials} trials, {violations} violations")
    print(f"wrote {out}")
    if worst > 10.0 or violations:
        raise InvariantError(
            f"vdc sweep failed: worst ratio {worst:.4f}, violations {violations}")
    return 0


def _hb_sweep(limit: int):
    """Worst |identity - Lambda| over n <= limit with J = 3, z = n^(1/3)."""
    tab = sieve.sieve_range(0, limit)
    worst, worst_n = 0.0, 1
    for n in range(1, limit + 1):
        v = heathbrown.hb_identity_value(n, 3, n ** (1.0 / 3.0))
        ref = tab.lam[n - 1] if n > 1 else 0.0
        err = abs(v - ref) / (1.0 + math.log(n))
        if err > worst:
            worst, worst_n = err, n
    return worst, worst_n


def cmd_hb(cfg: RunConfig) -> int:
    limit = min(int(cfg.x), 10_000)
    worst, worst_n = _hb_sweep(limit)
    cf = float(cfg.c)
    rep = heathbrown.uvz_preconditions(cfg.x, cf)
    rows = heathbrown.classification_map(cfg.x, cf)
    out = cfg.out("hb_classification.csv")
    heathbrown.write_classification_csv(out, rows, header_comments=cfg.header_lines())
    idents_ok = rep.identities_ok
    conds_ok = all(ok for ok, _ in rep.conditions.values())
    print(f"identity sweep n <= {limit}: worst scaled error {worst:.3e} at n={worst_n}")
    print(f"U={rep.windows.U:.6g} V={rep.windows.V:.6g} Z={rep.windows.Z:.6g} "
          f"({rep.ordering}); exponent identities {'ok' if idents_ok else 'FAILED'}; "
          f"window conditions {'ok' if conds_ok else 'FAILED'}; "
          f"first-line chain 2<=U<V<=Z<=x/2: {rep.chain_ok}")
    print(f"wrote {out} ({len(rows)} dyadic boxes)")
    if worst > 1e-9 or not idents_ok or not conds_ok:
        raise InvariantError(
            f"hb failed: sweep {worst:.3e}, identities {idents_ok}, conditions {conds_ok}")
    return 0


def cmd_suite(cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    results = []

    def run(name, fn):
        try:
            ok, detail = fn()
        except LabError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, ok, detail))

    def check_fixture():
        n_rows, worst, failures = numerics.verify_phase_fixture(cfg.fixture, tol=cfg.tol)
        return not failures, f"{n_rows} rows, worst {worst:.3e}, {len(failures)} over tol"

    def check_sieve():
        n_primes = sieve.primes_up_to(10_000).size
        ps = sieve.primes_up_to(20_000)
        vec = sieve.ps_mask(ps, 0.9)
        scl = np.array([sieve.is_ps_prime(int(p), 0.9) for p in ps])
        agree = bool(np.all(vec == scl))
        return (n_primes == 1229 and agree,
                f"pi(1e4)={n_primes} (want 1229), mask/scalar agree={agree}")

    def check_vaaler():
        worst_all = -math.inf
        for H in (1, 10, 100):
            co = vaaler.build_coefficients(H)
            xs = np.concatenate([np.linspace(0.0, 1.0, 2001),
                                 rng.uniform(0.0, 1.0, 500)])
            worst, _ = vaaler.pointwise_check(xs, co)
            worst_all = max(worst_all, worst)
            caps = (np.max(np.abs(co.a) * np.arange(1, H + 1)) <= 1.0 + 1e-12
                    and np.max(co.b) * H <= 4.0 + 1e-12)
            if not caps:
                return False, f"coefficient caps failed at H={H}"
        return worst_all <= cfg.tol, f"worst pointwise gap {worst_all:.3e}"

    def check_square_out():
        bad = 0
        for _ in range(200):
            N = int(rng.integers(16, 257))
            z = np.exp(2j * math.pi * rng.uniform(0.0, 1.0, N))
            for Q in (1, 5, 50, N):
                _, _, ok, _ = vdc.square_out_check(z, Q)
                bad += not ok
        return bad == 0, f"{bad} violations in 800 trials"

    def check_hb():
        worst, worst_n = _hb_sweep(10_000)
        return worst <= 1e-9, f"worst scaled error {worst:.3e} at n={worst_n}"

    def check_vdc():
        worst = max(r.ratio for r in vdc.standard_sweep())
        return worst <= 10.0, f"worst empirical/bound {worst:.4f}"

    def check_decomposition():
        sets = [Parameters(x=1e4, c=1.1, gamma=0.9, t=0.5, d=3, a=1),
                Parameters(x=1e4, c=1.05, gamma=0.995, t=-1.5, d=5, a=2),
                Parameters(x=1e5, c=1.2, gamma=0.95, t=0.0, d=1, a=0)]
        worst = max(sums.gamma_decomposition(p).identity_gap for p in sets)
        return worst <= 1e-10, f"worst identity gap {worst:.3e}"

    run("phase-fixture", check_fixture)
    run("sieve-oracles", check_sieve)
    run("vaaler-grid", check_vaaler)
    run("square-out", check_square_out)
    run("hb-identity", check_hb)
    run("vdc-ratios", check_vdc)
    run("decomposition", check_decomposition)

    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        raise InvariantError(f"suite failures: {', '.join(failed)}")
    return 0


_COMMANDS = {
    "theorem": cmd_theorem,
    "region": cmd_region,
    "gamma5": cmd_gamma5,
    "vaaler": cmd_vaaler,
    "vdc": cmd_vdc,
    "hb": cmd_hb,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psexp",
        description="Exponential sums over Piatetski-Shapiro primes: batch checks")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--c", dest="c")
        p.add_argument("--gamma")
        p.add_argument("--t")
        p.add_argument("--d")
        p.add_argument("--a")
        p.add_argument("--x")
        p.add_argument("--x-schedule", dest="x_schedule")
        p.add_argument("--H", dest="H")
        p.add_argument("--out")
        p.add_argument("--seed")
        p.add_argument("--grid-step", dest="grid_step")
        p.add_argument("--tol")
        p.add_argument("--allow-outside", dest="allow_outside",
                       action="store_const", const="1")
        p.add_argument("--fixture")
    return parser


_ARG_TO_KEY = {"c": "c", "gamma": "gamma", "t": "t", "d": "d", "a": "a",
               "x": "x", "x_schedule": "x-schedule", "H": "H", "out": "out",
               "seed": "seed", "grid_step": "grid-step", "tol": "tol",
               "allow_outside": "allow-outside", "fixture": "fixture"}


def config_from_args(args) -> RunConfig:
    values = {}
    if args.config:
        with open(args.config) as fh:
            values.update(RunConfig.parse(fh.read()).values)
    for attr, key in _ARG_TO_KEY.items():
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    values["command"] = args.command
    return RunConfig(values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return _COMMANDS[args.command](cfg)
    except (PreconditionError, PrecisionError, ScaleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BoundaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
