"""Command-line front end.

Subcommands: radial, hyp-table, eri, breit, bench, verify.  Tables are
written as CSV (header row, LF endings, 17 significant digits) or JSON.
Exit status is 0 on success, 1 on numerical failure and 2 on bad
arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .assembly import Orbital, eri
from .errors import DomainError, NumericalError
from .numerics import DEFAULT, PrecisionConfig, hyp2f1_unit_a
from .oracle import QuadSpec, identity_suite, quad_radial
from .power_breit import breit_N, breit_V, breit_V_quadrature
from .radial import (
    RadialParams,
    compute_helpers,
    ladder,
    radial_closed_form,
    radial_direct_series,
)

BENCH = dict(n=99.5, nprime=99.51, zeta=1.1, zetaprime=1.2)
RADIAL_METHODS = ("ladder", "series", "closed25", "closed26", "closed27", "closed28", "quadrature")
WARMUP = 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision: PrecisionConfig = DEFAULT
    method: str = "ladder"
    output_format: str = "csv"
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.method not in RADIAL_METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return "" if x is None else str(x)


def render(rows: List[Dict], columns: Sequence[str], output_format: str) -> str:
    if output_format == "json":
        return json.dumps([{c: r.get(c) for c in columns} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _timed(fn: Callable):
    t0 = time.perf_counter_ns()
    v = fn()
    return v, time.perf_counter_ns() - t0


# ---------------------------------------------------------------------------
# commands

def cmd_radial(n: float, nprime: float, zeta: float, zetaprime: float, L_max: int,
               method: str, cfg: RunConfig = RunConfig(), tol: float = 1e-10) -> List[Dict]:
    """One row per L: value of R^L, method used, elapsed time.

    With method=ladder the whole table comes from one call; each row carries
    that call's time.
    """
    if method not in RADIAL_METHODS:
        raise UsageError(f"unknown method {method!r}")
    if L_max < 0:
        raise UsageError("L_max must be >= 0")
    p = RadialParams(n, nprime, zeta, zetaprime)
    prec = cfg.precision
    rows = []
    if method == "ladder":
        for _ in range(WARMUP):
            ladder(p, L_max, prec)
        tab, dt = _timed(lambda: ladder(p, L_max, prec))
        for L in range(L_max + 1):
            rows.append(dict(L=L, R=float(tab.R[L]), method=method, elapsed_ns=dt,
                             route=tab.routes[L], error=None))
        return rows
    q = QuadSpec(rel_tol=tol)
    for L in range(L_max + 1):
        if method == "series":
            fn = lambda: radial_direct_series(p, L, prec)
        elif method == "quadrature":
            fn = lambda: quad_radial(p, L, q=q).value
        else:
            fn = lambda: radial_closed_form(p, L, int(method[-2:]), prec)
        try:
            for _ in range(WARMUP):
                fn()
            v, dt = _timed(fn)
            rows.append(dict(L=L, R=float(v), method=method, elapsed_ns=dt, route=method, error=None))
        except NumericalError as exc:
            rows.append(dict(L=L, R=None, method=method, elapsed_ns=None, route=method,
                             error=f"{type(exc).__name__}: {exc}"))
    return rows


def _hyp_params(b: float, c0: float, z: float) -> RadialParams:
    # 2F1(1, b; c0 + L; z) is the partner channel of (n, n') = (b - c0 + 1, c0 - 2)
    # at z' = z; only the ratio of the exponents matters.
    return RadialParams(b - c0 + 1.0, c0 - 2.0, 1.0 - z, z)


def hyp_args_from_orbitals(n: float, nprime: float, zeta: float,
                           zetaprime: float) -> Tuple[float, float, float]:
    """(b, c0, z) of the partner-channel function 2F1(1, n+n'+1; n'+L+2; z')."""
    return n + nprime + 1.0, nprime + 2.0, zetaprime / (zeta + zetaprime)


def cmd_hyp_table(b: float, c0: float, z: float, L_max: int,
                  cfg: RunConfig = RunConfig()) -> List[Dict]:
    """2F1(1, b; c0 + L; z) by series, by the L-ladder and extracted from R^L.

    ``extracted`` inverts R^L = e h1 F - m with R^L from :func:`ladder`.
    """
    if L_max < 0:
        raise UsageError("L_max must be >= 0")
    if not 0.0 <= z < 1.0:
        raise UsageError("z must lie in [0, 1)")
    prec = cfg.precision
    if z == 0.0:
        return [dict(L=L, series=1.0, ladder=1.0, extracted=1.0, error=None)
                for L in range(L_max + 1)]
    series = [float(hyp2f1_unit_a(b, c0 + L, z, prec)) for L in range(L_max + 1)]
    lad: List[Optional[float]] = [None] * (L_max + 1)
    ext: List[Optional[float]] = [None] * (L_max + 1)
    err = None
    try:
        p = _hyp_params(b, c0, z)
        tab = ladder(p, L_max, prec)
        lad = [float(v) for v in tab.frak_R_partner]
        for L in range(L_max + 1):
            try:
                h = compute_helpers(p, L, prec)
                ext[L] = float((tab.R[L] + h.m) / (h.e * h.h1))
            except NumericalError:
                ext[L] = None
    except (NumericalError, DomainError) as exc:
        err = f"{type(exc).__name__}: {exc}"
    return [dict(L=L, series=series[L], ladder=lad[L], extracted=ext[L], error=err)
            for L in range(L_max + 1)]


def _median_ns(fn: Callable, repetitions: int) -> int:
    for _ in range(WARMUP):
        fn()
    samples = []
    for _ in range(repetitions):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return int(statistics.median(samples))


def cmd_bench(L_max: int, repetitions: int, params: Optional[Dict] = None,
              cfg: RunConfig = RunConfig()) -> List[Dict]:
    """Median timings per L.

    t_series_ns: one R^L by the two-series formula.
    t_ladder_ns: the whole table R^0..R^L by the ladder, so the cumulative
    ladder cost up to L is the value in row L, while the cumulative series
    cost is the sum of the series column up to L.
    """
    if repetitions < 10:
        raise UsageError("repetitions must be >= 10")
    if L_max < 0:
        raise UsageError("L_max must be >= 0")
    p = RadialParams(**(params or BENCH))
    prec = cfg.precision
    rows = []
    for L in range(L_max + 1):
        ts = _median_ns(lambda: radial_direct_series(p, L, prec), repetitions)
        tl = _median_ns(lambda: ladder(p, L, prec), repetitions)
        rows.append(dict(L=L, t_series_ns=ts, t_ladder_ns=tl))
    return rows


def bench_totals(p: RadialParams, L_max: int, repetitions: int,
                 prec: PrecisionConfig = DEFAULT) -> Dict[str, int]:
    """Cumulative cost of all R^0..R^L_max by each route (medians)."""
    series = _median_ns(lambda: [radial_direct_series(p, L, prec) for L in range(L_max + 1)],
                        repetitions)
    lad = _median_ns(lambda: ladder(p, L_max, prec), repetitions)
    return dict(L_max=L_max, series_ns=series, ladder_ns=lad)


def parse_orbital(text: str) -> Orbital:
    try:
        n, l, m, zeta = text.split(",")
        return Orbital(float(n), int(l), int(m), float(zeta))
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad orbital {text!r} (want n,l,m,zeta): {exc}") from None


def cmd_eri(orbitals: Sequence[Orbital], method: str = "ladder", convention: str = "complex",
            cfg: RunConfig = RunConfig()) -> List[Dict]:
    if method not in ("ladder", "series"):
        raise UsageError("eri method must be ladder or series")
    v = eri(*orbitals, convention=convention, method=method, cfg=cfg.precision)
    return [dict(J=v, method=method, convention=convention)]


def cmd_breit(kind: str, args: argparse.Namespace, method: str, tol: float,
              cfg: RunConfig = RunConfig()) -> List[Dict]:
    q = QuadSpec(rel_tol=tol)
    if kind == "N":
        if method == "quadrature":
            p = RadialParams(args.n, args.nprime, args.zeta, args.zetaprime)
            v = float(quad_radial(p, args.L, args.L + 3.0, True, q).value)
        else:
            v = float(breit_N(args.n, args.nprime, args.zeta, args.zetaprime, args.L,
                              literal_step=args.literal_step, cfg=cfg.precision, q=q))
        return [dict(kind="N", L=args.L, value=v, method=method)]
    vargs = (args.n1, args.n1p, args.zeta1, args.zeta1p, args.n2, args.zeta2, args.L)
    if method == "quadrature":
        v = breit_V_quadrature(*vargs, q=q)
    else:
        v = breit_V(*vargs, cfg=cfg.precision)
    return [dict(kind="V", L=args.L, value=v, method=method)]


def cmd_verify(seed: int, samples: int = 100, tol: float = 1e-9) -> List[Dict]:
    rep = identity_suite(samples, seed, tol)
    return [dict(identity=r.name, max_rel_dev=r.max_rel_dev, max_condition=r.max_condition,
                 samples=r.samples, passed=r.passed) for r in rep.results]


# ---------------------------------------------------------------------------
# argument parsing

def _common(sp):
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default=None, help="write to PATH instead of stdout")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)


def _radial_args(sp, defaults=True):
    for name in ("n", "nprime", "zeta", "zetaprime"):
        sp.add_argument(f"--{name}", type=float, default=BENCH[name] if defaults else None,
                        required=not defaults)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nsto-eri", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("radial", help="R^L for L = 0..L_max")
    _radial_args(sp)
    sp.add_argument("--L-max", type=int, default=10)
    sp.add_argument("--method", choices=RADIAL_METHODS, default="ladder")
    _common(sp)

    sp = sub.add_parser("hyp-table", help="2F1(1, b; c0+L; z) by series, ladder and extraction")
    sp.add_argument("--b", type=float, default=BENCH["n"] + BENCH["nprime"] + 1.0)
    sp.add_argument("--c0", type=float, default=BENCH["nprime"] + 2.0)
    sp.add_argument("--z", type=float, default=BENCH["zetaprime"] / (BENCH["zeta"] + BENCH["zetaprime"]))
    for name in ("n", "nprime", "zeta", "zetaprime"):
        sp.add_argument(f"--{name}", type=float, default=None,
                        help="give all four to set b, c0, z from orbital parameters")
    sp.add_argument("--L-max", type=int, default=10)
    sp.add_argument("--method", default="all")
    _common(sp)

    sp = sub.add_parser("eri", help="normalized repulsion integral of four orbitals")
    sp.add_argument("orbitals", nargs=4, metavar="n,l,m,zeta")
    sp.add_argument("--method", choices=("ladder", "series"), default="ladder")
    sp.add_argument("--convention", choices=("complex", "real"), default="complex")
    _common(sp)

    sp = sub.add_parser("breit", help="Breit radial integrals N^L or V^L")
    sp.add_argument("kind", choices=("N", "V"))
    sp.add_argument("--n", type=float, default=4.0)
    sp.add_argument("--nprime", type=float, default=4.0)
    sp.add_argument("--zeta", type=float, default=2.0)
    sp.add_argument("--zetaprime", type=float, default=2.0)
    sp.add_argument("--n1", type=float, default=2.0)
    sp.add_argument("--n1p", type=float, default=2.0)
    sp.add_argument("--zeta1", type=float, default=1.0)
    sp.add_argument("--zeta1p", type=float, default=1.0)
    sp.add_argument("--n2", type=float, default=4.0, help="combined n2 + n2'")
    sp.add_argument("--zeta2", type=float, default=2.0, help="combined zeta2 + zeta2'")
    sp.add_argument("--L", type=int, default=0)
    sp.add_argument("--literal-step", action="store_true",
                    help="step function at r1 - r2 > 1 instead of r1 > r2 (N only)")
    sp.add_argument("--method", choices=("analytic", "quadrature"), default="analytic")
    _common(sp)

    sp = sub.add_parser("bench", help="series vs ladder timings, CSV L,t_series_ns,t_ladder_ns")
    _radial_args(sp)
    sp.add_argument("--L-max", type=int, default=100)
    sp.add_argument("--repetitions", type=int, default=30)
    sp.add_argument("--method", default="both")
    _common(sp)

    sp = sub.add_parser("verify", help="run the identity suite")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--method", default="identities")
    _common(sp)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = RunConfig(output_format=args.format, output_path=args.out)
    try:
        if args.cmd == "radial":
            rows = cmd_radial(args.n, args.nprime, args.zeta, args.zetaprime, args.L_max,
                              args.method, cfg, tol=args.tol or 1e-10)
            emit(render(rows, ("L", "R", "method", "elapsed_ns", "route", "error"), cfg.output_format), cfg)
            return 0 if any(r["R"] is not None for r in rows) else 1
        if args.cmd == "hyp-table":
            b, c0, z = args.b, args.c0, args.z
            orb = (args.n, args.nprime, args.zeta, args.zetaprime)
            if any(v is not None for v in orb):
                if any(v is None for v in orb):
                    raise UsageError("--n, --nprime, --zeta and --zetaprime go together")
                b, c0, z = hyp_args_from_orbitals(*orb)
            rows = cmd_hyp_table(b, c0, z, args.L_max, cfg)
            emit(render(rows, ("L", "series", "ladder", "extracted", "error"), cfg.output_format), cfg)
            return 0
        if args.cmd == "eri":
            orbs = [parse_orbital(t) for t in args.orbitals]
            rows = cmd_eri(orbs, args.method, args.convention, cfg)
            emit(render(rows, ("J", "method", "convention"), cfg.output_format), cfg)
            return 0
        if args.cmd == "breit":
            rows = cmd_breit(args.kind, args, args.method, args.tol or 1e-10, cfg)
            emit(render(rows, ("kind", "L", "value", "method"), cfg.output_format), cfg)
            return 0
        if args.cmd == "bench":
            params = dict(n=args.n, nprime=args.nprime, zeta=args.zeta, zetaprime=args.zetaprime)
            rows = cmd_bench(args.L_max, args.repetitions, params, cfg)
            emit(render(rows, ("L", "t_series_ns", "t_ladder_ns"), cfg.output_format), cfg)
            return 0
        if args.cmd == "verify":
            rows = cmd_verify(args.seed, args.samples, args.tol or 1e-9)
            emit(render(rows, ("identity", "max_rel_dev", "max_condition", "samples", "passed"),
                        cfg.output_format), cfg)
            return 0 if all(r["passed"] for r in rows) else 1
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
