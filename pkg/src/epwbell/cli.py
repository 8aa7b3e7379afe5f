"""Command-line driver: ``epwbell {fig1,finite-s,oracle,lhv-audit}``.

Exit codes: 0 success, 1 usage error, 2 I/O or convergence failure,
3 validation or audit failure.
"""

import argparse
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .bell import (
    DeltaLimitParams,
    F_closed,
    F_finite_s,
    F_quadrature,
    S_closed,
    S_finite_s,
    effective_K,
)
from .errors import ConvergenceError, DomainError
from .lhv import FLAG_SIGMAS, McConfig, estimate_D, lhv_audit
from .numerics.rng import MASK64
from .phase_space import ModePairParams
from .svgplot import line_plot

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VALIDATION = 0, 1, 2, 3

DEFAULTS = {
    "fig1": dict(q0=1.0, p0=-1.0, K=1.0, tau_min=0.0, tau_max=5.0, tau_step=0.01,
                 out="fig1", format="both"),
    "finite-s": dict(q0=1.0, p0=-1.0, s=[0.5, 0.1, 0.02], tau_min=0.0, tau_max=10.0,
                     tau_step=0.25, out="finite_s", format="both"),
    "oracle": dict(seed=0, cases=50, mc_cases=20, samples=1_000_000, chunks=4),
    "lhv-audit": dict(q0=1.0, p0=-1.0, s=[0.1], tau_min=0.0, tau_max=10.0, tau_step=0.25,
                      samples=1_000_000, seed=0, chunks=4, out="lhv_audit", format="csv"),
}

_CONVERTERS = {
    "q0": float, "p0": float, "K": float, "tau_min": float, "tau_max": float,
    "tau_step": float, "samples": int, "seed": int, "chunks": int, "cases": int,
    "mc_cases": int, "out": str, "format": str,
    "s": lambda v: [float(x) for x in str(v).split(",") if x.strip()],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    return f"{x:.12g}"


def tau_grid(tau_min: float, tau_max: float, tau_step: float) -> np.ndarray:
    if not tau_step > 0:
        raise UsageError("--tau-step must be positive")
    if tau_min > tau_max:
        raise UsageError("--tau-min must not exceed --tau-max")
    n = int(math.floor((tau_max - tau_min) / tau_step + 1e-9)) + 1
    return np.round(tau_min + tau_step * np.arange(n), 12)


def read_config(path: str) -> Dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the config file, then from command defaults."""
    config = {}
    if args.config:
        try:
            config = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    for key, default in DEFAULTS[args.command].items():
        if getattr(args, key, None) is not None:
            continue
        if key in config:
            try:
                value = _CONVERTERS[key](config[key])
            except ValueError as exc:
                raise UsageError(f"bad config value for {key}: {config[key]!r}") from exc
        else:
            value = default
        setattr(args, key, value)
    if getattr(args, "format", None) not in (None, "csv", "svg", "both"):
        raise UsageError("--format must be csv, svg or both")
    return args


def _outputs(args) -> Dict[str, Path]:
    base = Path(args.out)
    if base.suffix in (".csv", ".svg"):
        base = base.with_suffix("")
    paths = {}
    if args.format in ("csv", "both"):
        paths["csv"] = base.with_suffix(".csv")
    if args.format in ("svg", "both"):
        paths["svg"] = base.with_suffix(".svg")
    return paths


def _write_csv(path: Path, header: List[str], rows: List[List]) -> None:
    lines = [",".join(header)]
    lines += [",".join(v if isinstance(v, str) else fmt(v) for v in row) for row in rows]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _mode_params(args, s) -> ModePairParams:
    try:
        return ModePairParams(args.q0, args.p0, s)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def cmd_fig1(args) -> int:
    try:
        params = DeltaLimitParams(args.q0, args.p0, args.K)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    taus = tau_grid(args.tau_min, args.tau_max, args.tau_step)
    F = F_closed(taus, params)
    F3 = F_closed(3.0 * taus, params)
    S_over_K = S_closed(taus, params) / params.K
    out = _outputs(args)
    if "csv" in out:
        _write_csv(out["csv"], ["tau", "F", "F3", "S"],
                   [[t, f, f3, s] for t, f, f3, s in zip(taus, F, F3, S_over_K)])
    if "svg" in out:
        out["svg"].write_text(line_plot(
            taus, {"S/K": S_over_K}, xlabel="tau", ylabel="S/K",
            title=f"S(tau)/K, q0={args.q0:g}, p0={args.p0:g}",
        ))
    i = int(np.argmin(S_over_K))
    print(f"min S/K = {fmt(S_over_K[i])} at tau = {fmt(taus[i])}")
    for p in out.values():
        print(f"wrote {p}")
    return EXIT_OK


def cmd_finite_s(args) -> int:
    if not args.s or any(not s > 0 for s in args.s):
        raise UsageError("every --s must be positive")
    taus = tau_grid(args.tau_min, args.tau_max, args.tau_step)
    rows, curves = [], {}
    for s in args.s:
        params = _mode_params(args, s)
        s_vals = []
        for tau in taus:
            f = F_finite_s((tau, tau), params).value
            S = S_finite_s(float(tau), params).value
            rows.append([s, tau, f, S, effective_K(float(tau), params)])
            s_vals.append(S)
        curves[f"s={s:g}"] = s_vals
        print(f"s = {s:g}: min S_fin = {fmt(min(s_vals))}")
    out = _outputs(args)
    if "csv" in out:
        _write_csv(out["csv"], ["s", "tau", "F_fin", "S_fin", "K_eff"], rows)
    if "svg" in out:
        out["svg"].write_text(line_plot(taus, curves, xlabel="tau", ylabel="S_fin",
                                        title="normalized S(tau) at finite squeezing"))
    for p in out.values():
        print(f"wrote {p}")
    return EXIT_OK


def run_oracle(seed: int, n_cases: int, mc_cases: int, samples: int, chunks: int,
               echo=print) -> bool:
    """Closed form vs quadrature, then Monte Carlo vs quadrature, on random cases."""
    rng = np.random.default_rng(seed)
    ok = True
    for i in range(n_cases):
        q0, p0, tau = rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 5)
        params = DeltaLimitParams(q0, p0, 1.0)
        closed = F_closed(tau, params)
        quad = F_quadrature(tau, params).value
        rel = abs(closed - quad) / abs(closed)
        passed = rel <= 1e-8
        ok &= passed
        echo(f"closed  {i:3d} q0={q0:+.4f} p0={p0:+.4f} tau={tau:.4f} "
             f"F={fmt(closed)} rel={rel:.2e} {'ok' if passed else 'FAIL'}")
    for i in range(min(mc_cases, n_cases)):
        q0, p0 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        s, t1, t2 = rng.uniform(0.05, 1.0), rng.uniform(0, 5), rng.uniform(0, 5)
        params = ModePairParams(q0, p0, s)
        quad = F_finite_s((t1, t2), params).value
        mc = estimate_D(params, (t1, t2), McConfig(samples, (seed * 1_000_003 + i) & MASK64, chunks))
        scale = max(mc.std_error, 1.0 / samples)
        z = abs(mc.mean - quad) / scale
        passed = z <= FLAG_SIGMAS
        ok &= passed
        echo(f"mc      {i:3d} q0={q0:+.4f} p0={p0:+.4f} s={s:.4f} t=({t1:.3f},{t2:.3f}) "
             f"D={fmt(quad)} mc={fmt(mc.mean)} z={z:.2f} {'ok' if passed else 'FAIL'}")
    return ok


def cmd_oracle(args) -> int:
    if args.cases < 0 or args.mc_cases < 0 or args.samples < 1 or args.chunks < 1:
        raise UsageError("case counts must be nonnegative and --samples/--chunks positive")
    ok = run_oracle(args.seed, args.cases, args.mc_cases, args.samples, args.chunks)
    print("oracle suite:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_lhv_audit(args) -> int:
    if not args.s or any(not s > 0 for s in args.s):
        raise UsageError("every --s must be positive")
    if args.samples < 1 or args.chunks < 1:
        raise UsageError("--samples and --chunks must be positive")
    taus = tau_grid(args.tau_min, args.tau_max, args.tau_step)
    mc = McConfig(args.samples, args.seed, args.chunks)
    rows, flags = [], 0
    for s in args.s:
        report = lhv_audit(_mode_params(args, s), taus, mc)
        flags += report.flags
        for r in report.rows:
            rows.append([s, r.tau, r.estimate.mean, r.estimate.std_error, str(int(r.flagged))])
        print(f"s = {s:g}: {report.flags} flag(s), verdict {report.verdict}")
    out = _outputs(args)
    if "csv" in out:
        _write_csv(out["csv"], ["s", "tau", "S_mc", "S_se", "flag"], rows)
    if "svg" in out:
        curves = {f"s={s:g}": [r[2] for r in rows if r[0] == s] for s in args.s}
        out["svg"].write_text(line_plot(taus, curves, xlabel="tau", ylabel="S (Monte Carlo)"))
    for p in out.values():
        print(f"wrote {p}")
    return EXIT_OK if flags == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="epwbell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value file supplying defaults")

    state = _Parser(add_help=False)
    state.add_argument("--q0", type=float)
    state.add_argument("--p0", type=float)

    grid = _Parser(add_help=False)
    grid.add_argument("--tau-min", dest="tau_min", type=float)
    grid.add_argument("--tau-max", dest="tau_max", type=float)
    grid.add_argument("--tau-step", dest="tau_step", type=float)
    grid.add_argument("--out")
    grid.add_argument("--format", choices=["csv", "svg", "both"])

    mc = _Parser(add_help=False)
    mc.add_argument("--samples", type=int)
    mc.add_argument("--seed", type=int)
    mc.add_argument("--chunks", type=int)

    squeeze = _Parser(add_help=False)
    squeeze.add_argument("--s", type=float, action="append", help="squeezing (repeatable)")

    p = sub.add_parser("fig1", parents=[common, state, grid], help="delta-limit S(tau)/K scan")
    p.add_argument("--K", type=float)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("finite-s", parents=[common, state, squeeze, grid],
                       help="normalized finite-squeezing scan")
    p.set_defaults(func=cmd_finite_s)

    p = sub.add_parser("oracle", parents=[common, mc], help="cross-validation suite")
    p.add_argument("--cases", type=int)
    p.add_argument("--mc-cases", dest="mc_cases", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("lhv-audit", parents=[common, state, squeeze, grid, mc],
                       help="Monte Carlo audit of S >= 0")
    p.set_defaults(func=cmd_lhv_audit)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(resolve(args))
    except UsageError as exc:
        print(f"epwbell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"epwbell: numerical failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"epwbell: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
