"""``eur`` command line.

Exit status: 0 on success, 1 when a computation fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import adiabatic, entropy, spectral, sweep
from .basis import BasisSpec, trapezoid_axis

FIT_MODEL_NAMES = {
    "linear": "linear_alpha", "linear_alpha": "linear_alpha",
    "quadratic": "quadratic_alpha", "quadratic_alpha": "quadratic_alpha",
    "log": "linear_logalpha", "loglinear": "linear_logalpha", "linear_logalpha": "linear_logalpha",
}
ENTROPY_METHODS = ("numeric", "analytic-small", "analytic-large", "adiabatic-numeric-FT")


class UsageError(Exception):
    pass


def _nonneg_float(s):
    v = float(s)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {s}")
    return v


def _pos_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {s}")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {s}")
    return v


def _quad_order(s):
    v = int(s)
    if not 2 <= v <= 400:
        raise argparse.ArgumentTypeError(f"must be in [2, 400], got {s}")
    return v


def _threshold(s):
    v = float(s)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {s}")
    return v


def _common(p: argparse.ArgumentParser, alpha=True):
    p.add_argument("--config", metavar="PATH", help="key=value file of defaults; flags override it")
    p.add_argument("--k1", type=_pos_float, default=1.0)
    p.add_argument("--k2", type=_pos_float, default=1.0)
    p.add_argument("--basis", type=_nonneg_int, default=40, metavar="N_MAX", help="total-quanta truncation")
    p.add_argument("--adapt-basis", action="store_true", help="raise basis frequencies to alpha**(1/3)")
    if alpha:
        p.add_argument("--alpha", type=_nonneg_float, default=0.0)


def _grid_flags(p):
    p.add_argument("--alpha-min", type=_nonneg_float)
    p.add_argument("--alpha-max", type=_nonneg_float)
    p.add_argument("--alpha-step", type=_pos_float)
    p.add_argument("--alphas", help="explicit comma-separated alpha list")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eur", description="Entropic uncertainty of the coupled quartic oscillator")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    p = sub.add_parser("spectrum", help="lowest eigenvalues")
    _common(p)
    p.add_argument("--count", type=_nonneg_int, default=10)
    p.add_argument("--dump-matrix", metavar="PATH", help="write the parity blocks as row/col/value triplets")

    p = sub.add_parser("entropy", help="ground-state entropies at one alpha")
    _common(p)
    p.add_argument("--method", choices=ENTROPY_METHODS, default="numeric")
    p.add_argument("--quad-order", type=_quad_order, default=64)

    p = sub.add_parser("sweep", help="entropy table over an alpha grid")
    _common(p, alpha=False)
    _grid_flags(p)
    p.add_argument("--methods", default="numeric")
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--no-convergence-check", action="store_true")
    p.add_argument("--quad-order", type=_quad_order, default=128)

    p = sub.add_parser("fit", help="least-squares fit of a sweep column")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--in", dest="inp", required=True, metavar="PATH")
    p.add_argument("--field", choices=("S_q", "S_p", "S_sum", "sum"), default="S_sum")
    p.add_argument("--model", choices=sorted(FIT_MODEL_NAMES), default="linear")
    p.add_argument("--method", help="record method to fit (required if the file mixes methods)")

    p = sub.add_parser("compare", help="per-alpha differences between two methods")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--in", dest="inp", required=True, metavar="PATH")
    p.add_argument("--reference")
    p.add_argument("--other")

    p = sub.add_parser("track", help="follow the (N, 0) state along alpha")
    _common(p, alpha=False)
    p.add_argument("--n", type=_nonneg_int, required=True)
    _grid_flags(p)
    p.add_argument("--threshold", type=_threshold, default=0.5)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("dump-state", help="write a wavefunction or density grid as CSV")
    _common(p)
    p.add_argument("--state", choices=("numeric", "small-alpha", "large-alpha"), default="numeric")
    p.add_argument("--space", choices=("position", "momentum"), default="position")
    p.add_argument("--quantity", choices=("amplitude", "density"), default="density")
    p.add_argument("--half-width", type=_pos_float, default=6.0)
    p.add_argument("--points", type=_nonneg_int, default=121)
    p.add_argument("--out", required=True, metavar="PATH")
    return parser


def _config_tokens(path: str) -> list[str]:
    tokens = []
    try:
        fh = open(path)
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}")
    with fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"--config {path}:{n}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if val.lower() in ("true", "yes", "on"):
                tokens.append(flag)
            elif val.lower() in ("false", "no", "off"):
                continue
            else:
                tokens += [flag, val]
    return tokens


def parse_args(argv=None, parser=None) -> argparse.Namespace:
    """Parse and validate; usage problems exit with status 2."""
    parser = parser or build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            extra = _config_tokens(args.config)
        except UsageError as exc:
            parser.error(str(exc))
        # config values first so explicit flags win
        args = parser.parse_args(argv[:1] + extra + argv[1:])
    try:
        _validate(args)
    except UsageError as exc:
        parser.error(str(exc))
    return args


def _alpha_grid(args, default_step=None):
    if args.alphas:
        if any(v is not None for v in (args.alpha_min, args.alpha_max, args.alpha_step)):
            raise UsageError("--alphas cannot be combined with --alpha-min/--alpha-max/--alpha-step")
        try:
            vals = tuple(float(v) for v in args.alphas.split(","))
        except ValueError:
            raise UsageError(f"--alphas: not a number list: {args.alphas!r}")
        if any(v < 0 for v in vals) or any(b <= a for a, b in zip(vals, vals[1:])):
            raise UsageError("--alphas must be non-negative and strictly increasing")
        return vals
    lo = 0.0 if args.alpha_min is None else args.alpha_min
    if args.alpha_max is None:
        raise UsageError("--alpha-max is required (or give --alphas)")
    step = args.alpha_step if args.alpha_step is not None else default_step
    if step is None:
        raise UsageError("--alpha-step is required (or give --alphas)")
    if args.alpha_max < lo:
        raise UsageError("--alpha-max must not be below --alpha-min")
    return sweep.alpha_range(lo, args.alpha_max, step)


def _validate(args):
    if args.verb in ("sweep", "track"):
        args.grid = _alpha_grid(args, default_step=0.01 if args.verb == "track" else None)
    if args.verb == "sweep":
        methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
        bad = [m for m in methods if m not in sweep.METHODS]
        if bad or not methods:
            raise UsageError(f"--methods: unknown {bad or 'empty'}; choose from {', '.join(sweep.METHODS)}")
        args.method_list = methods
        large = [m for m in methods if m in sweep.LARGE_ALPHA_METHODS]
        if large and args.grid[0] < 1:
            raise UsageError(f"--methods {','.join(large)} need alpha >= 1")
        if large and (args.k1 != 1 or args.k2 != 1):
            raise UsageError("strong-coupling methods require --k1 1 --k2 1")
    if args.verb == "entropy" and args.method in sweep.LARGE_ALPHA_METHODS:
        if args.alpha < 1:
            raise UsageError(f"--method {args.method} needs --alpha >= 1")
        if args.k1 != 1 or args.k2 != 1:
            raise UsageError("strong-coupling methods require --k1 1 --k2 1")
    if args.verb == "track" and args.n > args.basis:
        raise UsageError(f"--n {args.n} exceeds --basis {args.basis}")
    if args.verb == "dump-state":
        if args.points < 3:
            raise UsageError("--points must be at least 3")
        if args.state == "large-alpha" and args.alpha <= 0:
            raise UsageError("--state large-alpha needs --alpha > 0")


def _params(args, alpha=None):
    return spectral.HamiltonianParams(args.k1, args.k2, args.alpha if alpha is None else alpha)


def _spec(args, params):
    return BasisSpec.for_params(params, args.basis, adapt=args.adapt_basis)


def _summary(S_q, S_p, E0=None):
    chk = entropy.check_eur(S_q + S_p)
    line = f"S_q={S_q:.6f} S_p={S_p:.6f} sum={S_q + S_p:.6f} bbm_margin={chk.margin:.6f}"
    if E0 is not None:
        line += f" E0={E0:.8f}"
    if chk.saturated:
        line += " saturated"
    if not chk.satisfied:
        line += " VIOLATES-BOUND"
    return line


def _cmd_spectrum(args):
    params = _params(args)
    spec = _spec(args, params)
    for p in spectral.spectrum(params, spec, args.count):
        print(f"{p.energy:.12g} {p.block[0]}-{p.block[1]}")
    if args.dump_matrix:
        spectral.dump_triplets(spectral.assemble_hamiltonian(params, spec), args.dump_matrix)


def _cmd_entropy(args):
    params = _params(args)
    if args.method == "numeric":
        g = spectral.ground_state(params, _spec(args, params))
        r = entropy.entropies_from_coefficients(g)
        print(_summary(r.S_q, r.S_p, g.energy))
        return
    if args.method == "analytic-small":
        r = entropy.analytic_entropies_small_alpha(params)
        print(_summary(r.S_q, r.S_p, adiabatic.adiabatic_ground_energy(params)))
        return
    cfg = sweep.SweepConfig((args.alpha,), (args.method,),
                            momentum_grid=sweep.MomentumGridConfig(quad_order=max(args.quad_order, 96)))
    rec = sweep.run_sweep(cfg)[0]
    print(_summary(rec.S_q, rec.S_p, rec.E0))


def _cmd_sweep(args):
    cfg = sweep.SweepConfig(args.grid, args.method_list, args.k1, args.k2, args.basis, args.adapt_basis,
                            check_convergence=not args.no_convergence_check,
                            momentum_grid=sweep.MomentumGridConfig(quad_order=args.quad_order))
    records = sweep.run_sweep(cfg)
    sweep.write_records(records, args.out, args.format)
    print(f"wrote {len(records)} records to {args.out}")


def _cmd_fit(args):
    records = sweep.read_records(args.inp)
    if args.method:
        records = [r for r in records if r.method == args.method]
        if not records:
            raise UsageError(f"no records with method {args.method!r} in {args.inp}")
    model = sweep.fit(records, args.field, FIT_MODEL_NAMES[args.model])
    print(f"{model.kind} {args.field}: {model.describe()}")
    print("coefficients " + " ".join(f"{c:.12g}" for c in model.coefficients))
    print(f"rms {model.rms:.6g}")


def _cmd_compare(args):
    records = sweep.read_records(args.inp)
    cmp = sweep.compare_methods(records, args.reference, args.other)
    print(f"# {cmp.reference} - {cmp.other}")
    print("alpha,d_S_q,d_S_p,d_sum")
    for r in cmp.rows:
        print(f"{r.alpha:.12g},{r.d_S_q:.6g},{r.d_S_p:.6g},{r.d_sum:.6g}")
    for name, s in cmp.summary().items():
        print(f"# |{name}| max {s['max']:.6g} mean {s['mean']:.6g} systematic {cmp.systematic(name)}")


def _cmd_track(args):
    cfg = sweep.SweepConfig(args.grid, ("numeric",), args.k1, args.k2, args.basis, state="tracked",
                            tracked_n=args.n, overlap_threshold=args.threshold)
    records = sweep.run_sweep(cfg)
    if args.out:
        sweep.write_records(records, args.out, args.format)
        print(f"wrote {len(records)} records to {args.out}")
    else:
        sys.stdout.write(sweep.records_to_csv(records))


def _cmd_dump_state(args):
    params = _params(args)
    a, _ = trapezoid_axis(args.half_width, args.points)
    A, B = np.meshgrid(a, a, indexing="ij")
    if args.state == "numeric":
        g = spectral.ground_state(params, _spec(args, params))
        values = entropy.amplitude_from_coefficients(g, a, a, args.space)
    elif args.state == "small-alpha":
        st = adiabatic.position_gs_small_alpha(params)
        values = st(A, B) if args.space == "position" else st.momentum(A, B)
    else:
        st = adiabatic.position_gs_large_alpha(args.alpha)
        if args.space == "position":
            values = st(A, B)
        else:
            values = adiabatic.momentum_gs_large_alpha(args.alpha, a, a, norm_tol=None).amplitudes
    values = np.abs(values) ** 2 if args.quantity == "density" else np.real_if_close(values)
    if np.iscomplexobj(values):
        values = np.abs(values)
    adiabatic.dump_grid_csv(args.out, a, a, values, args.space)
    print(f"wrote {args.points}x{args.points} {args.space} {args.quantity} grid to {args.out}")


COMMANDS = {
    "spectrum": _cmd_spectrum, "entropy": _cmd_entropy, "sweep": _cmd_sweep, "fit": _cmd_fit,
    "compare": _cmd_compare, "track": _cmd_track, "dump-state": _cmd_dump_state,
}


def execute(args) -> int:
    try:
        COMMANDS[args.verb](args)
    except UsageError as exc:
        print(f"eur {args.verb}: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, RuntimeError, OSError) as exc:
        print(f"eur {args.verb}: computation failed: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    args = parse_args(argv)
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
