"""Command-line driver: run sweeps, regenerate figure presets, validate.

Exit status is 0 only when every emitted row converged (and, for validate,
when the cross-solver consistency thresholds hold).
"""

import argparse
import json
import os
import sys

from .errors import ConfigurationError, CapabilityError
from .model import ModelParams, build_terms
from .exact_diag import low_spectrum
from .dmrg import DmrgConfig
from .sweep import (SweepSpec, SweepResult, run_sweep, emit, preset,
                    threshold_scan, validate_suite, default_lambda_grid)


def _add_model_flags(p):
    p.add_argument("--N", type=int, default=12, help="number of sites")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--boundary", choices=("open", "periodic"), default="open")
    p.add_argument("--beta-on-odd", action="store_true",
                   help="put the beta-scaled field on odd instead of even sites")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="altchain",
        description="ground-state concurrence sweeps for alternating spin chains")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sweep", help="run one parameter sweep")
    ps.add_argument("--spec", help="JSON SweepSpec file (overrides all flags)")
    _add_model_flags(ps)
    ps.add_argument("--vary", choices=("lambda", "alpha", "beta", "kappa"),
                    default="lambda")
    ps.add_argument("--from", dest="start", type=float, default=0.2)
    ps.add_argument("--to", dest="stop", type=float, default=2.0)
    ps.add_argument("--points", type=int, default=37)
    ps.add_argument("--pairs", default="nn_J1",
                    help="comma list of nn_J1,nn_J2,nnn,custom(i,j)")
    ps.add_argument("--solver", choices=("exact", "free_fermion", "dmrg", "auto"),
                    default="auto")
    ps.add_argument("--seed", type=int, default=7)
    ps.add_argument("--max-bond", type=int, default=128)
    ps.add_argument("--adiabatic", action="store_true",
                    help="warm-start each dmrg point from the previous one")
    ps.add_argument("--edge-pairs", action="store_true",
                    help="literal chain-start pairs instead of center pairs")
    ps.add_argument("--deterministic-timing", action="store_true",
                    help="write 0 in the seconds column (byte-stable output)")
    ps.add_argument("--out", help="output path (.csv or .json)")
    ps.add_argument("--dump-spectrum", metavar="PATH",
                    help="also write the lowest exact levels as JSON "
                         "(level-cross inspection, N <= 20)")

    pp = sub.add_parser("preset", help="regenerate a standard figure family")
    pp.add_argument("name", choices=("fig2", "fig3", "fig4"))
    pp.add_argument("--N", type=int, default=59)
    pp.add_argument("--solver", default="dmrg",
                    choices=("exact", "free_fermion", "dmrg", "auto"))
    pp.add_argument("--out", required=True, help="output directory for CSVs")
    pp.add_argument("--seed", type=int, default=7)
    pp.add_argument("--deterministic-timing", action="store_true")
    pp.add_argument("--threshold-scan", choices=("alpha", "beta"),
                    help="fig3 only: emit (value, max concurrence) rows instead")

    pv = sub.add_parser("validate", help="run the cross-solver consistency suite")
    pv.add_argument("--seed", type=int, default=11)
    pv.add_argument("--points", type=int, default=6)
    return parser


def _spec_from_flags(args) -> SweepSpec:
    base = ModelParams(gamma=args.gamma, alpha=args.alpha, beta=args.beta,
                       kappa=args.kappa, n_sites=args.N, boundary=args.boundary)
    return SweepSpec(base=base, vary=args.vary,
                     grid=(args.start, args.stop, args.points),
                     pairs=tuple(args.pairs.split(",")),
                     solver=args.solver, seed=args.seed,
                     dmrg=DmrgConfig(max_bond=args.max_bond, seed=args.seed),
                     adiabatic=args.adiabatic, edge_pairs=args.edge_pairs,
                     beta_on_odd=args.beta_on_odd,
                     deterministic_timing=args.deterministic_timing,
                     output_path=args.out)


def _cmd_sweep(args) -> int:
    if args.spec:
        with open(args.spec) as f:
            spec = SweepSpec.from_dict(json.load(f))
    else:
        spec = _spec_from_flags(args)
    result = run_sweep(spec)
    if not spec.output_path:
        emit(result, "csv", sys.stdout)
    if args.dump_spectrum:
        levels = low_spectrum(build_terms(spec.base, spec.beta_on_odd))
        with open(args.dump_spectrum, "w") as f:
            json.dump(levels, f, indent=1)
    return 0 if result.all_converged else 1


def _cmd_preset(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    kwargs = dict(n_sites=args.N, solver=args.solver, seed=args.seed,
                  deterministic_timing=args.deterministic_timing)
    if args.threshold_scan:
        if args.name != "fig3":
            raise ConfigurationError("threshold scan belongs to the fig3 preset")
        rows = threshold_scan(axis=args.threshold_scan, n_sites=args.N,
                              solver=args.solver if args.solver != "dmrg" else "auto",
                              seed=args.seed,
                              deterministic_timing=args.deterministic_timing)
        path = os.path.join(args.out, f"fig3_threshold_{args.threshold_scan}.csv")
        emit(SweepResult(spec=None, rows=rows), "csv", path)
        print(path)
        return 0 if all(r.converged for r in rows) else 1
    ok = True
    for spec in preset(args.name, output_dir=args.out, **kwargs):
        result = run_sweep(spec)
        ok = ok and result.all_converged
        print(spec.output_path)
    return 0 if ok else 1


def _cmd_validate(args) -> int:
    report = validate_suite(seed=args.seed, n_points=args.points)
    print(json.dumps(report, indent=1))
    return 0 if report["ok"] else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "preset":
            return _cmd_preset(args)
        return _cmd_validate(args)
    except (ConfigurationError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
