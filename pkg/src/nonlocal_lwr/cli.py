"""Command-line surface: simulate, reconstruct, sweep, kernel-info.

Exit codes: 0 success, 2 config error, 3 numerical error, 4 data error.
Failures print a single machine-parsable line `ErrorClass: message` to
stderr. All numeric CSV output uses full round-trip precision; sweep
failures are isolated per combination.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import boundary as bd
from . import config as cfgmod
from . import diagrams as fdm
from . import kernels as kn
from . import ngsim
from .errors import (
    ConfigError,
    DataError,
    NonlocalLWRError,
    NumericalError,
)
from .grid import export_field
from .metrics import relative_l2
from .solver import CLASSICAL, SPACETIME, Scenario, run


def _manifest(scen: Scenario, result, er=None, extra=None) -> dict:
    g = scen.grid
    man = {
        "model": scen.model,
        "strategy": scen.strategy,
        "grid": {"a": g.a, "b": g.b, "T": g.T, "n": g.n, "dt": g.dt,
                 "dx": g.dx, "n_t": g.n_t},
        "fd": {"family": scen.fd.family, "v_f": scen.fd.v_f,
               "rho_c": scen.fd.rho_c},
        "kernel": None if scen.kernel is None else {
            "family": scen.kernel.family, "d": scen.kernel.d,
            "K": scen.kernel.K, "beta": scen.kernel.beta},
        "gamma": scen.gamma,
        "variable_mode": scen.variable_mode,
        "cfl": result.cfl,
        "gamma_max_advisory": result.gamma_max,
        "clamp_count": result.clamp_count,
        "er": er,
    }
    if extra:
        man.update(extra)
    return man


def _write_error_report(path: str, scen: Scenario, report) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["model", "strategy", "kernel_family", "d", "gamma",
                    "er", "clamp_count"])
        w.writerow([scen.model, scen.strategy,
                    scen.kernel.family if scen.kernel else "",
                    repr(scen.kernel.d) if scen.kernel else "",
                    repr(scen.gamma), repr(report.er),
                    report.clamp_count])


def _simulate_from_config(cp, base_dir: str, out_dir: str) -> None:
    scen, io = cfgmod.build_scenario(cp, base_dir)
    result = run(scen)
    os.makedirs(out_dir, exist_ok=True)
    out_csv = os.path.join(out_dir, io["out_csv"])
    export_field(result.field, out_csv)
    er = None
    if io["truth_field"] is not None:
        report = relative_l2(result.field, io["truth_field"],
                             mask=result.interior_mask,
                             clamp_count=result.clamp_count)
        er = report.er
        _write_error_report(os.path.join(out_dir, "error_report.csv"),
                            scen, report)
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(_manifest(scen, result, er), fh, indent=2)
    if er is not None:
        print(f"relative L2 error: {er:.6g}")
    print(f"wrote {out_csv}")


def cmd_simulate(args) -> int:
    cp = cfgmod.load_config(args.config)
    _simulate_from_config(cp, os.path.dirname(os.path.abspath(args.config)),
                          args.out_dir)
    return 0


def cmd_reconstruct(args) -> int:
    """Ingest trajectories, rasterize the truth, simulate, and compare."""
    cp = cfgmod.load_config(args.config)
    base = os.path.dirname(os.path.abspath(args.config))
    grid = cfgmod.build_grid(cp)
    path = cfgmod._get(cp, "trajectories", "path", str, required=True)
    if not os.path.isabs(path):
        path = os.path.join(base, path)
    rcfg = cfgmod.build_raster_config(cp, grid)
    records = ngsim.load_trajectories(path,
                                      frame_period=rcfg.frame_period)
    truth = ngsim.rasterize(records, rcfg)
    os.makedirs(args.out_dir, exist_ok=True)
    truth_csv = os.path.join(args.out_dir, "truth.csv")
    export_field(truth, truth_csv, rho_m=rcfg.rho_m_physical)
    if not cp.has_section("io"):
        cp.add_section("io")
    cp.set("io", "truth_csv", truth_csv)
    _simulate_from_config(cp, base, args.out_dir)
    return 0


def _sweep_one(cp, base: str, model: str, strategy: str, family: str,
               d: float) -> dict:
    cp2 = _copy_config(cp)
    for sec in ("model", "kernel", "boundary"):
        if not cp2.has_section(sec):
            cp2.add_section(sec)
    cp2.set("model", "model", model)
    cp2.set("kernel", "family", family)
    cp2.set("kernel", "d_ft", repr(d))
    cp2.set("boundary", "strategy", strategy)
    row = {"model": model, "strategy": strategy, "family": family,
           "d": d, "gamma": None, "er": None, "clamp_count": None,
           "error_class": ""}
    try:
        scen, io = cfgmod.build_scenario(cp2, base)
        row["gamma"] = scen.gamma
        result = run(scen)
        row["clamp_count"] = result.clamp_count
        if io["truth_field"] is None:
            raise ConfigError("sweep requires io truth_csv")
        report = relative_l2(result.field, io["truth_field"],
                             mask=result.interior_mask,
                             clamp_count=result.clamp_count)
        row["er"] = report.er
    except NonlocalLWRError as exc:
        row["error_class"] = type(exc).__name__
    return row


def _copy_config(cp):
    import configparser
    cp2 = configparser.ConfigParser()
    cp2.read_dict({s: dict(cp.items(s)) for s in cp.sections()})
    return cp2


def cmd_sweep(args) -> int:
    cp = cfgmod.load_config(args.config)
    base = os.path.dirname(os.path.abspath(args.config))
    lists = cfgmod.sweep_lists(cp)
    combos = sorted(itertools.product(
        lists["models"], lists["strategies"], lists["families"],
        lists["lengths"]))
    os.makedirs(args.out_dir, exist_ok=True)
    with ThreadPoolExecutor(max_workers=max(args.threads, 1)) as pool:
        rows = list(pool.map(
            lambda c: _sweep_one(cp, base, *c), combos))
    out = os.path.join(args.out_dir, "sweep_results.csv")
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["model", "strategy", "family", "d", "gamma", "er",
                    "clamp_count", "error_class"])
        for row in rows:
            w.writerow([row["model"], row["strategy"], row["family"],
                        repr(row["d"]),
                        "" if row["gamma"] is None else repr(row["gamma"]),
                        "" if row["er"] is None else repr(row["er"]),
                        "" if row["clamp_count"] is None
                        else row["clamp_count"],
                        row["error_class"]])
    for row in rows:
        er = "failed: " + row["error_class"] if row["error_class"] \
            else f"er={row['er']:.4f}"
        print(f"{row['model']:>10} {row['strategy']:>12} "
              f"{row['family']:>20} d={row['d']:>6} {er}")
    print(f"wrote {out}")
    return 0


def cmd_kernel_info(args) -> int:
    kernel = kn.make_kernel(args.family, args.d)
    dk = kn.sample(kernel, args.dx)
    eta0 = kn.evaluate(kernel, 0.0)
    print(f"family: {kernel.family}")
    print(f"d: {kernel.d!r}")
    print(f"K: {kernel.K!r}")
    print(f"eta(0): {eta0!r}")
    if kernel.beta is None:
        print("beta: none (constant kernel, eta' = 0)")
    else:
        print(f"beta: {kernel.beta!r}")
        fd = fdm.FundamentalDiagram(args.fd_family, args.v_f, args.rho_c)
        gm = kn.gamma_max(fd.v_f, fdm.vprime_sup(fd), kernel.beta, eta0)
        print(f"gamma_max: {gm!r}")
        if args.gamma > gm:
            print(f"warning: gamma={args.gamma!r} exceeds "
                  f"gamma_max={gm!r}")
    print("i,s,weight")
    for i, wgt in enumerate(dk.weights):
        print(f"{i},{i * dk.dx!r},{float(wgt)!r}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nonlocal-lwr",
        description="Nonlocal LWR traffic simulation and reconstruction")
    p.add_argument("--out-dir", default="out", help="output directory")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0,
                   help="seed for synthetic fixtures")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="run one scenario from a config")
    ps.add_argument("--config", required=True)
    ps.set_defaults(func=cmd_simulate)

    pr = sub.add_parser("reconstruct",
                        help="ingest trajectories, simulate, compare")
    pr.add_argument("--config", required=True)
    pr.set_defaults(func=cmd_reconstruct)

    pw = sub.add_parser("sweep", help="run a kernel/strategy sweep")
    pw.add_argument("--config", required=True)
    pw.set_defaults(func=cmd_sweep)

    pk = sub.add_parser("kernel-info", help="print kernel diagnostics")
    pk.add_argument("--family", required=True, choices=kn.FAMILIES)
    pk.add_argument("--d", type=float, required=True)
    pk.add_argument("--dx", type=float, required=True)
    pk.add_argument("--gamma", type=float, default=0.0)
    pk.add_argument("--fd-family", default=fdm.GREENSHIELDS)
    pk.add_argument("--v-f", type=float, default=60.0)
    pk.add_argument("--rho-c", type=float, default=0.5)
    pk.set_defaults(func=cmd_kernel_info)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
