"""Command line entry point ``vofwave``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import kernels
from .harness import TABLE_LADDER, SPACE_LADDER, RunConfig, load_config, run_table
from .oracle import error_L2
from .stepper import ConfigurationError, RotheSolver

log = logging.getLogger("vofwave")

TABLE_PROBLEMS = (
    ("table1", "ex1"),
    ("table2", "ex2-I"),
    ("table3", "ex2-II"),
    ("table4", "ex2-III"),
    ("table5", "ex3"),
)


def _config(args) -> RunConfig:
    cfg = load_config(args.config, args.set)
    if args.out is not None:
        cfg.out = args.out
    if args.threads is not None:
        cfg.threads = args.threads
    cfg.check()
    return cfg


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
        log.info("wrote %s", path)


def _write_table(table, path):
    _emit(table.to_csv(), path)
    if path is not None:
        meta_path = Path(path).with_suffix(".meta.json")
        meta = dict(table.meta, failures={r.param: r.note for r in table.rows if r.note})
        meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True), encoding="utf-8")


def cmd_solve(args):
    cfg = _config(args)
    spec, exact = cfg.setup()
    solver = RotheSolver(spec, cfg.N, cfg.n, cfg.quad_order)
    state, report = solver.run()
    print(f"problem={cfg.problem} N={cfg.N} n={cfg.n} backend={report.backend} "
          f"wall={report.wall_time:.3f}s max_rel_residual={report.max_residual:.2e}")
    if exact is not None:
        print(f"E = {error_L2(solver.space, state, exact):.6g}")
    if cfg.out is None:
        return 0
    times = cfg.dump_times or tuple(np.linspace(0.0, spec.T, 11))
    xs = np.linspace(spec.a, spec.b, cfg.dump_points)
    basis_vals = solver.space.basis.values(xs)
    Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
    with open(cfg.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("x", "t", "phi"))
        for t in times:
            i = int(round(t / solver.tau))
            if not 0 <= i <= cfg.n:
                raise ConfigurationError(f"dump time {t} outside [0, T]")
            phi = basis_vals @ state.U[i]
            for x, p in zip(xs, phi):
                w.writerow((f"{x:.6g}", f"{i * solver.tau:.6g}", f"{p:.10g}"))
    log.info("wrote %s", cfg.out)
    return 0


def cmd_conv(kind):
    def run(args):
        cfg = _config(args)
        table = run_table(cfg, kind)
        _write_table(table, cfg.out)
        return 0 if all(r.error is not None for r in table.rows) else 1
    return run


def cmd_tables(args):
    cfg = _config(args)
    outdir = Path(cfg.out or "tables")
    ok = True
    for name, problem in TABLE_PROBLEMS:
        pcfg = replace(cfg, problem=problem, taus=TABLE_LADDER, Ns=SPACE_LADDER,
                       N=50, tau=TABLE_LADDER[-1])
        for kind in ("time", "space"):
            table = run_table(pcfg, kind)
            _write_table(table, outdir / f"{name}_{kind}.csv")
            ok &= all(r.error is not None for r in table.rows)
            print(f"{name} ({problem}, {kind})")
            for row in table.rows:
                order = "--" if row.order is None else f"{row.order:.3f}"
                err = "failed" if row.error is None else f"{row.error:.4e}"
                print(f"  {row.param:<10g} {err:>12} {order:>8}")
    return 0 if ok else 1


def cmd_validate(args):
    from .validation import run_all

    cfg = _config(args)
    results = run_all(threads=cfg.threads)
    for name, passed, detail in results:
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    return 0 if all(p for _, p, _ in results) else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vofwave",
        description="Variable-order fractionally damped wave equation: solver and convergence studies.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "solve": (cmd_solve, "single run; optional x,t,phi dump to --out"),
        "conv-time": (cmd_conv("time"), "time ladder at fixed N, CSV to --out"),
        "conv-space": (cmd_conv("space"), "space ladder at fixed tau, CSV to --out"),
        "validate": (cmd_validate, "oracle checks (weights, solvers, series)"),
        "tables": (cmd_tables, "all five benchmark tables into the --out directory"),
    }
    for name, (func, help_) in commands.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=Path, default=None, help="key = value config file")
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("kernel backend: %s", kernels.BACKEND)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"vofwave: configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
