"""Batch command-line front end.

Subcommands: gen-data, converge, assumptions, lineval, bounds. Every run
writes a manifest to the output directory before computing, holding the
fully resolved configuration so outputs can be regenerated byte-for-byte.

Exit codes: 0 success, 2 usage/validation error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, diagnostics, experiments, naive_bayes, synthetic
from .data import apply_minmax, load_feature_csv, minmax_scale
from .experiments import ConvergenceConfig, detect_two_regimes, mean_curve, run_lineval


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return "" if v is None else str(v)


def write_csv(path, header, rows) -> None:
    """CSV with '.' decimals, LF endings, 17-significant-digit reals."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_manifest(out_dir, subcommand, config, base_seed) -> None:
    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "subcommand": subcommand,
        "config": config,
        "base_seed": base_seed,
        "artifact_version": __version__,
        "output_dir": str(out_dir),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _int_list(text: str):
    return [int(v) for v in text.split(",") if v.strip()]


def _apply_config_file(args: argparse.Namespace, parser_defaults: dict) -> None:
    """Overlay --config JSON under explicitly passed flags."""
    if not getattr(args, "config", None):
        return
    with open(args.config, encoding="utf-8") as fh:
        file_cfg = json.load(fh)
    for key, val in file_cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValueError(f"unknown config key {key!r}")
        # flags override file: only take the file value where the flag kept its default
        if getattr(args, attr) == parser_defaults.get(attr):
            setattr(args, attr, val)


def cmd_gen_data(args) -> int:
    scaled = args.scaled if args.scaled is not None else args.k > 2
    spec = synthetic.MixtureSpec(args.k, args.n, scaled)
    out_dir = os.path.dirname(os.path.abspath(args.out)) or "."
    _write_manifest(out_dir, "gen-data",
                    {"k": args.k, "n": args.n, "m": args.m, "scaled": scaled,
                     "out": args.out}, args.seed)
    d = synthetic.sample(spec, args.m, args.seed)
    header = [f"f{i}" for i in range(d.n)] + ["label"]
    rows = [list(d.features[i]) + [int(d.labels[i])] for i in range(d.m)]
    write_csv(args.out, header, rows)
    return 0


def cmd_converge(args) -> int:
    from . import plots

    _write_manifest(args.out_dir, "converge",
                    {"k": args.k, "n_list": args.n_list, "eps0": args.eps0,
                     "repeats": args.repeats, "test_size": args.test_size,
                     "m_max": args.m_max, "l2": args.l2, "threads": args.threads},
                    args.seed)
    cfg = ConvergenceConfig(
        n_values=tuple(args.n_list), k=args.k, epsilon0=args.eps0,
        repeats=args.repeats, test_size=args.test_size, m_max=args.m_max,
        base_seed=args.seed, l2_weight=args.l2)
    records = experiments.run_convergence(None, cfg, threads=args.threads)

    result_rows = [(r.classifier, r.n, m, rep, err)
                   for r in records for m, rep, err in r.rows]
    result_rows.sort(key=lambda t: (t[0], t[1], t[2], t[3]))
    write_csv(os.path.join(args.out_dir, "results.csv"),
              ["classifier", "n", "m", "repeat", "test_error"], result_rows)

    summary = sorted(((r.classifier, r.n, r.m_conv_mean, r.m_conv_var)
                      for r in records), key=lambda t: (t[0], t[1]))
    write_csv(os.path.join(args.out_dir, "summary.csv"),
              ["classifier", "n", "m_conv_mean", "m_conv_var"], summary)

    for n in cfg.n_values:
        group = [r for r in records if r.n == n]
        plots.plot_error_curves(os.path.join(args.out_dir, f"error_curve_n{n}.svg"),
                                n, group)
    plots.plot_m_conv(os.path.join(args.out_dir, "m_conv_vs_n.svg"), records)
    plots.plot_m_conv(os.path.join(args.out_dir, "m_conv_vs_n_logx.svg"),
                      records, logx=True)
    return 0


def cmd_assumptions(args) -> int:
    _write_manifest(args.out_dir, "assumptions",
                    {"train": args.train, "label_column": args.label_column,
                     "discrete": args.discrete, "alpha": args.alpha}, 0)
    d = load_feature_csv(args.train, args.label_column)
    d, _ = minmax_scale(d)
    if args.discrete:
        model = naive_bayes.fit_discrete(d, args.alpha)
    else:
        model = naive_bayes.fit_gaussian(d)
    report = diagnostics.assumption_stats(model, d)

    method = os.path.splitext(os.path.basename(args.train))[0]
    write_csv(os.path.join(args.out_dir, "assumptions.csv"),
              ["method", "rho0", "beta", "alpha"],
              [(method, report.rho0, report.beta, report.alpha_stat)])
    for name, table in (("beta", report.beta_table), ("alpha", report.alpha_table)):
        rows = sorted((k1, k2, k, v) for (k1, k2, k), v in table.items())
        write_csv(os.path.join(args.out_dir, f"{name}_hist.csv"),
                  ["k1", "k2", "k", "value"], rows)
    return 0


def cmd_lineval(args) -> int:
    from . import plots

    _write_manifest(args.out_dir, "lineval",
                    {"train": args.train, "test": args.test, "l2": args.l2,
                     "m_grid": args.m_grid, "repeats": args.repeats,
                     "label_column": args.label_column}, args.seed)
    train = load_feature_csv(args.train, args.label_column)
    test = load_feature_csv(args.test, args.label_column)
    if train.n != test.n:
        raise ValueError(f"train has {train.n} features but test has {test.n}")
    train, params = minmax_scale(train)
    test = apply_minmax(test, params)

    if args.m_grid:
        grid = args.m_grid
    else:
        grid, m = [], 2 * train.k
        while m < train.m:
            grid.append(m)
            m *= 2
        grid.append(train.m)
    rows = run_lineval(train, test, grid, args.repeats, args.l2, args.seed)
    write_csv(os.path.join(args.out_dir, "curves.csv"),
              ["classifier", "m", "repeat", "test_error"], rows)

    nb_curve = mean_curve(rows, "nb")
    lr_curve = mean_curve(rows, "lr")
    verdict = detect_two_regimes(nb_curve, lr_curve)
    with open(os.path.join(args.out_dir, "verdict.json"), "w", encoding="utf-8") as fh:
        json.dump({"nb_faster": verdict.nb_faster,
                   "two_regimes": verdict.two_regimes,
                   "crossover": list(verdict.crossover) if verdict.crossover else None},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    plots.plot_lineval_curves(os.path.join(args.out_dir, "curves.svg"),
                              nb_curve, lr_curve)
    return 0


def cmd_bounds(args) -> int:
    _write_manifest(args.out_dir, "bounds",
                    {"k": args.k, "b": args.b, "w": args.w, "n": args.n,
                     "m": args.m, "delta": args.delta, "t_grid": args.t_grid}, 0)
    ts = np.linspace(0.0, 1.0, args.t_grid)
    js = diagnostics.j_transform_log(ts)
    rows = [("j_transform", float(t), float(j), float(t * t / 2.0))
            for t, j in zip(ts, js)]
    thr = diagnostics.logistic_precondition_threshold(args.b, args.k)
    rows.append(("threshold", None, thr, None))
    bound = diagnostics.lr_generalization_bound(args.w, args.b, args.k, args.n,
                                                args.m, args.delta)
    rows.append(("generalization_bound", None, bound, None))
    write_csv(os.path.join(args.out_dir, "bounds.csv"),
              ["quantity", "t", "value", "reference"], rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linclass",
                                description="Generative vs. discriminative linear classifiers")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-data", help="sample the synthetic mixture to a feature CSV")
    g.add_argument("--k", type=int, default=5)
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--scaled", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--out", required=True)
    g.add_argument("--config")
    g.set_defaults(func=cmd_gen_data)

    c = sub.add_parser("converge", help="converging-size sweep on the synthetic mixture")
    c.add_argument("--k", type=int, default=5)
    c.add_argument("--n-list", type=_int_list,
                   default=[100, 200, 300, 400, 500, 600, 700, 800, 900, 1000])
    c.add_argument("--eps0", type=float, default=0.01)
    c.add_argument("--repeats", type=int, default=5)
    c.add_argument("--test-size", type=int, default=10_000)
    c.add_argument("--m-max", type=int, default=50_000)
    c.add_argument("--l2", type=float, default=1.0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    c.add_argument("--out-dir", required=True)
    c.add_argument("--config")
    c.set_defaults(func=cmd_converge)

    a = sub.add_parser("assumptions", help="assumption statistics for a feature CSV")
    a.add_argument("--train", required=True)
    a.add_argument("--label-column", default=-1, type=lambda s: s if any(c.isalpha() for c in s) else int(s))
    a.add_argument("--discrete", action="store_true")
    a.add_argument("--alpha", type=float, default=1.0)
    a.add_argument("--out-dir", required=True)
    a.add_argument("--config")
    a.set_defaults(func=cmd_assumptions)

    lv = sub.add_parser("lineval", help="linear-evaluation error curves on feature CSVs")
    lv.add_argument("--train", required=True)
    lv.add_argument("--test", required=True)
    lv.add_argument("--l2", type=float, required=True,
                    help="l2 weight; no default, tune per feature set")
    lv.add_argument("--m-grid", type=_int_list, default=None)
    lv.add_argument("--repeats", type=int, default=5)
    lv.add_argument("--seed", type=int, default=0)
    lv.add_argument("--label-column", default=-1, type=lambda s: s if any(c.isalpha() for c in s) else int(s))
    lv.add_argument("--out-dir", required=True)
    lv.add_argument("--config")
    lv.set_defaults(func=cmd_lineval)

    b = sub.add_parser("bounds", help="transform grid, threshold and generalization bound")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--b", type=float, required=True)
    b.add_argument("--w", type=float, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--delta", type=float, default=0.05)
    b.add_argument("--t-grid", type=int, default=1001)
    b.add_argument("--out-dir", required=True)
    b.add_argument("--config")
    b.set_defaults(func=cmd_bounds)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = {a.dest: a.default for g in parser._subparsers._group_actions
                for a in g.choices[args.command]._actions}
    try:
        _apply_config_file(args, defaults)
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
