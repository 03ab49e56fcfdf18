"""Command-line front end: ``mishear {fit,tables,figures,simulate,replay}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import anticipation as ant
from . import clusters as cl
from . import montecarlo as mc
from ._io import rows_to_csv
from .corpus import histogram_to_distribution, read_corpus
from .errors import CorpusError, FitError, MishearError
from .static import delta_star, static_crossover
from .variants import average_variants, moment_variants
from .wordlength import fit_gamma_report, load_profiles, profile_by_name

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FIT_ERROR = 3
EXIT_VALIDATION = 4

DEFAULT_Q = 0.2
FIGURES = ("wld", "hammock", "gbar", "statdyn", "kn")
EXPERIMENTS = ("variants", "partition", "mishearing")


@dataclass
class RunManifest:
    command: str
    argv: list[str]
    parameters: dict
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    seed: int | None = None

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path


class _Run:
    """Collects outputs of one command and writes them plus the manifest."""

    def __init__(self, args, argv):
        self.out_dir = Path(args.out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        params = {k: v for k, v in vars(args).items() if k not in ("func", "out_dir")}
        self.manifest = RunManifest(
            command=args.command,
            argv=list(argv),
            parameters=json.loads(json.dumps(params, default=str)),
            seed=getattr(args, "seed", None),
        )

    def write(self, name: str, text: str) -> Path:
        path = self.out_dir / name
        path.write_text(text, encoding="utf-8")
        self.manifest.outputs.append(name)
        return path

    def finish(self):
        self.manifest.write(self.out_dir)


def _profiles(args):
    profiles = load_profiles(args.profiles)
    overrides = {}
    if getattr(args, "lexicon_size", None) is not None:
        overrides["lexicon_size"] = args.lexicon_size
    if getattr(args, "epsilon", None) is not None:
        overrides["epsilon"] = args.epsilon
    if getattr(args, "nu", None) is not None:
        overrides["sounds"] = args.nu
    profiles = [p.updated(**overrides) for p in profiles]
    if getattr(args, "language", None):
        profiles = [profile_by_name(name, profiles) for name in args.language]
    return profiles


def cmd_fit(args, argv) -> int:
    try:
        hist = read_corpus(args.corpus, format=args.format)
        report = fit_gamma_report(
            histogram_to_distribution(hist),
            normalization_mode=args.normalization,
            method=args.method,
        )
    except CorpusError as exc:
        print(f"corpus error: {exc}", file=sys.stderr)
        return EXIT_FIT_ERROR
    except FitError as exc:
        print(f"fit error: {exc}", file=sys.stderr)
        return EXIT_FIT_ERROR
    run = _Run(args, argv)
    run.manifest.inputs.append(str(args.corpus))
    model = report.model
    summary = {
        "name": args.name,
        "alpha": model.alpha,
        "beta": model.beta,
        "residual_norm": report.residual_norm,
        "normalization": model.normalization_mode,
        "method": report.method,
        "mean_length": model.mean_length(),
        "mode_length": model.mode_length(),
        "unique_words": hist.total,
    }
    run.write("fit_report.json", json.dumps(summary, indent=2) + "\n")
    run.write("histogram.csv", hist.to_csv())
    run.write(
        "fit.csv",
        rows_to_csv(
            ["length", "empirical", "fitted"],
            zip(report.lengths.tolist(), report.empirical.tolist(), report.fitted.tolist()),
        ),
    )
    run.finish()
    print(
        f"{args.name}: alpha={model.alpha:.4f} beta={model.beta:.4f} "
        f"residual={report.residual_norm:.3e} normalization={model.normalization_mode}"
    )
    return EXIT_OK


def _table_rows(profiles, q):
    t1, t2, t3 = [], [], []
    for prof in profiles:
        m = prof.model
        t1.append((prof.name, m.alpha, m.beta, m.mean_length(), f"{m.mean_length():.1f}", m.mode_length()))
        try:
            ds = delta_star(prof, q)
            t2.append((prof.name, ds, f"{ds:.2f}", static_crossover(prof, q), ant.anticipation_length(prof), ""))
        except MishearError as exc:
            t2.append((prof.name, math.nan, "", "", "", str(exc)))
        try:
            th = ant.mishearing_threshold(prof)
            t3.append((prof.name, th.q_th, f"{th.q_th:.2f}", th.m_th, th.delta_th, f"{th.delta_th:.2f}", ""))
        except MishearError as exc:
            t3.append((prof.name, math.nan, "", "", math.nan, "", str(exc)))
    return t1, t2, t3


def _print_table(title, header, rows):
    print(title)
    print("  " + "  ".join(f"{h:>12s}" for h in header))
    for row in rows:
        print("  " + "  ".join(f"{str(v):>12s}" for v in row))
    print()


def cmd_tables(args, argv) -> int:
    try:
        profiles = _profiles(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"profiles error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    run = _Run(args, argv)
    if args.profiles:
        run.manifest.inputs.append(str(args.profiles))
    t1, t2, t3 = _table_rows(profiles, args.q)
    run.write("table1.csv", rows_to_csv(["language", "alpha", "beta", "mean_length", "mean_length_display", "n_star"], t1))
    run.write("table2.csv", rows_to_csv(["language", "delta_star", "delta_star_display", "n_st", "m_ant", "error"], t2))
    run.write(
        "table3.csv",
        rows_to_csv(["language", "q_th", "q_th_display", "m_th", "delta_th", "delta_th_display", "error"], t3),
    )
    run.finish()
    _print_table("Word-length parameters", ["language", "alpha", "beta", "mean", "n*"], [(r[0], r[1], r[2], r[4], r[5]) for r in t1])
    _print_table("Static crossover", ["language", "delta*", "n_st", "m_ant"], [(r[0], r[2], r[3], r[4]) for r in t2])
    _print_table("Mishearing threshold", ["language", "q_th", "m_th", "delta_th"], [(r[0], r[2], r[3], r[5]) for r in t3])
    failures = [r for r in t2 + t3 if r[-1]]
    for r in failures:
        print(f"{r[0]}: {r[-1]}", file=sys.stderr)
    return EXIT_OK


def cmd_figures(args, argv) -> int:
    try:
        profiles = _profiles(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"profiles error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    run = _Run(args, argv)
    fig = args.figure
    if fig == "wld":
        n_max = args.n_max or 30
        rows = [
            (p.name, n, float(p.model.pmf(n))) for p in profiles for n in range(1, n_max + 1)
        ]
        run.write("wld.csv", rows_to_csv(["language", "n", "pmf"], rows))
    elif fig in ("hammock", "gbar"):
        prof = profiles[0] if args.language else profile_by_name("English", profiles)
        m_max = args.m_max or 15
        if fig == "hammock":
            run.write(f"hammock_{prof.name}.csv", ant.hammock_export(prof, m_max))
        else:
            qs = args.q_values or [0.0, 0.05, 0.10, 0.15, ant.mishearing_threshold(prof).q_th, 0.25, 0.30]
            run.write(f"gbar_{prof.name}.csv", ant.gbar_export(prof, qs, m_max))
    elif fig == "statdyn":
        chosen = profiles if args.language else [profile_by_name(n, profiles) for n in ("Finnish", "Burmese")]
        mus = args.mu or np.logspace(-2, 2, 41).tolist()
        rows = [row for prof in chosen for row in cl.statdyn_rows(prof, args.q, mus)]
        run.write("statdyn.csv", rows_to_csv(["language", "mu", "n_dyn", "n_st", "mean_length"], rows))
    elif fig == "kn":
        mus = args.mu or [0.5, 1.0, 2.0]
        run.write("kn.csv", cl.kn_export(args.q, mus, args.n_max or 200))
    run.finish()
    print(f"wrote {', '.join(run.manifest.outputs)} to {run.out_dir}")
    return EXIT_OK


def _parse_params(tokens):
    params = {}
    for tok in tokens:
        if "=" not in tok:
            raise ValueError(f"expected key=value, got {tok!r}")
        key, value = tok.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def _scheme(params):
    if "weights" in params:
        return cl.ClusterWeights.custom([float(w) for w in params["weights"].split(",")])
    kind = params.get("scheme", "exponential")
    return cl.ClusterWeights(kind, float(params.get("param", 2.0)))


def _run_experiment(exp, params, q, config):
    if exp == "variants":
        n, s = int(params.get("n", 10)), float(params.get("s", 1.0))
        est = mc.estimate_variant_moment(n, q, s, config)
        target = average_variants(n, q) if s == 1 else moment_variants(n, q, s)
    elif exp == "partition":
        n = int(params.get("n", 3))
        scheme = _scheme(params)
        est = mc.estimate_partition(n, q, scheme, config)
        target = cl.brute_force_partition(n, q, scheme) if n <= 20 else math.exp(
            cl.partition_function(n, q, scheme).log_z(n)
        )
    else:
        n = int(params.get("n", 10))
        est = mc.estimate_mishearing_count(tuple(range(n)), q, config)
        target = n * q
    return est, target


def cmd_simulate(args, argv) -> int:
    try:
        params = _parse_params(args.params)
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    seed = int(params.pop("seed", args.seed))
    trials = int(float(params.pop("trials", args.trials)))
    q = float(params.pop("q", args.q))
    args.seed, args.trials, args.q = seed, trials, q
    args.params = [f"{k}={v}" for k, v in params.items()]
    exp = args.experiment
    try:
        est, target = _run_experiment(exp, params, q, mc.SimulationConfig(seed=seed, trials=trials, q=q))
    except (MishearError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ok = est.agrees(target, 3.0)
    run = _Run(args, argv)
    run.write(
        "simulation.csv",
        rows_to_csv(
            ["experiment", "estimate", "stderr", "target", "zscore", "pass"],
            [(exp, est.mean, est.stderr, float(target), est.zscore(target), ok)],
        ),
    )
    run.finish()
    status = "pass" if ok else "validation failure"
    print(f"{exp}: estimate={est.mean:.6g} +/- {est.stderr:.3g} target={target:.6g} z={est.zscore(target):.2f} {status}")
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_replay(args, argv) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    return main(manifest["argv"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mishear", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, profiles=True):
        p.add_argument("--out-dir", default="out", help="directory for CSV outputs and manifest")
        if profiles:
            p.add_argument("--profiles", default=None, help="profiles JSON (default: bundled table)")
            p.add_argument("--lexicon-size", type=int, default=None)
            p.add_argument("--epsilon", type=float, default=None)
            p.add_argument("--nu", type=int, default=None)

    p = sub.add_parser("fit", help="fit the Gamma word-length model to a corpus")
    p.add_argument("corpus")
    p.add_argument("--format", choices=("plain", "tsv"), default="plain")
    p.add_argument("--normalization", choices=("continuous", "discrete"), default="continuous")
    p.add_argument("--method", choices=("lsq", "mle"), default="lsq")
    p.add_argument("--name", default="corpus")
    common(p, profiles=False)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("tables", help="reproduce the parameter, static and threshold tables")
    p.add_argument("--q", type=float, default=DEFAULT_Q)
    common(p)
    p.set_defaults(func=cmd_tables, language=None)

    p = sub.add_parser("figures", help="write plot-ready CSV data")
    p.add_argument("figure", choices=FIGURES)
    p.add_argument("--q", type=float, default=DEFAULT_Q)
    p.add_argument("--mu", type=float, nargs="+", default=None)
    p.add_argument("--q-values", type=float, nargs="+", default=None)
    p.add_argument("--language", nargs="+", default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--m-max", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("simulate", help="Monte-Carlo check of an analytic result")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("params", nargs="*", help="key=value overrides, e.g. n=10 q=0.2 trials=1e6")
    p.add_argument("--q", type=float, default=DEFAULT_Q)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1_000_000)
    common(p, profiles=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    return args.func(args, argv)


if __name__ == "__main__":
    sys.exit(main())
