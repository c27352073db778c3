"""Command-line front end.

Subcommands::

    tailsum estimate   one CSV/pretty row per threshold
    tailsum table      Asymptotic | Estimate | Standard Error | CV layout
    tailsum validate   oracle cross-checks; exit status 1 on any failure

Settings come from a JSON file (``--config``) and/or flags; flags win.
Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import secrets
import sys
from dataclasses import dataclass, field, fields

from .coefficients import Geometric, Polynomial, normalize_problem
from .distributions import make_distribution
from .runner import asymptotic, make_estimator, run
from .validation import run_checks

THREADS_ENV = "TAILSUM_THREADS"
DEFAULT_SEED = 20170101

CSV_COLUMNS = (
    "b", "asymptotic", "estimate", "std_error", "cv", "mean_n", "total_work", "wall_seconds",
)


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    distribution: str = "pareto"
    alpha: float = 4.0
    coefficients: dict = field(default_factory=lambda: {"kind": "geometric", "rho": 0.9})
    b_values: list = field(default_factory=lambda: [200.0, 500.0, 1000.0])
    r: float = 1.0
    replications: int = 10_000
    seed: int = DEFAULT_SEED
    estimator: str = "proposed"
    output: str = "csv"
    threads: int = 1
    normalize: bool = False
    timing: bool = True

    def validate(self):
        if self.distribution not in ("pareto", "centered_pareto"):
            raise ConfigError(f"distribution must be pareto or centered_pareto, got {self.distribution!r}")
        if not self.alpha > 2:
            raise ConfigError(f"alpha > 2 violated (alpha={self.alpha})")
        kind = self.coefficients.get("kind")
        if kind == "geometric":
            rho = self.coefficients.get("rho")
            if rho is None or not 0 < rho < 1:
                raise ConfigError(f"rho in (0, 1) violated (rho={rho})")
        elif kind == "polynomial":
            c, s = self.coefficients.get("c"), self.coefficients.get("s")
            if c is None or not c > 0:
                raise ConfigError(f"polynomial c > 0 violated (c={c})")
            if s is None or not s > 2:
                raise ConfigError(f"polynomial s > 2 violated (s={s})")
        else:
            raise ConfigError(f"coefficients kind must be geometric or polynomial, got {kind!r}")
        if not self.b_values:
            raise ConfigError("b_values must be non-empty")
        if any(not b > 0 for b in self.b_values):
            raise ConfigError("b_values must be positive")
        if self.replications < 2:
            raise ConfigError(f"replications >= 2 violated (replications={self.replications})")
        if not self.r >= 0:
            raise ConfigError(f"r >= 0 violated (r={self.r})")
        if self.output not in ("csv", "pretty"):
            raise ConfigError(f"output must be csv or pretty, got {self.output!r}")
        if self.threads < 1:
            raise ConfigError("threads >= 1 violated")
        try:
            self.estimator_choice()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def distribution_obj(self):
        return make_distribution(self.distribution, self.alpha)

    def sequence_obj(self):
        co = self.coefficients
        if co["kind"] == "geometric":
            return Geometric(float(co["rho"]))
        return Polynomial(float(co["c"]), float(co["s"]))

    def estimator_choice(self):
        name, _, m = self.estimator.partition(":")
        return make_estimator(name, int(m) if m else None)


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    sup = argparse.SUPPRESS
    add("--config", help="JSON file with RunConfig keys")
    add("--dist", dest="distribution", choices=["pareto", "centered_pareto"], default=sup)
    add("--alpha", type=float, default=sup)
    add("--rho", type=float, default=sup, help="geometric weights a_n = rho**n")
    add("--poly", nargs=2, type=float, metavar=("C", "S"), default=sup,
        help="polynomial weights a_n = C * n**-S")
    add("--b", dest="b_values", type=float, action="append", default=sup,
        help="threshold (repeatable)")
    add("--r", type=float, default=sup)
    add("--reps", dest="replications", type=int, default=sup)
    add("--seed", type=int, default=sup)
    add("--entropy-seed", action="store_true", default=sup,
        help="draw the seed from system entropy instead of the fixed default")
    add("--estimator", default=sup,
        help="proposed | naive_debiased | crude:M")
    add("--format", dest="output", choices=["csv", "pretty"], default=sup)
    add("--threads", type=int, default=sup)
    add("--normalize", action="store_true", default=sup,
        help="centre X and rescale a_n before estimating")
    add("--omit-timing", dest="timing", action="store_false", default=sup,
        help="leave out wall_seconds so output is byte-reproducible")
    add("--corrupt-pmf", action="store_true", default=False, help=sup)

    parser = argparse.ArgumentParser(prog="tailsum", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("estimate", "estimate P{S > b} for each threshold"),
        ("table", "estimates in the Asymptotic | Estimate | Standard Error | CV layout"),
        ("validate", "cross-check the estimators against reference values"),
    ):
        subs.add_parser(name, parents=[common], help=text)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    flags = vars(args)
    if "rho" in flags:
        values["coefficients"] = {"kind": "geometric", "rho": flags["rho"]}
    if "poly" in flags:
        c, s = flags["poly"]
        values["coefficients"] = {"kind": "polynomial", "c": c, "s": s}
    names = {f.name for f in fields(RunConfig)}
    for key in names:
        if key in flags and key != "coefficients":
            values[key] = flags[key]
    if flags.get("entropy_seed"):
        values["entropy_seed"] = True
    unknown = set(values) - names - {"entropy_seed"}
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    entropy = values.pop("entropy_seed", False)
    try:
        if "threads" not in values and os.environ.get(THREADS_ENV):
            values["threads"] = int(os.environ[THREADS_ENV])
        cfg = RunConfig(**values)
        cfg.b_values = [float(b) for b in cfg.b_values]
        cfg.alpha, cfg.r = float(cfg.alpha), float(cfg.r)
        cfg.replications, cfg.threads = int(cfg.replications), int(cfg.threads)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if entropy:
        cfg.seed = secrets.randbits(64)
    return cfg.validate()


def _warn_r(cfg: RunConfig, err):
    if cfg.r <= 1:
        print(
            f"warning: r={cfg.r:g} <= 1; bounded relative error is only proven for r > 1",
            file=err,
        )


def estimate_rows(cfg: RunConfig) -> list[dict]:
    """Run the configured estimator once per threshold."""
    dist, seq = cfg.distribution_obj(), cfg.sequence_obj()
    choice = cfg.estimator_choice()
    rows = []
    for i, b in enumerate(cfg.b_values):
        d, s, bb = dist, seq, b
        if cfg.normalize:
            try:
                s, d, bb = normalize_problem(seq, dist, b)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        st = run(choice, bb, cfg.r, d, s, cfg.replications, cfg.seed,
                 stream=i, threads=cfg.threads)
        rows.append({
            "b": b,
            "asymptotic": asymptotic(b, dist, seq),
            "estimate": st.mean,
            "std_error": st.std_error,
            "cv": st.cv,
            "mean_n": st.mean_n,
            "total_work": st.total_work,
            "wall_seconds": st.wall_seconds,
        })
    return rows


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".9e")


def format_csv(rows, timing=True) -> str:
    cols = CSV_COLUMNS if timing else CSV_COLUMNS[:-1]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in cols])
    return buf.getvalue()


def _format_pretty(header, body) -> str:
    widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in body]
    return "\n".join(lines) + "\n"


def format_pretty(rows, timing=True) -> str:
    cols = CSV_COLUMNS if timing else CSV_COLUMNS[:-1]
    body = [
        [f"{row[c]:g}" if c == "b" else str(row[c]) if c == "total_work"
         else f"{row[c]:.2f}" if c == "wall_seconds" else f"{row[c]:.4g}" for c in cols]
        for row in rows
    ]
    return _format_pretty(list(cols), body)


TABLE_HEADER = ("b", "Asymptotic", "Estimate", "Standard Error", "CV")


def format_table(rows, output="pretty") -> str:
    """Rows in the layout b | Asymptotic | Estimate | Standard Error | CV."""
    body = [
        [f"{row['b']:g}", f"{row['asymptotic']:.2e}", f"{row['estimate']:.2e}",
         f"{row['std_error']:.2e}", f"{row['cv']:.2f}"]
        for row in rows
    ]
    if output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TABLE_HEADER)
        writer.writerows(body)
        return buf.getvalue()
    return _format_pretty(list(TABLE_HEADER), body)


def cmd_estimate(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    _warn_r(cfg, err)
    rows = estimate_rows(cfg)
    text = format_csv(rows, cfg.timing) if cfg.output == "csv" else format_pretty(rows, cfg.timing)
    out.write(text)
    return 0


def cmd_table(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    _warn_r(cfg, err)
    out.write(format_table(estimate_rows(cfg), cfg.output))
    return 0


def cmd_validate(cfg: RunConfig, out=sys.stdout, err=sys.stderr, corrupt_pmf=False) -> int:
    _warn_r(cfg, err)
    results = run_checks(cfg.distribution_obj(), cfg.sequence_obj(), cfg.b_values[0],
                         cfg.r, cfg.seed, corrupt_pmf=corrupt_pmf)
    for res in results:
        print(res.line(), file=out)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=out)
    return 1 if failed else 0


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return 2
    try:
        if args.command == "estimate":
            return cmd_estimate(cfg, out, err)
        if args.command == "table":
            return cmd_table(cfg, out, err)
        return cmd_validate(cfg, out, err, corrupt_pmf=args.corrupt_pmf)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return 2


if __name__ == "__main__":
    sys.exit(main())
