"""``padic-hardy`` command line driver.

Subcommands emit a ``report/v1`` document (JSON, or a flattened CSV
projection).  Exit codes: 0 pass, 2 usage or inadmissible parameters,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from importlib import resources

import mpmath

from . import __version__, kernels
from .errors import InadmissibleParameters, PAdicHardyError
from .oracle import oracle_check
from .padic import is_prime
from .sharp import (
    SharpConstantQuery,
    commutator_bound_suite,
    extremizer_convergence_study,
    random_upper_bound_trials,
    spectral_lower_bound,
)

SCHEMA_ID = "report/v1"
EXIT_PASS, EXIT_USAGE, EXIT_FAIL = 0, 2, 3

EXTREMIZER_TOL = 1e-4
SPECTRAL_TOL = 1e-3
UPPER_SLACK = 1e-10
STABILITY_TOL = 0.10


@dataclass
class RunConfig:
    prime: int = 2
    dim: int = 1
    q: str = "2"
    r: str = "2"
    alpha: str = "0"
    q1: str = "2"
    q2: str = "2"
    kmin: int = -400
    kmax: int = 400
    eps_depth: int = 20
    trials: int = 200
    seed: int = 0
    digits: int = 50
    format: str = "json"
    out: str | None = None
    timing: bool = False
    primes: str = "2,3,5"
    dims: str = "1,2"
    qs: str = "2"
    alphas: str = "0"
    operator: str = "hardy"

    def frac(self, name: str) -> Fraction:
        return Fraction(getattr(self, name))


def load_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; dashes and underscores are interchangeable."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def build_config(args: argparse.Namespace, command: str | None = None) -> RunConfig:
    cfg = RunConfig(trials=COMMAND_TRIALS.get(command, RunConfig.trials))
    types = {f.name: f.type for f in fields(RunConfig)}
    config_path = getattr(args, "config", None)
    layers = [load_config_file(config_path)] if config_path else []
    layers.append({k: v for k, v in vars(args).items() if v is not None and k in types})
    for layer in layers:
        for key, value in layer.items():
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            current = getattr(cfg, key)
            if isinstance(current, bool):
                value = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                value = int(value)
            elif value is not None:
                value = str(value)
            setattr(cfg, key, value)
    for name in ("q", "r", "alpha", "q1", "q2"):
        try:
            cfg.frac(name)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"--{name} must be a rational number, got {getattr(cfg, name)!r}") from None
    if not is_prime(cfg.prime):
        raise InadmissibleParameters(f"--prime {cfg.prime} is not prime")
    if cfg.dim < 1:
        raise InadmissibleParameters("--dim must be at least 1")
    if cfg.kmin >= cfg.kmax:
        raise ValueError("--kmin must be below --kmax")
    if cfg.format not in ("json", "csv"):
        raise ValueError("--format must be json or csv")
    return cfg


# report assembly -------------------------------------------------------------


def _num(x) -> float:
    return float(x)


def _digits(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 20)


def estimate(method: str, value, reference, check: str, tolerance: float, passed: bool, **extra) -> dict:
    row = {
        "method": method,
        "value": _num(value),
        "reference": _num(reference),
        "gap": _num(reference) - _num(value),
        "check": check,
        "tolerance": tolerance,
        "pass": bool(passed),
    }
    row.update(extra)
    return row


def make_report(sub: str, cfg: RunConfig, params: dict, closed_form, estimates: list, started: float, **extra) -> dict:
    rep = {
        "schema": SCHEMA_ID,
        "version": __version__,
        "subcommand": sub,
        "params": params,
        "closed_form": None if closed_form is None else _num(closed_form),
        "closed_form_digits": None if closed_form is None else _digits(closed_form),
        "estimates": estimates,
        "pass": all(e["pass"] for e in estimates),
        "seed": cfg.seed,
        "digits": cfg.digits,
        "timing": round(time.perf_counter() - started, 3) if cfg.timing else None,
    }
    rep.update(extra)
    return rep


def _lower_bound_estimates(query: SharpConstantQuery, cfg: RunConfig) -> list:
    target = query.constant()
    rows = []
    study = extremizer_convergence_study(query, cfg.eps_depth)
    rows.append(
        estimate(
            "extremizer",
            study.ratios[-1],
            target,
            "gap < tolerance and max_excess <= slack",
            EXTREMIZER_TOL,
            study.within(EXTREMIZER_TOL, UPPER_SLACK),
            eps=str(study.eps[-1]),
            max_excess=_num(study.max_excess),
            nondecreasing=study.nondecreasing,
        )
    )
    if query.q == 2:
        half = ((cfg.kmin) // 2, (cfg.kmax) // 2)
        small = spectral_lower_bound(query, half)
        full = spectral_lower_bound(query, (cfg.kmin, cfg.kmax))
        ok = full.gap < SPECTRAL_TOL and full.estimate >= small.estimate and full.gap > -1e-9
        rows.append(
            estimate(
                "spectral",
                full.estimate,
                target,
                "0 <= gap < tolerance and monotone in window",
                SPECTRAL_TOL,
                ok,
                window=list(full.window),
                iterations=full.iterations,
                residual=full.residual,
                half_window_value=small.estimate,
            )
        )
    return rows


def cmd_verify(cfg: RunConfig, operator: str) -> dict:
    started = time.perf_counter()
    n = 1 if operator == "hlp" else cfg.dim
    query = SharpConstantQuery(cfg.prime, n, cfg.frac("q"), cfg.frac("alpha"), operator)
    query.check()
    target = query.constant()
    worst, violations, _ = random_upper_bound_trials(query, cfg.trials, cfg.seed, UPPER_SLACK)
    rows = [
        estimate(
            "random_upper",
            worst,
            target,
            "violations == 0",
            UPPER_SLACK,
            violations == 0,
            trials=cfg.trials,
            violations=violations,
        )
    ]
    rows += _lower_bound_estimates(query, cfg)
    params = {"prime": cfg.prime, "dim": n, "q": cfg.q, "alpha": cfg.alpha, "operator": operator,
              "eps_depth": cfg.eps_depth, "window": [cfg.kmin, cfg.kmax], "trials": cfg.trials}
    return make_report("verify-" + ("hlp" if operator == "hlp" else "hardy"), cfg, params, target, rows, started)


def cmd_verify_hardy(cfg: RunConfig) -> dict:
    return cmd_verify(cfg, "hardy")


def cmd_verify_hlp(cfg: RunConfig) -> dict:
    return cmd_verify(cfg, "hlp")


def cmd_verify_commutator(cfg: RunConfig) -> dict:
    started = time.perf_counter()
    rep = commutator_bound_suite(
        cfg.prime, cfg.dim, cfg.frac("r"), cfg.frac("alpha"), cfg.frac("q1"), cfg.frac("q2"), cfg.trials, cfg.seed
    )
    rows = []
    for op in rep.maxima:
        rows.append(
            estimate(
                f"commutator_{op}",
                rep.maxima_doubled[op],
                rep.maxima[op],
                "relative change < tolerance",
                STABILITY_TOL,
                rep.stable(op, STABILITY_TOL),
                relative_change=rep.change(op),
            )
        )
    trials = [
        {"trial": t.trial, "operator": t.operator, "width": t.width, "ratio": t.ratio, "ratio_doubled": t.ratio_doubled}
        for t in rep.trials
    ]
    params = {"prime": cfg.prime, "dim": cfg.dim, "r": cfg.r, "alpha": cfg.alpha, "q1": cfg.q1, "q2": cfg.q2,
              "trials": cfg.trials}
    return make_report("verify-commutator", cfg, params, None, rows, started, trials=trials)


def _split(text: str, conv):
    return [conv(x) for x in text.split(",") if x.strip()]


def cmd_sweep(cfg: RunConfig) -> dict:
    started = time.perf_counter()
    rows = []
    skipped = 0
    operator = cfg.operator
    for p in _split(cfg.primes, int):
        for n in _split(cfg.dims, int) if operator != "hlp" else [1]:
            for q in _split(cfg.qs, Fraction):
                for alpha in _split(cfg.alphas, Fraction):
                    if not is_prime(p):
                        skipped += 1
                        continue
                    query = SharpConstantQuery(p, n, q, alpha, operator)
                    try:
                        query.check()
                    except InadmissibleParameters:
                        skipped += 1
                        continue
                    target = query.constant()
                    ests = _lower_bound_estimates(query, cfg)
                    rows.append(
                        {
                            "prime": p,
                            "dim": n,
                            "q": str(q),
                            "alpha": str(alpha),
                            "closed_form": _num(target),
                            "closed_form_digits": _digits(target),
                            "estimates": ests,
                            "pass": all(e["pass"] for e in ests),
                        }
                    )
    if not rows:
        print("warning: the admissible grid is empty", file=sys.stderr)
    params = {"primes": cfg.primes, "dims": cfg.dims, "qs": cfg.qs, "alphas": cfg.alphas, "operator": operator,
              "eps_depth": cfg.eps_depth, "window": [cfg.kmin, cfg.kmax]}
    flat = [dict(e, row=i) for i, r in enumerate(rows) for e in r["estimates"]]
    rep = make_report("sweep", cfg, params, None, flat, started, rows=rows, skipped=skipped)
    rep["pass"] = all(r["pass"] for r in rows)
    return rep


def cmd_oracle_check(cfg: RunConfig) -> dict:
    started = time.perf_counter()
    res = oracle_check(seed=cfg.seed, cases=cfg.trials)
    row = estimate(
        "oracle",
        len(res.counterexamples),
        0,
        "counterexamples == 0",
        0.0,
        res.passed,
        cases=res.cases,
        checks=res.checks,
    )
    params = {"cases": cfg.trials, "max_width": 12}
    return make_report("oracle-check", cfg, params, None, [row], started, counterexamples=res.counterexamples)


COMMANDS = {
    "verify-hardy": cmd_verify_hardy,
    "verify-hlp": cmd_verify_hlp,
    "verify-commutator": cmd_verify_commutator,
    "sweep": cmd_sweep,
    "oracle-check": cmd_oracle_check,
}

COMMAND_TRIALS = {"verify-hardy": 200, "verify-hlp": 200, "verify-commutator": 200, "oracle-check": 40}


# output -----------------------------------------------------------------------


def load_schema() -> dict:
    return json.loads(resources.files("padic_hardy").joinpath("schema/report_v1.json").read_text("utf-8"))


CSV_COLUMNS = ["subcommand", "row", "method", "value", "reference", "gap", "check", "tolerance", "pass", "seed"]


def to_csv(rep: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS + ["params"], lineterminator="\n")
    w.writeheader()
    for i, e in enumerate(rep["estimates"]):
        w.writerow(
            {
                "subcommand": rep["subcommand"],
                "row": e.get("row", i),
                **{k: e[k] for k in CSV_COLUMNS[2:9]},
                "seed": rep["seed"],
                "params": json.dumps(rep["params"], sort_keys=True),
            }
        )
    return buf.getvalue()


def render(rep: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(rep)
    return json.dumps(rep, indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("parameters")
    g.add_argument("--prime", type=int)
    g.add_argument("--dim", type=int)
    g.add_argument("--q")
    g.add_argument("--r")
    g.add_argument("--alpha")
    g.add_argument("--q1")
    g.add_argument("--q2")
    g.add_argument("--kmin", type=int, help="lower end of the spectral window")
    g.add_argument("--kmax", type=int, help="upper end of the spectral window")
    g.add_argument("--eps-depth", dest="eps_depth", type=int, help="extremizer schedule eps = p^-k, k <= depth")
    g.add_argument("--trials", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--digits", type=int, help="working precision in decimal digits")
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("json", "csv"))
    o.add_argument("--out", "--output", dest="out", help="write the report here instead of stdout")
    o.add_argument("--config", help="key=value file; flags override it")
    o.add_argument("--timing", action="store_const", const=True, help="record wall time in the report")
    o.add_argument("--print-schema", action="store_true", help="print the report schema and exit")

    parser = argparse.ArgumentParser(prog="padic-hardy", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "sweep":
            sp.add_argument("--primes")
            sp.add_argument("--dims")
            sp.add_argument("--qs")
            sp.add_argument("--alphas")
            sp.add_argument("--operator", choices=("hardy", "hlp"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "print_schema", False):
        sys.stdout.write(json.dumps(load_schema(), indent=2, sort_keys=True) + "\n")
        return EXIT_PASS
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = build_config(args, args.command)
    except (ValueError, InadmissibleParameters, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    mpmath.mp.dps = cfg.digits
    try:
        rep = COMMANDS[args.command](cfg)
    except InadmissibleParameters as exc:
        print(f"error: inadmissible parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PAdicHardyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rep["backend"] = kernels.BACKEND
    text = render(rep, cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not rep["pass"]:
        if rep.get("counterexamples"):
            print(f"first counterexample: {rep['counterexamples'][0]}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
