"""Command-line driver.

Subcommands: simulate, bootstrap, sigma, edgeworth, coverage.  Configuration
comes from a plain-text file of section-prefixed key=value lines, e.g.

    experiment.B=1000
    map.kind=doubling
    bandwidth.divisor=4

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

import numpy as np

from .bootstrap import (
    BootstrapConfig,
    Method,
    Mode,
    Side,
    gaussian_interval,
    nonpivoted_interval,
    pivoted_interval,
    run_bootstrap,
    t_interval,
)
from .density import BandwidthRule
from .edgeworth import default_grid, edgeworth_cdf, estimate_asymptotic_moments
from .errors import ChaosbootError, ConfigError
from .harness import (
    ExperimentConfig,
    emit_table,
    run_coverage_experiment,
)
from .maps import MapSpec, doubling_map, drill_map, generate_trajectory, logistic_map
from .stats import OBSERVABLES, Ecdf, birkhoff_sum, true_sigma_mc

_METHODS = {m.value: m for m in Method}
_SIDES = {s.value: s for s in Side}


def parse_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    out: dict[str, str] = {}
    for lineno, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _get(cfg: dict, key: str, default=None, cast=str):
    if key not in cfg:
        return default
    try:
        return cast(cfg[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {cfg[key]!r}") from exc


def _get_list(cfg: dict, key: str, default, cast=str):
    if key not in cfg:
        return default
    return tuple(cast(part.strip()) for part in cfg[key].split(",") if part.strip())


def _bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes"):
        return True
    if text.lower() in ("0", "false", "no"):
        return False
    raise ValueError(text)


def map_from_config(cfg: dict, kind: str | None = None) -> MapSpec:
    kind = kind or _get(cfg, "map.kind", "doubling")
    perturbed = _get(cfg, "map.perturbed", True, _bool)
    if kind == "doubling":
        spec = doubling_map(perturbed=perturbed)
    elif kind == "drill":
        spec = drill_map(_get(cfg, "map.lambda", 3.0, float))
    elif kind == "logistic":
        spec = logistic_map(_get(cfg, "map.r", 4.0, float), perturbed=perturbed)
    else:
        raise ConfigError(f"unknown map kind {kind!r}")
    disc = _get_list(cfg, "map.discontinuities", None, float)
    if disc is not None:
        spec = MapSpec(
            kind=spec.kind,
            support=spec.support,
            discontinuities=disc,
            drill_lambda=spec.drill_lambda,
            logistic_r=spec.logistic_r,
            perturbation=spec.perturbation,
        )
    return spec


def bandwidth_from_config(cfg: dict) -> BandwidthRule:
    return BandwidthRule(
        base=_get(cfg, "bandwidth.rule", "ucv"),
        value=_get(cfg, "bandwidth.value", 0.0, float),
        divisor=_get(cfg, "bandwidth.divisor", 4.0, float),
    )


def _observable(cfg: dict, key: str, default: str = "x"):
    name = _get(cfg, key, default)
    if name not in OBSERVABLES:
        raise ConfigError(f"unknown observable {name!r}")
    return OBSERVABLES[name]()


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return repr(x)


def _write(text: str, out_dir: str | None, filename: str) -> None:
    if out_dir is None:
        sys.stdout.write(text)
    else:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / filename).write_text(text)


def cmd_simulate(args, cfg: dict) -> None:
    spec = map_from_config(cfg)
    n = _get(cfg, "simulate.n", 100, int)
    seed = args.seed if args.seed is not None else _get(cfg, "simulate.seed", 0, int)
    rng = np.random.default_rng(seed)
    x0 = _get(cfg, "simulate.x0", None, float)
    if x0 is None:
        x0 = rng.uniform(*spec.support)
    traj = generate_trajectory(spec, x0, n, rng)
    buf = io.StringIO()
    buf.write("index,x\n")
    for i, x in enumerate(traj.states):
        buf.write(f"{i},{float(x)!r}\n")
    _write(buf.getvalue(), args.out, "trajectory.csv")


def cmd_bootstrap(args, cfg: dict) -> None:
    spec = map_from_config(cfg)
    n = _get(cfg, "bootstrap.n", 100, int)
    h = _observable(cfg, "bootstrap.h")
    seed = args.seed if args.seed is not None else _get(cfg, "bootstrap.seed", 0, int)
    alpha = _get(cfg, "bootstrap.alpha", 0.05, float)
    b_iter = _get(cfg, "bootstrap.B", 1000, int)
    methods = [
        _METHODS[m] for m in _get_list(cfg, "bootstrap.methods", tuple(_METHODS))
    ]
    sides = [_SIDES[s] for s in _get_list(cfg, "bootstrap.sides", tuple(_SIDES))]
    bw = bandwidth_from_config(cfg)

    rng = np.random.default_rng(seed)
    x0 = rng.uniform(*spec.support)
    traj = generate_trajectory(spec, x0, n, rng)

    sigma_hat = None
    if Method.GAUSSIAN in methods or Method.PBOOT in methods:
        sigma_reps = _get(cfg, "bootstrap.sigma_reps", 100_000, int)
        mom = true_sigma_mc(spec, h, n, sigma_reps, np.random.default_rng(seed + 1))
        sigma_hat = mom.long_run_sd

    lines = []
    for method in methods:
        if method is Method.T_APPROX:
            make = lambda side: t_interval(traj, h, alpha, side)
        elif method is Method.GAUSSIAN:
            make = lambda side: gaussian_interval(traj, h, sigma_hat, alpha, side)
        elif method is Method.NPBOOT:
            bc = BootstrapConfig(
                Mode.NONPIVOTED, B=b_iter, alpha=alpha, bandwidth=bw, seed=seed + 2
            )
            boot = run_bootstrap(traj, h, bc, spec.discontinuities, spec.support)
            make = lambda side: nonpivoted_interval(traj, h, boot, alpha, side)
        else:
            bc = BootstrapConfig(
                Mode.PIVOTED, B=b_iter, alpha=alpha, bandwidth=bw, seed=seed + 3
            )
            boot = run_bootstrap(traj, h, bc, spec.discontinuities, spec.support)
            make = lambda side: pivoted_interval(traj, h, bc, sigma_hat, boot, side)
        for side in sides:
            ci = make(side)
            lines.append(
                f"{method.value} {side.value} {_fmt(ci.lower)} {_fmt(ci.upper)}"
            )
    _write("\n".join(lines) + "\n", args.out, "intervals.txt")


def cmd_sigma(args, cfg: dict) -> None:
    seed = args.seed if args.seed is not None else _get(cfg, "sigma.seed", 0, int)
    reps = _get(cfg, "sigma.reps", 100_000, int)
    kinds = _get_list(cfg, "sigma.maps", ("doubling",))
    obs = _get_list(cfg, "sigma.observables", ("x",))
    sizes = _get_list(cfg, "sigma.sample_sizes", (25, 50, 100), int)
    buf = io.StringIO()
    buf.write("map,h,n,A,sigma\n")
    for ki, kind in enumerate(kinds):
        spec = map_from_config(cfg, kind=kind)
        for oi, name in enumerate(obs):
            if name not in OBSERVABLES:
                raise ConfigError(f"unknown observable {name!r}")
            h = OBSERVABLES[name]()
            for i, n in enumerate(sizes):
                rng = np.random.default_rng([seed, ki, oi, i])
                mom = true_sigma_mc(spec, h, n, reps, rng)
                buf.write(
                    f"{kind},{name},{n},{mom.spatial_mean!r},{mom.long_run_sd!r}\n"
                )
    _write(buf.getvalue(), args.out, "sigma.csv")


def cmd_edgeworth(args, cfg: dict) -> None:
    spec = map_from_config(cfg)
    n = _get(cfg, "edgeworth.n", 100, int)
    h = _observable(cfg, "edgeworth.h")
    seed = args.seed if args.seed is not None else _get(cfg, "edgeworth.seed", 0, int)
    reps = _get(cfg, "edgeworth.reps", 20_000, int)
    b_iter = _get(cfg, "edgeworth.B", 1000, int)
    bw = bandwidth_from_config(cfg)
    grid = default_grid(
        _get(cfg, "edgeworth.grid_lo", -5.0, float),
        _get(cfg, "edgeworth.grid_hi", 5.0, float),
        _get(cfg, "edgeworth.grid_size", 2001, int),
    )

    rng = np.random.default_rng(seed)
    mom = estimate_asymptotic_moments(spec, h, n, reps, rng)
    from .stats import batch_birkhoff_sums

    sums = batch_birkhoff_sums(spec, h, n, reps, np.random.default_rng(seed + 1))
    pivots = (sums - n * mom.spatial_mean) / (mom.long_run_sd * math.sqrt(n))
    mc_ecdf = Ecdf(pivots)

    data_rng = np.random.default_rng(seed + 2)
    x0 = data_rng.uniform(*spec.support)
    traj = generate_trajectory(spec, x0, n, data_rng)
    bc = BootstrapConfig(Mode.PIVOTED, B=b_iter, bandwidth=bw, seed=seed + 3)
    boot = run_bootstrap(traj, h, bc, spec.discontinuities, spec.support)
    boot_ecdf = Ecdf(boot.pivots)

    from scipy import stats as sps

    buf = io.StringIO()
    buf.write("x,ecdf,gaussian,edgeworth,bootstrap_ecdf\n")
    gauss = sps.norm.cdf(grid)
    edge = edgeworth_cdf(mom, n, grid)
    emp = mc_ecdf.cdf(grid)
    bemp = boot_ecdf.cdf(grid)
    for i, x in enumerate(grid):
        buf.write(
            f"{float(x)!r},{float(emp[i])!r},{float(gauss[i])!r},"
            f"{float(edge[i])!r},{float(bemp[i])!r}\n"
        )
    _write(buf.getvalue(), args.out, "edgeworth.csv")


def experiment_from_config(cfg: dict, seed_override: int | None) -> ExperimentConfig:
    kinds = _get_list(cfg, "experiment.maps", ("doubling",))
    maps = tuple(map_from_config(cfg, kind=k) for k in kinds)
    seed = seed_override if seed_override is not None else _get(
        cfg, "experiment.seed", 0, int
    )
    return ExperimentConfig(
        maps=maps,
        observables=_get_list(cfg, "experiment.observables", ("x", "x^2", "x^4")),
        sample_sizes=_get_list(cfg, "experiment.sample_sizes", (25, 50, 100), int),
        replications=_get(cfg, "experiment.replications", 700, int),
        B=_get(cfg, "experiment.B", 1000, int),
        alpha=_get(cfg, "experiment.alpha", 0.05, float),
        sigma_reps=_get(cfg, "experiment.sigma_reps", 100_000, int),
        seed=seed,
        methods=tuple(
            _METHODS[m] for m in _get_list(cfg, "experiment.methods", tuple(_METHODS))
        ),
        sides=tuple(
            _SIDES[s] for s in _get_list(cfg, "experiment.sides", tuple(_SIDES))
        ),
        bandwidth=bandwidth_from_config(cfg),
        t_use_raw_states=_get(cfg, "experiment.t_use_raw_states", False, _bool),
    )


def cmd_coverage(args, cfg: dict) -> None:
    exp = experiment_from_config(cfg, args.seed)
    report = run_coverage_experiment(exp, threads=args.threads)
    fmt = args.format
    text = emit_table(report, fmt)
    _write(text, args.out, f"coverage.{'csv' if fmt == 'csv' else 'txt'}")
    sigma_buf = io.StringIO()
    sigma_buf.write("map,h,n,A,sigma\n")
    for (name, h, n), (a, sd) in sorted(report.sigma_table.items()):
        sigma_buf.write(f"{name},{h},{n},{a!r},{sd!r}\n")
    if args.out is not None:
        _write(sigma_buf.getvalue(), args.out, "sigma.csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaosboot",
        description="Bootstrap confidence intervals for time averages of "
        "chaotic interval maps.",
    )
    parser.add_argument("--config", help="path to key=value config file")
    parser.add_argument("--seed", type=int, default=None, help="root seed override")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--format", choices=("csv", "text"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "bootstrap", "sigma", "edgeworth", "coverage"):
        sub.add_parser(name)
    return parser


_COMMANDS = {
    "simulate": cmd_simulate,
    "bootstrap": cmd_bootstrap,
    "sigma": cmd_sigma,
    "edgeworth": cmd_edgeworth,
    "coverage": cmd_coverage,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config)
        _COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ChaosbootError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
