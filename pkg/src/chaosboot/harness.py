"""Coverage-experiment driver: the full factorial study and its tables."""

from __future__ import annotations

import hashlib
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

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
from .errors import ChaosbootError, ParameterError
from .maps import MapKind, MapSpec, generate_trajectory
from .stats import OBSERVABLES, Observable, true_sigma_mc

METHOD_ORDER = (Method.T_APPROX, Method.NPBOOT, Method.GAUSSIAN, Method.PBOOT)
SIDE_ORDER = (Side.TWO_SIDED, Side.UPPER_BOUNDED, Side.LOWER_BOUNDED)
OBSERVABLE_ORDER = ("x", "x^2", "x^4")

_MAP_INDEX = {MapKind.DOUBLING: 0, MapKind.DRILL: 1, MapKind.LOGISTIC: 2}
# stream tags: one lane per randomness consumer so dropping a method from the
# config cannot shift any other cell's draws
_TAG_SIGMA, _TAG_DATA, _TAG_NPBOOT, _TAG_PBOOT = 0, 1, 2, 3


@dataclass(frozen=True)
class ExperimentConfig:
    maps: tuple[MapSpec, ...]
    observables: tuple[str, ...] = OBSERVABLE_ORDER
    sample_sizes: tuple[int, ...] = (25, 50, 100)
    replications: int = 700
    B: int = 1000
    alpha: float = 0.05
    sigma_reps: int = 100_000
    seed: int = 0
    methods: tuple[Method, ...] = METHOD_ORDER
    sides: tuple[Side, ...] = SIDE_ORDER
    bandwidth: BandwidthRule = field(default_factory=BandwidthRule)
    t_use_raw_states: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError("alpha must lie in (0, 1)")
        for v in (self.replications, self.B, self.sigma_reps):
            if v < 1:
                raise ParameterError("counts must be positive")
        for name in self.observables:
            if name not in OBSERVABLES:
                raise ParameterError(f"unknown observable {name!r}")


@dataclass
class CellStats:
    hits: int = 0
    reps: int = 0  # successful replications (denominator)
    failures: int = 0

    @property
    def coverage(self) -> float:
        return self.hits / self.reps if self.reps else math.nan


@dataclass(frozen=True)
class CoverageReport:
    # (map, h, n, method, side) -> CellStats
    cells: dict
    # (map, h, n) -> (spatial mean, sigma)
    sigma_table: dict
    seed: int
    config_digest: str


def _cell_rng(seed: int, key: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _config_digest(cfg: ExperimentConfig) -> str:
    return hashlib.sha256(repr(cfg).encode()).hexdigest()[:16]


def _map_name(spec: MapSpec) -> str:
    return spec.kind.value


def _one_replication(
    cfg: ExperimentConfig,
    spec: MapSpec,
    h: Observable,
    n: int,
    key: tuple[int, int, int],
    rep: int,
    sigma_hat: float,
    a_true: float,
):
    """Returns {(method, side): hit or None-on-failure} for one replication."""
    rng = _cell_rng(cfg.seed, key + (_TAG_DATA, rep))
    lo, hi = spec.support
    x0 = rng.uniform(lo, hi)
    traj = generate_trajectory(spec, x0, n, rng)
    out: dict[tuple[Method, Side], bool | None] = {}

    def record(method, make_interval):
        try:
            for side in cfg.sides:
                ci = make_interval(side)
                out[(method, side)] = ci.contains(a_true)
        except ChaosbootError:
            for side in cfg.sides:
                out[(method, side)] = None

    if Method.T_APPROX in cfg.methods:
        record(
            Method.T_APPROX,
            lambda side: t_interval(
                traj, h, cfg.alpha, side, use_raw_states=cfg.t_use_raw_states
            ),
        )
    if Method.GAUSSIAN in cfg.methods:
        record(
            Method.GAUSSIAN,
            lambda side: gaussian_interval(traj, h, sigma_hat, cfg.alpha, side),
        )
    if Method.NPBOOT in cfg.methods:
        def np_intervals(side, _boot=[None]):
            if _boot[0] is None:
                bc = BootstrapConfig(
                    Mode.NONPIVOTED, B=cfg.B, alpha=cfg.alpha, bandwidth=cfg.bandwidth
                )
                _boot[0] = run_bootstrap(
                    traj, h, bc, spec.discontinuities, spec.support,
                    rng=_cell_rng(cfg.seed, key + (_TAG_NPBOOT, rep)),
                )
            return nonpivoted_interval(traj, h, _boot[0], cfg.alpha, side)

        record(Method.NPBOOT, np_intervals)
    if Method.PBOOT in cfg.methods:
        def p_intervals(side, _boot=[None], _bc=[None]):
            if _boot[0] is None:
                _bc[0] = BootstrapConfig(
                    Mode.PIVOTED, B=cfg.B, alpha=cfg.alpha, bandwidth=cfg.bandwidth
                )
                _boot[0] = run_bootstrap(
                    traj, h, _bc[0], spec.discontinuities, spec.support,
                    rng=_cell_rng(cfg.seed, key + (_TAG_PBOOT, rep)),
                )
            return pivoted_interval(traj, h, _bc[0], sigma_hat, _boot[0], side)

        record(Method.PBOOT, p_intervals)
    return out


def run_coverage_experiment(cfg: ExperimentConfig, threads: int = 1) -> CoverageReport:
    cells: dict = {}
    sigma_table: dict = {}
    for spec in cfg.maps:
        map_i = _MAP_INDEX[spec.kind]
        name = _map_name(spec)
        for obs_name in cfg.observables:
            h = OBSERVABLES[obs_name]()
            obs_i = OBSERVABLE_ORDER.index(obs_name)
            for n in cfg.sample_sizes:
                key = (map_i, obs_i, n)
                mom = true_sigma_mc(
                    spec, h, n, cfg.sigma_reps,
                    _cell_rng(cfg.seed, key + (_TAG_SIGMA,)),
                )
                sigma_table[(name, obs_name, n)] = (
                    mom.spatial_mean, mom.long_run_sd,
                )

                def run_rep(rep):
                    return _one_replication(
                        cfg, spec, h, n, key, rep,
                        mom.long_run_sd, mom.spatial_mean,
                    )

                reps = range(cfg.replications)
                if threads > 1:
                    with ThreadPoolExecutor(max_workers=threads) as pool:
                        results = list(pool.map(run_rep, reps))
                else:
                    results = [run_rep(r) for r in reps]

                for method in cfg.methods:
                    for side in cfg.sides:
                        stats = CellStats()
                        for res in results:
                            hit = res.get((method, side))
                            if hit is None:
                                stats.failures += 1
                            else:
                                stats.reps += 1
                                stats.hits += int(hit)
                        cells[(name, obs_name, n, method, side)] = stats
    return CoverageReport(
        cells=cells,
        sigma_table=sigma_table,
        seed=cfg.seed,
        config_digest=_config_digest(cfg),
    )


def _ordered_keys(report: CoverageReport):
    maps = []
    obs = []
    sizes = []
    for (name, h, n, _m, _s) in report.cells:
        if name not in maps:
            maps.append(name)
        if h not in obs:
            obs.append(h)
        if n not in sizes:
            sizes.append(n)
    obs.sort(key=OBSERVABLE_ORDER.index)
    sizes.sort()
    return maps, obs, sizes


def emit_table(report: CoverageReport, fmt: str = "csv") -> str:
    """Render the report; CSV is lossless (hits/reps columns), text mirrors
    the one-table-per-map-and-side layout."""
    maps, obs, sizes = _ordered_keys(report)
    sides = [s for s in SIDE_ORDER if any(k[4] is s for k in report.cells)]
    methods = [m for m in METHOD_ORDER if any(k[3] is m for k in report.cells)]
    buf = io.StringIO()
    if fmt == "csv":
        buf.write("method,h,n,side,map,coverage,reps,hits,failures\n")
        for name in maps:
            for side in sides:
                for method in methods:
                    for h in obs:
                        for n in sizes:
                            st = report.cells.get((name, h, n, method, side))
                            if st is None:
                                continue
                            buf.write(
                                f"{method.value},{h},{n},{side.value},{name},"
                                f"{st.coverage:.3f},{st.reps},{st.hits},{st.failures}\n"
                            )
        return buf.getvalue()
    if fmt != "text":
        raise ParameterError(f"unknown table format {fmt!r}")
    for name in maps:
        for side in sides:
            keys = [
                (h, n)
                for h in obs
                for n in sizes
                if any((name, h, n, m, side) in report.cells for m in methods)
            ]
            if not keys:
                continue
            buf.write(f"# {side.value} 95% confidence intervals, {name} map\n")
            header = ["method"] + [f"{h},n={n}" for h, n in keys]
            buf.write("  ".join(f"{c:>10s}" for c in header) + "\n")
            for method in methods:
                row = [method.value]
                for h, n in keys:
                    st = report.cells.get((name, h, n, method, side))
                    row.append("" if st is None else f"{st.coverage:.3f}")
                buf.write("  ".join(f"{c:>10s}" for c in row) + "\n")
            buf.write("\n")
    return buf.getvalue()


def parse_coverage_csv(text: str):
    """Inverse of emit_table(fmt='csv'); used by tests for the round trip."""
    lines = [ln for ln in text.strip().split("\n") if ln]
    header = lines[0].split(",")
    out = []
    for ln in lines[1:]:
        row = dict(zip(header, ln.split(",")))
        out.append(row)
    return out
