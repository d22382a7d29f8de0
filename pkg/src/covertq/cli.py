"""Command-line front door: config in, deterministic CSV artifacts out.

Subcommands map one-to-one onto the library's pipelines:

    sample              draw a sample set and persist the binary cache
    optimize            single risk-constrained optimum
    frontier            symmetric-budget sweep
    surface             eps_cov x eps_rel budget grid
    scaling             payload versus frame length n
    benchmark-validate  closed forms vs Monte Carlo on the benchmark channel
    decade-gains        throughput gains across decade budgets
    risk-adjusted       weighted-penalty grid maximization (sweep or heatmap)
    sensitivity         finite-difference budget sensitivities

Configuration is a JSON document with nested sections (see DEFAULTS below
for the full schema); every key is optional and unknown keys are rejected.
Command-line flags override config values, which override the defaults.
The default output directory can also be set through the environment
variable COVERTQ_OUTPUT_DIR (flags and config still win over it).

Every CSV artifact starts with a comment line recording the seed, K, and
the channel digest of the sample set used, so identical configs reproduce
byte-identical files.

Exit codes: 0 success; 2 configuration error (also argparse errors and a
cache whose channel digest contradicts the config); 3 I/O error (missing,
malformed, or truncated cache, unwritable output); 4 a decade gain was
requested but is infeasible (zero-throughput denominator); 5 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .benchmark import BenchmarkChannel, validate, write_validation_csv
from .distributions import (
    ExponentialSpec,
    TruncatedGaussianSpec,
    TruncatedLognormalSpec,
)
from .quantiles import RiskBudgets
from .risk_adjusted import (
    GridSpec,
    heatmap_sweep,
    lambda_sweep,
    write_heatmap_csv,
    write_lambda_sweep_csv,
)
from .risk_constrained import (
    DECADE_BUDGETS,
    ProtocolParams,
    decade_gains,
    frontier_sweep,
    n_scaling_sweep,
    optimize,
    surface_sweep,
    write_decade_gains_csv,
    write_frontier_csv,
    write_scaling_csv,
    write_surface_csv,
)
from .samples import (
    BenchmarkChannelSpec,
    ChannelSpec,
    SampleFileDigestError,
    SampleFileError,
    SampleSet,
    StochasticChannelSpec,
    channel_digest,
    export_sample_csv,
    generate_sample_set,
    load_sample_set,
    save_sample_set,
)
from .sensitivity import sensitivities_symmetric, write_sensitivity_csv
from ._csvio import write_csv

__all__ = ["main", "ConfigError", "InfeasibleGainError"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INFEASIBLE_GAIN = 4
EXIT_INTERNAL = 5

OUTPUT_DIR_ENV = "COVERTQ_OUTPUT_DIR"


class ConfigError(Exception):
    """The configuration (file or flags) cannot be used as given."""


class InfeasibleGainError(Exception):
    """A requested decade gain has a zero-throughput denominator."""


# Full config schema with defaults.  The channel section is keyed by
# "kind"; the remaining keys of that section depend on it.
DEFAULTS = {
    "channel": {
        "kind": "stochastic",
        "mu_ln": -0.0126,
        "sigma_ln": 0.05,
        "nb_mu": 0.005,
        "nb_sigma": 0.001,
        "nb_lower": 0.0,
        "nb_upper": 0.5,
    },
    "protocol": {"n": 10_000_000, "delta": 0.05},
    "sampling": {"k": 1_000_000, "seed": 1, "workers": 1},
    "budgets": {"eps_cov": 0.01, "eps_rel": 0.01},
    "frontier": {"eps_min": 1e-5, "eps_max": 1e-1, "points": 30},
    "surface": {"eps_min": 1e-5, "eps_max": 1e-1, "points": 20},
    "scaling": {
        "eps": 0.01,
        "n_values": [100_000, 400_000, 1_000_000, 4_000_000, 10_000_000, 40_000_000],
    },
    "benchmark": {"eta0": 0.9, "rate": 10.0, "eps_list": [1e-3, 1e-2, 1e-1, 0.2, 0.5]},
    "risk_adjusted": {
        "grid_points": 401,
        "mode": "sweep",
        "axis": "cov",
        "fixed_other": 1.0,
        "lambda_min": 1e-2,
        "lambda_max": 1e6,
        "lambda_points": 40,
        "heatmap_min": 1e-6,
        "heatmap_max": 1e6,
        "heatmap_points": 25,
    },
    "sensitivity": {"eps_min": 1e-4, "eps_max": 1e-1, "points": 20},
    "output_dir": None,
}

_BENCHMARK_CHANNEL_DEFAULTS = {"eta0": 0.9, "rate": 10.0}


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration: domain objects plus the merged raw tree."""

    channel: ChannelSpec
    protocol: ProtocolParams
    k: int
    seed: int
    workers: int
    budgets: RiskBudgets
    raw: dict
    output_dir: Path


def _coerce_like(name: str, default, value):
    # The defaults table doubles as the type schema: every user value is
    # coerced to its default's shape, so type problems fail here with a
    # config error instead of deep inside a pipeline.
    try:
        if isinstance(default, str) or default is None:
            if not isinstance(value, str):
                raise TypeError("expected a string")
            return value
        if isinstance(default, list):
            elem = default[0]
            return [_coerce_like(name, elem, v) for v in value]
        if isinstance(default, int) and not isinstance(default, bool):
            as_float = float(value)
            as_int = int(as_float)
            if as_int != as_float:
                raise ValueError("expected an integer")
            return as_int
        return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad value for '{name}': {value!r} ({e})") from e


def _merge_section(name: str, user: dict, defaults: dict) -> dict:
    unknown = set(user) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown key(s) in '{name}': {sorted(unknown)}")
    merged = dict(defaults)
    for key, value in user.items():
        merged[key] = _coerce_like(f"{name}.{key}", defaults[key], value)
    return merged


def _merge_config(user: dict) -> dict:
    if not isinstance(user, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(user) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    merged = copy.deepcopy(DEFAULTS)
    for name, value in user.items():
        if name == "output_dir":
            if not isinstance(value, str):
                raise ConfigError("'output_dir' must be a string")
            merged[name] = value
            continue
        if not isinstance(value, dict):
            raise ConfigError(f"'{name}' must be a JSON object")
        if name == "channel":
            merged[name] = _merge_channel(value)
        else:
            merged[name] = _merge_section(name, value, DEFAULTS[name])
    return merged


def _merge_channel(user: dict) -> dict:
    kind = user.get("kind", "stochastic")
    if kind == "stochastic":
        return _merge_section("channel", user, DEFAULTS["channel"])
    if kind == "benchmark":
        defaults = {"kind": "benchmark", **_BENCHMARK_CHANNEL_DEFAULTS}
        return _merge_section("channel", user, defaults)
    raise ConfigError(f"channel kind must be 'stochastic' or 'benchmark', got {kind!r}")


def _build_channel(section: dict) -> ChannelSpec:
    if section["kind"] == "stochastic":
        return StochasticChannelSpec(
            eta=TruncatedLognormalSpec(
                mu_ln=section["mu_ln"], sigma_ln=section["sigma_ln"]
            ),
            nb=TruncatedGaussianSpec(
                mu=section["nb_mu"],
                sigma=section["nb_sigma"],
                lower=section["nb_lower"],
                upper=section["nb_upper"],
            ),
        )
    return BenchmarkChannelSpec(
        eta0=section["eta0"], nb=ExponentialSpec(rate=section["rate"])
    )


# Flag destinations that override config entries, per (section, key).
_FLAG_MAP = {
    "n": ("protocol", "n"),
    "delta": ("protocol", "delta"),
    "k": ("sampling", "k"),
    "seed": ("sampling", "seed"),
    "workers": ("sampling", "workers"),
    "eps_cov": ("budgets", "eps_cov"),
    "eps_rel": ("budgets", "eps_rel"),
    "eta0": ("benchmark", "eta0"),
    "rate": ("benchmark", "rate"),
    "eps_list": ("benchmark", "eps_list"),
    "grid_points": ("risk_adjusted", "grid_points"),
    "mode": ("risk_adjusted", "mode"),
    "axis": ("risk_adjusted", "axis"),
    "fixed_other": ("risk_adjusted", "fixed_other"),
    "eps": ("scaling", "eps"),
    "n_values": ("scaling", "n_values"),
}

# eps-grid flags resolve into the section owning the current command.
_GRID_FLAG_SECTIONS = {"frontier", "surface", "sensitivity"}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Load the JSON config, apply flag overrides, build domain objects."""
    user = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                user = json.load(fh)
        except OSError as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {args.config} is not valid JSON: {e}") from e
    raw = _merge_config(user)

    for dest, (section, key) in _FLAG_MAP.items():
        value = getattr(args, dest, None)
        if value is not None:
            raw[section][key] = value
    grid_section = args.command if args.command in _GRID_FLAG_SECTIONS else None
    if grid_section:
        for key in ("eps_min", "eps_max", "points"):
            value = getattr(args, key, None)
            if value is not None:
                raw[grid_section][key] = value

    # flags > config > environment > built-in default for the output dir
    if getattr(args, "output_dir", None):
        out_dir = args.output_dir
    elif raw["output_dir"] is not None:
        out_dir = raw["output_dir"]
    else:
        out_dir = os.environ.get(OUTPUT_DIR_ENV, ".")

    try:
        channel = _build_channel(raw["channel"])
        protocol = ProtocolParams(n=raw["protocol"]["n"], delta=raw["protocol"]["delta"])
        budgets = RiskBudgets(
            eps_cov=raw["budgets"]["eps_cov"], eps_rel=raw["budgets"]["eps_rel"]
        )
        k = int(raw["sampling"]["k"])
        seed = int(raw["sampling"]["seed"])
        workers = int(raw["sampling"]["workers"])
        if k < 1:
            raise ValueError(f"sampling.k must be >= 1, got {k}")
        if workers < 1:
            raise ValueError(f"sampling.workers must be >= 1, got {workers}")
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e)) from e
    return RunConfig(
        channel=channel,
        protocol=protocol,
        k=k,
        seed=seed,
        workers=workers,
        budgets=budgets,
        raw=raw,
        output_dir=Path(out_dir),
    )


def _out_path(cfg: RunConfig, args: argparse.Namespace, default_name: str) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg.output_dir / default_name


def _obtain_samples(cfg: RunConfig, args: argparse.Namespace) -> SampleSet:
    cache = getattr(args, "cache", None)
    if cache:
        return load_sample_set(cache, expected_digest=channel_digest(cfg.channel))
    return generate_sample_set(cfg.channel, cfg.k, cfg.seed, workers=cfg.workers)


def _check_report(report) -> None:
    # Cheap internal consistency gate before anything is persisted.
    assert report.t_star == report.q_max * report.r_max, "t_star != q_max * r_max"
    assert 0.0 <= report.q_max <= 1.0, "q_max outside [0, 1]"


def _log_grid(lo, hi, points) -> np.ndarray:
    lo = _coerce_like("grid minimum", 0.0, lo)
    hi = _coerce_like("grid maximum", 0.0, hi)
    points = _coerce_like("grid points", 1, points)
    if not 0 < lo <= hi:
        raise ConfigError(f"need 0 < eps_min <= eps_max, got [{lo}, {hi}]")
    if points < 1:
        raise ConfigError(f"points must be >= 1, got {points}")
    return np.logspace(np.log10(lo), np.log10(hi), points)


def _cmd_sample(args) -> int:
    cfg = resolve_config(args)
    s = generate_sample_set(cfg.channel, cfg.k, cfg.seed, workers=cfg.workers)
    path = _out_path(cfg, args, "samples.cqcs")
    save_sample_set(s, path)
    if args.csv:
        export_sample_csv(s, args.csv)
    print(f"wrote {path} (K={s.K}, seed={s.seed})")
    return EXIT_OK


def _cmd_optimize(args) -> int:
    cfg = resolve_config(args)
    s = _obtain_samples(cfg, args)
    report = optimize(s, cfg.protocol, cfg.budgets)
    _check_report(report)
    path = _out_path(cfg, args, "optimize.csv")
    write_csv(
        path,
        [
            "eps_cov",
            "eps_rel",
            "q_max",
            "r_max",
            "t_star",
            "n_t_star",
            "q_capped",
            "feasible",
            "below_resolution",
        ],
        [
            (
                cfg.budgets.eps_cov,
                cfg.budgets.eps_rel,
                report.q_max,
                report.r_max,
                report.t_star,
                report.total_payload,
                report.q_capped,
                report.r_max > 0,
                report.below_resolution,
            )
        ],
        seed=s.seed,
        K=s.K,
        digest=s.channel_digest,
    )
    print(
        f"wrote {path} (t_star={report.t_star!r}, payload={report.total_payload!r})"
    )
    return EXIT_OK


def _cmd_frontier(args) -> int:
    cfg = resolve_config(args)
    s = _obtain_samples(cfg, args)
    block = cfg.raw["frontier"]
    grid = _log_grid(block["eps_min"], block["eps_max"], block["points"])
    rows = frontier_sweep(s, cfg.protocol, grid)
    for _, report in rows:
        _check_report(report)
    path = _out_path(cfg, args, "frontier.csv")
    write_frontier_csv(rows, path, seed=s.seed, K=s.K, digest=s.channel_digest)
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_surface(args) -> int:
    cfg = resolve_config(args)
    s = _obtain_samples(cfg, args)
    block = cfg.raw["surface"]
    grid = _log_grid(block["eps_min"], block["eps_max"], block["points"])
    matrix = surface_sweep(s, cfg.protocol, grid, grid)
    path = _out_path(cfg, args, "surface.csv")
    write_surface_csv(
        matrix, grid, grid, path, seed=s.seed, K=s.K, digest=s.channel_digest
    )
    print(f"wrote {path} ({len(grid)}x{len(grid)} grid)")
    return EXIT_OK


def _cmd_scaling(args) -> int:
    cfg = resolve_config(args)
    s = _obtain_samples(cfg, args)
    block = cfg.raw["scaling"]
    try:
        rows = n_scaling_sweep(s, cfg.protocol.delta, block["eps"], block["n_values"])
    except ValueError as e:
        raise ConfigError(str(e)) from e
    path = _out_path(cfg, args, "scaling.csv")
    write_scaling_csv(rows, path, seed=s.seed, K=s.K, digest=s.channel_digest)
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_benchmark_validate(args) -> int:
    cfg = resolve_config(args)
    block = cfg.raw["benchmark"]
    try:
        channel = BenchmarkChannel(eta0=block["eta0"], rate=block["rate"])
        rows = validate(
            channel, cfg.protocol, block["eps_list"], cfg.k, cfg.seed, cfg.workers
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e
    path = _out_path(cfg, args, "benchmark_validate.csv")
    digest = channel_digest(channel.as_channel_spec())
    write_validation_csv(rows, path, seed=cfg.seed, K=cfg.k, digest=digest)
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_decade_gains(args) -> int:
    cfg = resolve_config(args)
    s = _obtain_samples(cfg, args)
    rows = frontier_sweep(s, cfg.protocol, DECADE_BUDGETS)
    gains = decade_gains(rows)
    path = _out_path(cfg, args, "decade_gains.csv")
    write_decade_gains_csv(gains, path, seed=s.seed, K=s.K, digest=s.channel_digest)
    infeasible = [(lo, hi) for lo, hi, gain in gains if gain is None]
    print(f"wrote {path} ({len(gains)} gains)")
    if infeasible:
        raise InfeasibleGainError(
            f"zero throughput at the smaller budget of {infeasible}"
        )
    return EXIT_OK


def _cmd_risk_adjusted(args) -> int:
    cfg = resolve_config(args)
    s = _obtain_samples(cfg, args)
    block = cfg.raw["risk_adjusted"]
    try:
        grid = GridSpec(points_per_axis=int(block["grid_points"]))
    except ValueError as e:
        raise ConfigError(str(e)) from e
    path = _out_path(cfg, args, "risk_adjusted.csv")
    if block["mode"] == "sweep":
        values = _log_grid(block["lambda_min"], block["lambda_max"], block["lambda_points"])
        if block["axis"] not in ("cov", "rel"):
            raise ConfigError(f"risk_adjusted.axis must be cov or rel, got {block['axis']!r}")
        rows = lambda_sweep(
            s, cfg.protocol, grid, block["axis"], values, block["fixed_other"]
        )
        write_lambda_sweep_csv(
            rows, block["axis"], block["fixed_other"], path,
            seed=s.seed, K=s.K, digest=s.channel_digest,
        )
        print(f"wrote {path} ({len(rows)} rows)")
    elif block["mode"] == "heatmap":
        values = _log_grid(block["heatmap_min"], block["heatmap_max"], block["heatmap_points"])
        q_star, r_star = heatmap_sweep(s, cfg.protocol, grid, values, values)
        write_heatmap_csv(
            q_star, r_star, values, values, path,
            seed=s.seed, K=s.K, digest=s.channel_digest,
        )
        print(f"wrote {path} ({len(values)}x{len(values)} grid)")
    else:
        raise ConfigError(
            f"risk_adjusted.mode must be 'sweep' or 'heatmap', got {block['mode']!r}"
        )
    return EXIT_OK


def _cmd_sensitivity(args) -> int:
    cfg = resolve_config(args)
    s = _obtain_samples(cfg, args)
    block = cfg.raw["sensitivity"]
    grid = _log_grid(block["eps_min"], block["eps_max"], block["points"])
    try:
        points = sensitivities_symmetric(s, cfg.protocol, grid)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    path = _out_path(cfg, args, "sensitivity.csv")
    write_sensitivity_csv(points, path, seed=s.seed, K=s.K, digest=s.channel_digest)
    print(f"wrote {path} ({len(points)} rows)")
    return EXIT_OK


_COMMANDS = {
    "sample": _cmd_sample,
    "optimize": _cmd_optimize,
    "frontier": _cmd_frontier,
    "surface": _cmd_surface,
    "scaling": _cmd_scaling,
    "benchmark-validate": _cmd_benchmark_validate,
    "decade-gains": _cmd_decade_gains,
    "risk-adjusted": _cmd_risk_adjusted,
    "sensitivity": _cmd_sensitivity,
}


def _add_common(sub: argparse.ArgumentParser, cache: bool = True) -> None:
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--output-dir", help="directory for default-named outputs")
    sub.add_argument("--out", help="explicit output path (overrides --output-dir)")
    sub.add_argument("--n", type=float, help="channel uses per frame")
    sub.add_argument("--delta", type=float, help="covertness threshold")
    sub.add_argument("--k", type=int, help="Monte Carlo sample count")
    sub.add_argument("--seed", type=int, help="sampling seed")
    sub.add_argument("--workers", type=int, help="generation worker threads")
    if cache:
        sub.add_argument("--cache", help="reuse a sample cache written by 'sample'")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covertq",
        description="Risk-aware operating points for covert quantum links.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("sample", help="generate and persist a sample cache")
    _add_common(p, cache=False)
    p.add_argument("--csv", help="also export the arrays as CSV")

    p = subs.add_parser("optimize", help="single risk-constrained optimum")
    _add_common(p)
    p.add_argument("--eps-cov", type=float, dest="eps_cov")
    p.add_argument("--eps-rel", type=float, dest="eps_rel")

    for name, extra in (
        ("frontier", "symmetric budget sweep"),
        ("surface", "budget grid sweep"),
        ("sensitivity", "finite-difference sensitivities"),
    ):
        p = subs.add_parser(name, help=extra)
        _add_common(p)
        p.add_argument("--eps-min", type=float, dest="eps_min")
        p.add_argument("--eps-max", type=float, dest="eps_max")
        p.add_argument("--points", type=int)

    p = subs.add_parser("scaling", help="payload vs frame length")
    _add_common(p)
    p.add_argument("--eps", type=float)
    p.add_argument(
        "--n-values",
        dest="n_values",
        type=lambda text: [int(v) for v in text.split(",")],
        help="comma-separated frame lengths",
    )

    p = subs.add_parser("benchmark-validate", help="closed forms vs Monte Carlo")
    _add_common(p, cache=False)
    p.add_argument("--eta0", type=float)
    p.add_argument("--rate", type=float)
    p.add_argument(
        "--eps-list",
        dest="eps_list",
        type=lambda text: [float(v) for v in text.split(",")],
        help="comma-separated symmetric budgets",
    )

    p = subs.add_parser("decade-gains", help="gains across decade budgets")
    _add_common(p)

    p = subs.add_parser("risk-adjusted", help="weighted-penalty grid maximization")
    _add_common(p)
    p.add_argument("--mode", choices=("sweep", "heatmap"))
    p.add_argument("--axis", choices=("cov", "rel"))
    p.add_argument("--grid-points", type=int, dest="grid_points")
    p.add_argument("--fixed-other", type=float, dest="fixed_other")

    return parser


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SampleFileDigestError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SampleFileError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except InfeasibleGainError as e:
        print(f"infeasible gain: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE_GAIN
    except AssertionError as e:
        print(f"internal invariant violation: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
