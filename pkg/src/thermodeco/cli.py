"""Command-line interface: config-driven runs emitting CSV tables and JSON summaries.

Subcommands
    simulate      per-mode Langevin trajectories + variance/rate summary
    fdr-verify    stationary-variance and rate-recovery checks per mode
    deco-scan     decoherence exponent/magnitude table over wavenumbers
    field-sample  equilibrium lattice sampling with energy-fluctuation checks

Configuration is a plain-text key=value file (# comments); command-line
flags override file values.  The fully resolved config and version string
are embedded in every output file.  Exit codes: 0 pass, 1 statistical
failure, 2 config error, 3 I/O failure, 4 internal consistency violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InsufficientDataError
from .fieldspace import (
    mean_free_energy,
    parseval_check,
    sample_equilibrium_field,
    total_energy_fluctuation,
)
from .influence import decoherence_scan
from .langevin import (
    METHOD_EULER,
    METHOD_EXACT,
    SAMPLE_EQUILIBRIUM,
    ModeHistory,
    NoiseStream,
    SimConfig,
    simulate_ensemble,
)
from .medium import (
    LatticeField,
    MediumParams,
    ModeSpec,
    equilibrium_mode_variance,
    relaxation_rate,
)
from .stats import autocorrelation, fit_exponential_rate, sample_variance

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    """Fully resolved run configuration (file values overridden by flags)."""

    T0: float = 1.0
    c0: float = 1.0
    D0: float = 1.0
    d: int = 1
    # mode set: explicit list wins over the uniform grid
    k_list: list = field(default_factory=list)
    k_min: float = 1.0
    dk: float = 1.0
    k_count: int = 1
    # simulation
    dt: float = 0.01
    t_end: float = 100.0
    method: str = METHOD_EXACT
    burn_in: float | None = None  # default 10 / gamma_k per mode
    n_traj: int = 1
    initial: float | str = SAMPLE_EQUILIBRIUM
    noise_scale: float = 1.0  # test-only knob; != 1 breaks the noise balance
    rate_tol: float = 0.05
    max_lag: int = 400
    # decoherence scan
    amplitude: float = 0.1
    duration: float = 10.0
    scan_steps: int = 100
    # lattice sampling
    lattice_n: int = 64
    lattice_a: float = 1.0
    n_fields: int = 1000
    # run control
    seed: int = 12345
    out: str = "out"
    format: str = "csv"
    workers: int = 1


_BOOLS = {"true": True, "false": False, "1": True, "0": False}


def _parse_value(name: str, raw: str):
    raw = raw.strip()
    ftypes = {f.name: f for f in fields(RunConfig)}
    if name not in ftypes:
        raise ConfigError(f"unknown config key {name!r}")
    if name == "k_list":
        return [float(x) for x in raw.split(",") if x.strip() != ""]
    if name == "initial":
        return raw if raw == SAMPLE_EQUILIBRIUM else float(raw)
    if name == "burn_in":
        return None if raw.lower() in ("", "none", "auto") else float(raw)
    if name in ("d", "k_count", "n_traj", "scan_steps", "lattice_n", "n_fields", "seed", "workers", "max_lag"):
        return int(raw)
    if name in ("method", "out", "format"):
        return raw
    return float(raw)


def load_config_file(path: str) -> dict:
    values = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        try:
            values[key] = _parse_value(key, raw)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        for key, val in load_config_file(args.config).items():
            setattr(cfg, key, val)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            setattr(cfg, f.name, flag)
    if cfg.method not in (METHOD_EXACT, METHOD_EULER):
        raise ConfigError(f"unknown method {cfg.method!r}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"unknown format {cfg.format!r}")
    if cfg.workers < 1 or cfg.n_traj < 1 or cfg.n_fields < 1:
        raise ConfigError("workers, n_traj and n_fields must be >= 1")
    return cfg


def mode_set(cfg: RunConfig) -> list[ModeSpec]:
    if cfg.k_list:
        ks = list(cfg.k_list)
    else:
        ks = [cfg.k_min + i * cfg.dk for i in range(cfg.k_count)]
    return [ModeSpec(k=k, weight=1.0) for k in ks]


def medium(cfg: RunConfig) -> MediumParams:
    try:
        return MediumParams(T0=cfg.T0, c0=cfg.c0, D0=cfg.D0, d=cfg.d)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return format(x, ".17g")
    return str(x)


# execution details excluded from provenance so outputs are byte-identical
# across worker counts and destination directories
_NON_PROVENANCE_KEYS = ("out", "workers")


def config_echo(cfg: RunConfig) -> dict:
    echo = {k: v for k, v in asdict(cfg).items() if k not in _NON_PROVENANCE_KEYS}
    echo["version"] = __version__
    return echo


def write_csv(path: Path, columns: list[str], rows: list[tuple], cfg: RunConfig):
    lines = [f"# version={__version__}"]
    for key, val in asdict(cfg).items():
        if key in _NON_PROVENANCE_KEYS:
            continue
        if isinstance(val, list):
            val = ",".join(_fmt(v) for v in val)
        lines.append(f"# {key}={_fmt(val)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_table(outdir: Path, stem: str, columns: list[str], rows: list[tuple], cfg: RunConfig):
    """Table in the configured format: CSV (default) or a JSON row list."""
    if cfg.format == "json":
        payload = {
            "columns": columns,
            "rows": [[_fmt(v) if isinstance(v, float) and math.isinf(v) else v for v in row]
                     for row in rows],
        }
        write_json(outdir / f"{stem}.json", payload, cfg)
    else:
        write_csv(outdir / f"{stem}.csv", columns, rows, cfg)


def write_json(path: Path, payload: dict, cfg: RunConfig):
    payload = dict(payload)
    payload["config"] = config_echo(cfg)
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _burn_in_steps(cfg: RunConfig, gamma: float) -> int:
    burn_t = cfg.burn_in if cfg.burn_in is not None else (10.0 / gamma if gamma > 0 else 0.0)
    return max(int(math.ceil(burn_t / cfg.dt)), 0)


def _variance_stderr_correlated(variance: float, n: int, gamma: float, dt: float) -> float:
    """Standard error of the sample variance of consecutive OU samples.

    The squared-fluctuation series has step correlation r = e^(-2 gamma dt),
    giving effective sample size n (1-r)/(1+r).
    """
    r = math.exp(-2.0 * gamma * dt) if gamma > 0 else 1.0
    n_eff = max(n * (1.0 - r) / (1.0 + r), 2.0)
    return variance * math.sqrt(2.0 / n_eff)


def _mode_summary(params: MediumParams, cfg: RunConfig, spec: ModeSpec, trajs: list[ModeHistory]) -> dict:
    gamma = relaxation_rate(params, spec.k)
    n_burn = _burn_in_steps(cfg, gamma)
    post = np.concatenate([h.values[n_burn:] for h in trajs])
    entry: dict = {
        "k": spec.k,
        "expected_rate": gamma,
        "expected_variance": equilibrium_mode_variance(params),
        "n_traj": len(trajs),
        "burn_in_steps": n_burn,
        "deterministic": cfg.noise_scale == 0.0,
    }
    if post.size >= 2:
        st = sample_variance(post)
        entry["sample_variance"] = st.variance
        entry["stderr_variance"] = _variance_stderr_correlated(st.variance, st.n, gamma, cfg.dt)
        entry["sample_mean"] = st.mean
    try:
        acf = autocorrelation(trajs[0], min(cfg.max_lag, len(trajs[0]) - 1))
        entry["fitted_rate"] = fit_exponential_rate(acf)
    except InsufficientDataError:
        entry["fitted_rate"] = None
    return entry


def cmd_simulate(cfg: RunConfig) -> int:
    params = medium(cfg)
    modes = mode_set(cfg)
    sim = SimConfig(dt=cfg.dt, t_end=cfg.t_end, method=cfg.method, seed=cfg.seed,
                    initial=cfg.initial, noise_scale=cfg.noise_scale)
    ensemble = simulate_ensemble(params, modes, cfg.n_traj, sim, n_workers=cfg.workers)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    summary_modes = []
    for m, (spec, trajs) in enumerate(zip(modes, ensemble)):
        for i, hist in enumerate(trajs):
            rows = [(float(t), float(v)) for t, v in zip(hist.times, hist.values)]
            write_table(outdir, f"mode{m}_traj{i}", ["t", "delta_T"], rows, cfg)
        summary_modes.append(_mode_summary(params, cfg, spec, trajs))
    write_json(outdir / "summary.json", {"modes": summary_modes}, cfg)
    return EXIT_OK


def cmd_fdr_verify(cfg: RunConfig) -> int:
    params = medium(cfg)
    modes = mode_set(cfg)
    sim = SimConfig(dt=cfg.dt, t_end=cfg.t_end, method=cfg.method, seed=cfg.seed,
                    initial=cfg.initial, noise_scale=cfg.noise_scale)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    report = []
    all_pass = True
    for m, spec in enumerate(modes):
        if spec.k == 0.0:
            report.append({"k": 0.0, "skipped": "conserved mode (zero rate, zero noise)"})
            continue
        hist = simulate_ensemble(params, [spec], 1, sim, n_workers=cfg.workers)[0][0]
        gamma = relaxation_rate(params, spec.k)
        n_burn = _burn_in_steps(cfg, gamma)
        post = hist.values[n_burn:]
        st = sample_variance(post)
        expected = equilibrium_mode_variance(params)
        stderr = _variance_stderr_correlated(expected, st.n, gamma, cfg.dt)
        var_pass = abs(st.variance - expected) <= 3.0 * stderr
        entry = {
            "k": spec.k,
            "variance": st.variance,
            "expected_variance": expected,
            "stderr_variance": stderr,
            "variance_pass": var_pass,
        }
        try:
            acf = autocorrelation(ModeHistory(spec.k, cfg.dt, post), min(cfg.max_lag, post.size - 1))
            fitted = fit_exponential_rate(acf)
            # statistical floor: sd(rate)/rate ~ sqrt(2 tau / T) for a run of
            # T time units with correlation time tau = 1/gamma
            rel_sd = math.sqrt(2.0 / (gamma * post.size * cfg.dt))
            rate_tol = max(cfg.rate_tol, 3.0 * rel_sd)
            rate_pass = abs(fitted - gamma) <= rate_tol * gamma
            entry.update({"fitted_rate": fitted, "expected_rate": gamma,
                          "rate_tol": rate_tol, "rate_pass": rate_pass})
        except InsufficientDataError as exc:
            entry.update({"fitted_rate": None, "expected_rate": gamma, "rate_pass": False,
                          "rate_error": str(exc)})
            rate_pass = False
        all_pass = all_pass and var_pass and rate_pass
        report.append(entry)
    write_json(outdir / "fdr_report.json", {"tests": report, "all_pass": all_pass}, cfg)
    return EXIT_OK if all_pass else EXIT_STAT_FAIL


def cmd_deco_scan(cfg: RunConfig) -> int:
    params = medium(cfg)
    ks = [spec.k for spec in mode_set(cfg)]
    rows = decoherence_scan(params, ks, cfg.amplitude, cfg.duration, n_steps=cfg.scan_steps)
    exponents = [r[1] for r in rows]
    for prev, nxt in zip(exponents, exponents[1:]):
        if not prev > nxt:
            print("internal consistency violation: exponent not strictly decreasing in k",
                  file=sys.stderr)
            return EXIT_INTERNAL
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_table(outdir, "deco_scan", ["k", "exponent", "magnitude", "conserved_flag"], rows, cfg)
    return EXIT_OK


def cmd_field_sample(cfg: RunConfig) -> int:
    params = medium(cfg)
    template = LatticeField.zeros(cfg.d, (cfg.lattice_n,) * cfg.d, cfg.lattice_a)
    stream = NoiseStream(0.0, cfg.seed, 0)
    fields_ = [sample_equilibrium_field(params, template, stream) for _ in range(cfg.n_fields)]
    st = total_energy_fluctuation(params, fields_)
    expected = template.volume * params.c0 * params.T0 ** 2
    du_pass = abs(st.variance - expected) <= 3.0 * st.stderr_variance

    residual = max(parseval_check(fld) for fld in fields_[: min(10, len(fields_))])
    parseval_pass = residual <= 1e-12

    mean_df = mean_free_energy(params, fields_)
    expected_df = template.n_sites * params.T0 / 2.0
    # free energy of an equilibrium field is a chi^2 sum: sd = sqrt(n_sites/2) * T0
    stderr_df = math.sqrt(template.n_sites / 2.0) * params.T0 / math.sqrt(cfg.n_fields)
    equip_pass = abs(mean_df - expected_df) <= 3.0 * stderr_df

    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_json(outdir / "field_summary.json", {
        "energy_variance": st.variance,
        "energy_variance_stderr": st.stderr_variance,
        "expected_energy_variance": expected,
        "energy_variance_pass": du_pass,
        "parseval_residual": residual,
        "parseval_pass": parseval_pass,
        "mean_free_energy": mean_df,
        "expected_mean_free_energy": expected_df,
        "equipartition_pass": equip_pass,
        "all_pass": du_pass and parseval_pass and equip_pass,
    }, cfg)
    return EXIT_OK if (du_pass and parseval_pass and equip_pass) else EXIT_STAT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--workers", type=int)
    common.add_argument("--T0", type=float)
    common.add_argument("--c0", type=float)
    common.add_argument("--D0", type=float)
    common.add_argument("--k", dest="k_list", type=lambda s: [float(x) for x in s.split(",")],
                        help="comma-separated wavenumbers")
    common.add_argument("--dt", type=float)
    common.add_argument("--t-end", dest="t_end", type=float)
    common.add_argument("--n-traj", dest="n_traj", type=int)
    common.add_argument("--amplitude", type=float)
    common.add_argument("--duration", type=float)
    common.add_argument("--method", choices=[METHOD_EXACT, METHOD_EULER])
    common.add_argument("--burn-in", dest="burn_in", type=float)
    common.add_argument("--noise-scale", dest="noise_scale", type=float)
    common.add_argument("--lattice-n", dest="lattice_n", type=int)
    common.add_argument("--lattice-a", dest="lattice_a", type=float)
    common.add_argument("--n-fields", dest="n_fields", type=int)

    parser = argparse.ArgumentParser(prog="thermodeco",
                                     description="Fluctuating heat diffusion simulator and verifier")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common])
    sub.add_parser("fdr-verify", parents=[common])
    sub.add_parser("deco-scan", parents=[common])
    sub.add_parser("field-sample", parents=[common])
    return parser


_COMMANDS = {
    "simulate": cmd_simulate,
    "fdr-verify": cmd_fdr_verify,
    "deco-scan": cmd_deco_scan,
    "field-sample": cmd_field_sample,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        cfg = resolve_config(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
