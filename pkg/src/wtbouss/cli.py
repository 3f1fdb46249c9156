"""Batch front end: config parsing, experiment dispatch and CSV output.

Config files are UTF-8 text with one ``key = value`` per line and ``#``
comments. Keys and defaults are listed in :data:`KEYS`.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .evolve import InitialData, RunConfig, integrate, sweep_entry
from .spectral import GridSpec
from .systems import GENERAL_COEFFS, ModelParams, ParamError, resolve_system, wtb1_grid
from .unknowns import ResolventConfig

COMMANDS = ("simulate", "sweep", "dispersion", "consistency", "verify", "report")
DIAG_COLUMNS = ("time", "e_total", "e_low", "e_high", "e_tilde_high", "curl_res",
                "consistency_res", "guard_factor")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_GUARD = 0, 2, 3, 4


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(sentinel: str):
    def conv(text: str):
        return None if text.strip().lower() == sentinel else float(text)
    return conv


def _floats(text: str) -> tuple:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _modes(text: str) -> tuple:
    out = []
    for item in text.split(","):
        if item.strip():
            k1, k2 = item.split(":")
            out.append((int(k1), int(k2)))
    return tuple(out)


# key -> (converter, default); a default of None with required=True marks mandatory keys
KEYS = {
    "system": (str, None),
    "eps": (float, None),
    "nx": (int, None),
    "ny": (int, None),
    "lx": (float, 2 * math.pi),
    "ly": (float, 2 * math.pi),
    "dealias_fraction": (float, 2.0 / 3.0),
    "a": (float, GENERAL_COEFFS[0]),
    "b": (float, GENERAL_COEFFS[1]),
    "c": (float, GENERAL_COEFFS[2]),
    "d": (float, GENERAL_COEFFS[3]),
    "e": (float, GENERAL_COEFFS[4]),
    "f": (float, GENERAL_COEFFS[5]),
    "g": (float, GENERAL_COEFFS[6]),
    "dt": (_opt_float("auto"), None),
    "cfl": (float, 1.0),
    "t_end": (_opt_float("t0_over_eps"), None),
    "T0": (float, 1.0),
    "diag_every": (int, 10),
    "family": (str, "gaussian"),
    "amplitude": (float, 0.1),
    "seed": (int, 0),
    "sobolev_s": (float, 4.0),
    "linear": (_bool, False),
    "with_tilde": (_bool, True),
    "consistency_n": (float, 2.0),
    "resolvent_max_terms": (int, 64),
    "resolvent_tol": (float, 1e-13),
    "norm_guard": (float, 0.5),
    "eps_list": (_floats, (0.1, 0.05, 0.025)),
    "modes": (_modes, ((1, 0), (0, 1), (1, 1), (2, 1), (2, -1), (3, 0), (0, 3), (3, 2),
                       (1, -3), (4, 1))),
    "disp_T": (float, 10.0),
    "disp_dt": (float, 1e-3),
    "disp_delta": (float, 1e-8),
    "samples": (int, 100),
    "plots": (_bool, True),
}
REQUIRED = ("system", "eps", "nx", "ny")


class ConfigError(ValueError):
    """Bad config input; names the key and the offending line."""

    def __init__(self, message: str, key: str | None = None, line: str | None = None):
        where = f" ({line})" if line else ""
        super().__init__(f"{message}{where}")
        self.key, self.line = key, line


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated run configuration plus the command-specific settings."""

    run: RunConfig
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]


@dataclass(frozen=True)
class CommandSpec:
    command: str
    config: Path
    overrides: tuple = ()
    out: Path = Path("out")
    seed: int | None = None


def _read_pairs(path: Path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", None,
                              f"{path}:{num}")
        key, value = (x.strip() for x in line.split("=", 1))
        yield key, value, f"{path}:{num}"


def build_run(values: dict) -> RunConfig:
    """Assemble a :class:`RunConfig` from converted config values."""
    system = values["system"]
    eps = values["eps"]
    name = system.lower()
    if name == "case1":
        params = ModelParams.case1(eps)
    elif name == "case2":
        params = ModelParams.case2(eps)
    else:
        params = ModelParams(*(values[k] for k in "abcdefg"), eps=eps)
    resolve_system(system, params)
    if name == "wtb1":
        grid = wtb1_grid(values["nx"], values["ny"], eps, values["lx"], values["ly"],
                         values["dealias_fraction"])
    else:
        grid = GridSpec(values["nx"], values["ny"], values["lx"], values["ly"],
                        values["dealias_fraction"])
    return RunConfig(
        system=system, params=params, grid=grid, dt=values["dt"], cfl=values["cfl"],
        t_end=values["t_end"], T0=values["T0"], diag_every=values["diag_every"],
        initial=InitialData(values["family"], values["amplitude"], values["seed"]),
        sobolev_s=values["sobolev_s"],
        resolvent=ResolventConfig(values["resolvent_max_terms"], values["resolvent_tol"],
                                  values["norm_guard"]),
        linear=values["linear"], with_tilde=values["with_tilde"],
        consistency_n=values["consistency_n"])


def parse_config(path, overrides=()) -> ExperimentConfig:
    """Read a config file, apply ``key=value`` overrides and validate.

    Raises
    ------
    ConfigError
        Unknown key, unconvertible value, missing required key or a value the
        model rejects.
    """
    raw = {}
    for key, value, where in _read_pairs(Path(path)):
        raw[key] = (value, where)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}", None, "--set")
        key, value = (x.strip() for x in item.split("=", 1))
        raw[key] = (value, f"--set {item}")
    values = {}
    for key, (value, where) in raw.items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", key, where)
        conv = KEYS[key][0]
        try:
            values[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", key, where) from exc
    for key in REQUIRED:
        if key not in values:
            raise ConfigError(f"missing required key {key!r}", key, str(path))
    for key, (_, default) in KEYS.items():
        values.setdefault(key, default)
    try:
        run = build_run(values)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig(run, values)


# --- output ----------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header, rows, title: str) -> None:
    lines = [f"# wtbouss {__version__} {title}", ",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def diagnostics_rows(records) -> list:
    return [(r.time, r.energy.e_total, r.energy.e_low, r.energy.e_high, r.energy.e_tilde_high,
             r.curl_res, r.consistency_res, r.guard_factor) for r in records]


def write_plot_script(out: Path, csv_names) -> None:
    lines = ["# gnuplot script; reads only CSV files written alongside it",
             "set datafile separator ','", "set key autotitle columnhead",
             "set terminal pngcairo size 900,600"]
    for name in csv_names:
        stem = name.replace("/", "_").rsplit(".", 1)[0]
        lines += [f"set output '{stem}.png'", f"set title '{name}'",
                  f"plot '{name}' using 1:2 with lines, '' using 1:3 with lines, "
                  "'' using 1:4 with lines"]
    (out / "plots.gp").write_text("\n".join(lines) + "\n", encoding="utf-8")


def log_error(out: Path, command: str, kind: str, message: str, **extra) -> None:
    rec = {"command": command, "kind": kind, "message": message, **extra}
    with open(out / "errors.log", "a", encoding="utf-8") as fh:
        fh.write(json.dumps(rec, sort_keys=True) + "\n")


# --- commands --------------------------------------------------------------

def _exit_for(kind: str | None) -> int:
    return {None: EXIT_OK, "guard": EXIT_GUARD}.get(kind, EXIT_NUMERICAL)


def cmd_simulate(cfg: ExperimentConfig, out: Path) -> int:
    res = integrate(cfg.run)
    write_csv(out / "diagnostics.csv", DIAG_COLUMNS, diagnostics_rows(res.records), "diagnostics")
    if cfg["plots"]:
        write_plot_script(out, ["diagnostics.csv"])
    if res.error:
        t = res.records[-1].time if res.records else 0.0
        log_error(out, "simulate", res.error_kind, res.error, time=t)
    return _exit_for(res.error_kind)


def _sweep_worker(args):
    return sweep_entry(*args)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("WTBOUSS_THREADS", "1")))
    except ValueError:
        return 1


def cmd_sweep(cfg: ExperimentConfig, out: Path) -> int:
    eps_list = cfg["eps_list"]
    jobs = [(cfg.run, eps) for eps in eps_list]
    workers = min(_threads(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_sweep_worker, jobs))
    else:
        results = [_sweep_worker(j) for j in jobs]
    names, rows, code = [], [], EXIT_OK
    for eps, (row, res) in zip(eps_list, results):
        sub = out / f"eps_{eps!r}"
        sub.mkdir(parents=True, exist_ok=True)
        write_csv(sub / "diagnostics.csv", DIAG_COLUMNS, diagnostics_rows(res.records),
                  "diagnostics")
        names.append(f"{sub.name}/diagnostics.csv")
        rows.append((row.eps, row.t_end, row.steps, row.dt, row.e0, row.max_ratio,
                     row.error or ""))
        if res.error:
            log_error(out, "sweep", res.error_kind, res.error, eps=eps)
            code = max(code, _exit_for(res.error_kind))
    write_csv(out / "summary.csv", ("eps", "t_end", "steps", "dt", "e0", "max_ratio", "error"),
              rows, "summary")
    if cfg["plots"]:
        write_plot_script(out, names)
    return code


def cmd_dispersion(cfg: ExperimentConfig, out: Path) -> int:
    from .verify import dispersion_check

    r = cfg.run
    res = dispersion_check(r.system, r.params, r.grid, cfg["modes"], cfg["disp_T"],
                           cfg["disp_dt"], cfg["disp_delta"])
    write_csv(out / "dispersion.csv", ("k1", "k2", "measured", "predicted", "rel_err"),
              [(*x.mode, x.measured, x.predicted, x.rel_err) for x in res], "dispersion")
    return EXIT_OK


def cmd_consistency(cfg: ExperimentConfig, out: Path) -> int:
    from .evolve import make_initial
    from .systems import consistency_residual

    if resolve_system(cfg.run.system, cfg.run.params) != "WTB1":
        raise ConfigError("consistency needs system = WTB1", "system")
    rows, prev = [], None
    for eps in cfg["eps_list"]:
        values = dict(cfg.values, eps=eps)
        run = build_run(values)
        s = make_initial("WTB1", run.params, run.grid, run.initial)
        res = consistency_residual(s, run.params, run.grid, run.consistency_n).total
        rows.append((eps, res, prev / res if prev else math.nan))
        prev = res
    write_csv(out / "consistency.csv", ("eps", "residual", "ratio_from_previous"), rows,
              "consistency")
    return EXIT_OK


def cmd_verify(cfg: ExperimentConfig, out: Path) -> int:
    from .evolve import make_initial
    from .verify import LEMMAS, data_scale, lemma_sampler, ptheta_residual, tilde_residual

    r = cfg.run
    rows = []
    name = resolve_system(r.system, r.params)
    if name in ("Case1", "Case2"):
        s = make_initial(name, r.params, r.grid, r.initial)
        cube = max(data_scale(s, r.grid), 1e-300) ** 3 * math.sqrt(r.grid.lx * r.grid.ly)
        reps = (*ptheta_residual(name, s, r.params.eps, r.grid),
                *tilde_residual(name, s, r.params.eps, r.grid, r.resolvent))
        rows += [(f"residual_{x.equation}", x.l2 / cube) for x in reps]
    eps_list = cfg["eps_list"]
    for lem in LEMMAS:
        rep = lemma_sampler(lem, cfg["samples"], eps_list, r.grid, r.initial.seed, r.sobolev_s,
                            r.resolvent)
        rows += [(f"{lem}@eps={eps!r}", v) for eps, v in rep.max_ratio.items()]
    write_csv(out / "verify.csv", ("check", "value"), rows, "verify")
    return EXIT_OK


def cmd_report(cfg: ExperimentConfig, out: Path) -> int:
    names = sorted(str(p.relative_to(out)) for p in out.rglob("diagnostics.csv"))
    write_plot_script(out, names)
    for p in sorted(out.rglob("*.csv")):
        print(p.relative_to(out))
    return EXIT_OK


HANDLERS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "dispersion": cmd_dispersion,
            "consistency": cmd_consistency, "verify": cmd_verify, "report": cmd_report}


def dispatch(cmd: CommandSpec) -> int:
    """Run one command and return its exit status; failures are logged to ``errors.log``."""
    from .unknowns import ConvergenceError, GuardViolation

    out = Path(cmd.out)
    out.mkdir(parents=True, exist_ok=True)
    overrides = tuple(cmd.overrides) + ((f"seed={cmd.seed}",) if cmd.seed is not None else ())
    try:
        cfg = parse_config(cmd.config, overrides)
        return HANDLERS[cmd.command](cfg, out)
    except (ConfigError, ParamError) as exc:
        log_error(out, cmd.command, "config", str(exc))
        return EXIT_CONFIG
    except GuardViolation as exc:
        log_error(out, cmd.command, "guard", str(exc))
        return EXIT_GUARD
    except (FloatingPointError, ConvergenceError, ValueError) as exc:
        log_error(out, cmd.command, "numerical", str(exc))
        return EXIT_NUMERICAL


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="wtbouss", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, type=Path)
    ap.add_argument("--set", dest="overrides", action="append", default=[],
                    metavar="KEY=VALUE")
    ap.add_argument("--out", type=Path, default=Path("out"))
    ap.add_argument("--seed", type=int)
    a = ap.parse_args(argv)
    code = dispatch(CommandSpec(a.command, a.config, tuple(a.overrides), a.out, a.seed))
    if code:
        print(f"wtbouss: {a.command} failed, see {a.out / 'errors.log'}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
